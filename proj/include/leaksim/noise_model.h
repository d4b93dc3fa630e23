// Copyright 2026 The leaksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEAKSIM_NOISE_MODEL_H
#define LEAKSIM_NOISE_MODEL_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "leaksim/circuit.h"

namespace leaksim {

enum class SidePolicy : uint8_t {
    TwoSided,
    /// Only the control of a two-qubit gate (q0 of a SWAP) can leak; single-qubit gates never leak.
    ControlOnly,
};

enum class LeakedMeasPolicy : uint8_t { RandomBit, FixedOne };

const char *side_policy_name(SidePolicy policy);
SidePolicy parse_side_policy(std::string_view name);
const char *leaked_meas_name(LeakedMeasPolicy policy);
LeakedMeasPolicy parse_leaked_meas(std::string_view name);

/// Restricts where leakage events may occur.
struct SiteFilter {
    enum class Kind : uint8_t { All, DataOnly, AncillaOnly, CnotOrdinal };
    Kind kind = Kind::All;
    /// 1-4 when kind is CnotOrdinal.
    uint8_t ordinal = 0;

    static SiteFilter all() { return {}; }
    static SiteFilter data_only() { return {Kind::DataOnly, 0}; }
    static SiteFilter ancilla_only() { return {Kind::AncillaOnly, 0}; }
    static SiteFilter cnot_ordinal(uint8_t k);

    /// "all", "data_only", "ancilla_only" or "cnot_ordinal(k)".
    std::string str() const;
    static SiteFilter parse(std::string_view text);

    /// Whether a qubit holding `role` may be the victim at gate `op`.
    bool admits(const GateOp &op, const Role &role) const;

    bool operator==(const SiteFilter &) const = default;
};

struct NoiseModel {
    /// Depolarizing probability per gate.
    double p = 0;
    /// Leakage-to-depolarizing ratio; leakage probability per gate is r * p.
    double r = 1.0;
    SidePolicy side_policy = SidePolicy::TwoSided;
    SiteFilter site_filter{};
    double p_init_leak = 0;
    /// Classical flip probability of unleaked measurements; unset means p.
    std::optional<double> meas_flip;
    LeakedMeasPolicy leaked_meas = LeakedMeasPolicy::RandomBit;
    /// Also depolarize the partner at the gate where a leak starts.
    bool depolarize_partner_on_onset = false;
    /// Pauli noise on Idle ops (only present when the program was built with idles).
    double p_idle = 0;
    /// Single-qubit gate error and leakage probabilities relative to two-qubit gates.
    double single_qubit_ratio = 1.0;

    double p_leak() const { return r * p; }
    double meas_flip_probability() const { return meas_flip.value_or(p); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Bit 0 set if q0 of `op` may become leaked at the gate, bit 1 for q1.
/// Preparations, measurements and idles never qualify here.
uint8_t leak_candidates(const GateOp &op, SidePolicy side, const SiteFilter &filter);

/// Whether a preparation may leave its qubit leaked under `filter`.
bool prep_may_leak(const GateOp &op, const SiteFilter &filter);

}  // namespace leaksim

#endif
