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

#ifndef LEAKSIM_FAULT_SCANNER_H
#define LEAKSIM_FAULT_SCANNER_H

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "leaksim/circuit.h"
#include "leaksim/decoder.h"
#include "leaksim/lattice.h"
#include "leaksim/noise_model.h"
#include "leaksim/simulator.h"

namespace leaksim {

/// Which faults the scanner injects.
struct ScanPolicy {
    SidePolicy side_policy = SidePolicy::TwoSided;
    SiteFilter site_filter{};
    bool include_init_leak = true;
    /// Pauli faults on unitary gates, preparation flips and measurement flips.
    bool include_pauli = true;
    bool depolarize_partner_on_onset = false;
    /// Largest number of independent downstream outcomes enumerated exhaustively (as log2).
    uint32_t max_exact_rank = 24;
    /// Outcome samples per spec when the rank exceeds `max_exact_rank`.
    uint32_t sample_count = 4096;
    /// When false, exceeding `max_exact_rank` throws instead of sampling.
    bool allow_sampling = true;
    /// Largest single-fault universe for which pairs are scanned.
    size_t max_pair_universe = 600;
    uint32_t workers = 1;
};

enum class FaultKind : uint8_t { Pauli, Leak, PrepLeak, PrepFlip, MeasFlip };

const char *fault_kind_name(FaultKind kind);

/// One injectable fault. Downstream leakage draws are not part of the spec;
/// the scanner enumerates them.
struct FaultSpec {
    FaultKind kind = FaultKind::Pauli;
    FaultLocation location;
    /// Pauli faults: errors on q0 and q1.
    Pauli p0{};
    Pauli p1{};
    /// Leak: 0 or 1 for q0 or q1.
    uint8_t victim = 0;
    /// Downstream draws and the bits they take when this fault is injected alone.
    uint32_t draw_sites = 0;
    uint32_t draw_bits = 0;

    bool is_leakage() const { return kind == FaultKind::Leak || kind == FaultKind::PrepLeak; }
    /// Role of the faulty qubit before the gate (q1's role for a Pauli acting only on q1).
    Role role() const;
    InjectedFault injected() const;
    /// Number of outcome assignments, saturating at 2^63.
    uint64_t assignments() const;
    std::string str() const;
};

std::vector<FaultSpec> enumerate_fault_universe(const CircuitProgram &program, const ToricLattice &lattice,
                                                const ScanPolicy &policy);

/// A failing combination with the downstream bits that made it fail.
struct FailingSpec {
    std::vector<FaultSpec> faults;
    std::vector<uint8_t> assignment;
};

struct ScanVerdict {
    Variant variant = Variant::Standard;
    uint32_t distance = 0;
    uint32_t rounds = 0;
    uint32_t max_faults = 1;
    ScanPolicy policy;
    size_t universe_size = 0;
    size_t combinations = 0;
    uint64_t assignments_examined = 0;
    size_t sampled_specs = 0;
    std::vector<FailingSpec> failing_specs;
    /// No single fault causes a logical failure (only meaningful at max_faults=1).
    bool distance_preserving = false;

    /// Structured report with failures grouped by fault kind, gate, cnot ordinal and role.
    std::string report_json() const;
};

/// Injects each spec (or pair, for max_faults=2) with all other noise off and
/// decodes every distinct downstream outcome. A spec fails if any outcome does.
ScanVerdict scan(const CircuitProgram &program, const ToricLattice &lattice, const std::vector<FaultSpec> &universe,
                 const ScanPolicy &policy, uint32_t max_faults = 1);

/// Outcome of injecting `faults` with the given downstream bits.
SyndromeRecord inject(const CircuitProgram &program, const ToricLattice &lattice, const std::vector<FaultSpec> &faults,
                      const std::vector<uint8_t> &assignment, bool depolarize_partner_on_onset = false);

/// Minimum weight of each Pauli part of a data error modulo the stabilizer group.
struct ResidualWeight {
    uint32_t raw_x = 0;
    uint32_t raw_z = 0;
    uint32_t reduced_x = 0;
    uint32_t reduced_z = 0;
    /// Some minimum representative of weight >= 2 lies on one line parallel to a logical.
    bool parallel_x = false;
    bool parallel_z = false;
    /// Set when the reduced weights are only matching-based bounds.
    bool approximate = false;

    uint32_t raw_count = 0;
    uint32_t reduced() const { return reduced_x + reduced_z; }
    bool parallel() const { return parallel_x || parallel_z; }
};

/// Exact coset search for num_data <= 64 (d <= 5), matching bound otherwise.
ResidualWeight residual_weight(const PauliFrame &data_error, const ToricLattice &lattice);

ResidualWeight residual_weight(const CircuitProgram &program, const ToricLattice &lattice,
                               const std::vector<FaultSpec> &faults, const std::vector<uint8_t> &assignment,
                               bool depolarize_partner_on_onset = false);

}  // namespace leaksim

#endif
