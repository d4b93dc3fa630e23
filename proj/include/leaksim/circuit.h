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

#ifndef LEAKSIM_CIRCUIT_H
#define LEAKSIM_CIRCUIT_H

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "leaksim/lattice.h"

namespace leaksim {

inline constexpr uint32_t kNoQubit = std::numeric_limits<uint32_t>::max();
inline constexpr uint32_t kNoCheck = std::numeric_limits<uint32_t>::max();

enum class GateKind : uint8_t { PrepZ, PrepX, H, CNOT, SWAP, MeasZ, MeasX, Idle };

enum class RoleKind : uint8_t { Data, AncillaZ, AncillaX, Spare, None };

/// What a physical qubit is doing: data edge `site`, ancilla of check `site`,
/// or spare reserved for check `site`.
struct Role {
    RoleKind kind = RoleKind::None;
    uint32_t site = 0;

    bool is_data() const { return kind == RoleKind::Data; }
    bool is_ancilla() const { return kind == RoleKind::AncillaZ || kind == RoleKind::AncillaX; }
    bool operator==(const Role &) const = default;
};

/// Why a gate is in the circuit. Used for fault classification.
enum class GatePurpose : uint8_t {
    AncillaPrep,
    SparePrep,
    BasisIn,    // H after an X-ancilla preparation
    CheckCnot,  // one of the four stabilizer CNOTs
    Reversal,   // H from reversing a CNOT by conjugation
    BasisOut,   // H before an X-ancilla measurement
    MidSwap,    // ancilla/spare exchange in the middle of a check
    LrcSwap,    // end-of-round data/ancilla exchange
    Measure,
    Idle,
};

enum class Variant : uint8_t { Standard, SwapLrc, SwapAlt, GateBiased, GateBiasedOpt, MixedLrc };

inline constexpr std::array<Variant, 6> kAllVariants = {Variant::Standard,   Variant::SwapLrc,
                                                        Variant::SwapAlt,    Variant::GateBiased,
                                                        Variant::GateBiasedOpt, Variant::MixedLrc};

const char *gate_kind_name(GateKind kind);
const char *role_kind_name(RoleKind kind);
const char *purpose_name(GatePurpose purpose);
const char *variant_name(Variant variant);
/// Throws std::invalid_argument for unknown names.
Variant parse_variant(std::string_view name);
std::string role_str(const Role &role);

struct FaultLocation {
    uint32_t round = 0;
    uint32_t gate_index = 0;
    GateKind kind = GateKind::Idle;
    /// 1-4 for the stabilizer CNOTs in schedule order, 0 otherwise.
    uint8_t cnot_ordinal = 0;
    GatePurpose purpose = GatePurpose::Idle;
    /// Check whose extraction circuit owns the gate, or kNoCheck.
    uint32_t check = kNoCheck;
    /// Roles of the touched qubits immediately before the gate.
    std::array<Role, 2> roles{};
};

struct GateOp {
    GateKind kind = GateKind::Idle;
    /// For CNOT q0 is the control; for SWAP q0 is the side treated as the
    /// driven qubit by one-sided leakage.
    uint32_t q0 = kNoQubit;
    uint32_t q1 = kNoQubit;
    uint32_t step = 0;
    FaultLocation label;

    bool is_two_qubit() const { return kind == GateKind::CNOT || kind == GateKind::SWAP; }
    bool is_prep() const { return kind == GateKind::PrepZ || kind == GateKind::PrepX; }
    bool is_measure() const { return kind == GateKind::MeasZ || kind == GateKind::MeasX; }
    bool is_single_qubit_unitary() const { return kind == GateKind::H || kind == GateKind::Idle; }
};

/// Stabilizer CNOT order. Default Z:(N,W,E,S), X:(N,E,W,S).
struct Schedule {
    std::array<Direction, 4> z_order{Direction::North, Direction::West, Direction::East, Direction::South};
    std::array<Direction, 4> x_order{Direction::North, Direction::East, Direction::West, Direction::South};

    const std::array<Direction, 4> &order(CheckType type) const { return type == CheckType::Z ? z_order : x_order; }
    bool operator==(const Schedule &) const = default;
};

struct BuildOptions {
    Schedule schedule{};
    /// Insert explicit Idle ops for every qubit not acted on in a timestep.
    bool emit_idles = false;
};

struct Round {
    /// Gates in time order; `step` is non-decreasing.
    std::vector<GateOp> gates;
    /// Physical qubit -> role at the start of the round.
    std::vector<Role> roles;
    uint32_t num_steps = 0;
};

struct CircuitProgram {
    Variant variant = Variant::Standard;
    uint32_t distance = 0;
    uint32_t num_qubits = 0;
    bool uses_spares = false;
    uint32_t swap_period = 0;
    Schedule schedule{};
    std::vector<Round> rounds;
    /// Physical qubit -> role after the last round.
    std::vector<Role> final_roles;
    /// Data edge -> physical qubit holding it after the last round.
    std::vector<uint32_t> final_data_qubits;
    /// Single-qubit gates per X-check circuit beyond the plain SWAP-LRC circuit (gate-biased variants only).
    uint32_t extra_single_qubit_gates_per_x_check = 0;

    size_t num_rounds() const { return rounds.size(); }
    size_t total_gates() const;
    size_t count(GateKind kind) const;
    size_t count_in_round(size_t round, GateKind kind) const;
};

CircuitProgram build_standard(const ToricLattice &lattice, uint32_t rounds, const BuildOptions &options = {});

/// SWAP-LRC with the end-of-round exchange applied in rounds r with (r+1) % period == 0.
CircuitProgram build_swap_lrc(const ToricLattice &lattice, uint32_t rounds, uint32_t period,
                              const BuildOptions &options = {});

/// SWAP-LRC with the X-check CNOTs whose control is the ancilla reversed by H conjugation:
/// all four when `optimized` is false, only the first two when it is true.
CircuitProgram build_gate_biased(const ToricLattice &lattice, uint32_t rounds, bool optimized,
                                 const BuildOptions &options = {});

/// Mid-check ancilla/spare exchange after the second CNOT plus the end-of-round SWAP-LRC.
CircuitProgram build_mixed_lrc(const ToricLattice &lattice, uint32_t rounds, const BuildOptions &options = {});

/// Dispatches on the variant. The lattice must have spares for MixedLrc.
CircuitProgram build_variant(Variant variant, const ToricLattice &lattice, uint32_t rounds,
                             const BuildOptions &options = {});

/// Net single-qubit gates a gate-biased X-check circuit carries over the SWAP-LRC one
/// after H-pair cancellation.
inline constexpr uint32_t kGateBiasedExtraGates = 6;
inline constexpr uint32_t kGateBiasedOptExtraGates = 4;

/// Structural checks: no qubit used twice in a timestep, every ancilla
/// measurement preceded by a preparation in the same round, and roles carried
/// consistently across rounds. Throws std::logic_error on violation.
void validate_program(const CircuitProgram &program);

/// Versioned line-oriented text dump, one gate per record.
std::string emit_program_text(const CircuitProgram &program);

}  // namespace leaksim

#endif
