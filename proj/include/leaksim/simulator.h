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

#ifndef LEAKSIM_SIMULATOR_H
#define LEAKSIM_SIMULATOR_H

#include <cstdint>
#include <vector>

#include "leaksim/circuit.h"
#include "leaksim/lattice.h"
#include "leaksim/noise_model.h"
#include "leaksim/pauli.h"
#include "leaksim/random_stream.h"

namespace leaksim {

struct SyndromeRecord {
    /// rounds[t][check] is the measured value of `check` in round t.
    std::vector<BitVector> rounds;
    /// Ideal syndrome of the final data frame (the perfect readout round).
    BitVector final_syndrome;
    /// Data error at the end of the shot, indexed by data edge. Leaked data
    /// qubits contribute the Pauli drawn for their readout.
    PauliFrame final_data_frame;
    /// Transversal Z-basis readout of every data edge relative to the noiseless outcome.
    BitVector final_data_outcomes;

    size_t num_rounds() const { return rounds.size(); }
};

struct ShotResult {
    SyndromeRecord record;
    /// Frame and leakage mask over physical qubits after the last round.
    PauliFrame frame;
    LeakageMask mask;
};

/// Fault returned by a channel for one unitary gate, applied after the gate's ideal action.
struct GateFault {
    Pauli p0{};
    Pauli p1{};
    /// -1: no leakage; 0 or 1: q0 or q1 becomes leaked.
    int8_t leak = -1;
};

struct PrepFault {
    bool flip = false;
    bool leak = false;
};

/// Samples faults from a NoiseModel using a per-shot random stream.
class StochasticChannel {
   public:
    StochasticChannel(const NoiseModel &noise, RandomStream &rng);

    GateFault gate_fault(const GateOp &op);
    PrepFault prep_fault(const GateOp &op);
    bool measurement_flip(const GateOp &op);
    /// Pauli applied to the unleaked partner of a leaked qubit.
    Pauli leaked_partner_draw(const GateOp &op);
    bool leaked_measurement_bit(const GateOp &op);
    Pauli leaked_readout_draw(uint32_t data_edge);
    bool depolarize_partner_on_onset() const { return noise_.depolarize_partner_on_onset; }

   private:
    const NoiseModel &noise_;
    RandomStream &rng_;
    uint64_t two_depol_;
    uint64_t two_leak_;
    uint64_t one_depol_;
    uint64_t one_leak_;
};

/// What a single injected fault is.
struct InjectedFault {
    enum class Kind : uint8_t { None, Pauli, Leak, PrepFlip, PrepLeak, MeasFlip };
    Kind kind = Kind::None;
    uint32_t round = 0;
    uint32_t gate_index = 0;
    Pauli p0{};
    Pauli p1{};
    /// 0 or 1 for Kind::Leak.
    uint8_t victim = 0;
};

/// One stochastic choice induced by leakage, in the order the simulator requests them.
struct DrawSite {
    enum class Kind : uint8_t { Partner, LeakedMeasurement, LeakedReadout };
    Kind kind;
    uint32_t round;
    uint32_t gate_index;
    /// Physical qubit for gates, data edge for readouts.
    uint32_t qubit;

    uint32_t width() const { return kind == Kind::LeakedMeasurement ? 1 : 2; }
};

/// Applies a few faults and answers every downstream draw from a fixed bit string.
///
/// Partner and readout draws consume two bits (x then z), leaked measurements
/// one bit. Missing bits read as zero. Every request is logged in `sites()`.
/// At most one fault may sit on any gate.
class InjectedChannel {
   public:
    InjectedChannel(const InjectedFault &fault, const std::vector<uint8_t> *bits, bool depolarize_partner_on_onset);
    InjectedChannel(std::vector<InjectedFault> faults, const std::vector<uint8_t> *bits,
                    bool depolarize_partner_on_onset);

    GateFault gate_fault(const GateOp &op);
    PrepFault prep_fault(const GateOp &op);
    bool measurement_flip(const GateOp &op);
    Pauli leaked_partner_draw(const GateOp &op);
    bool leaked_measurement_bit(const GateOp &op);
    Pauli leaked_readout_draw(uint32_t data_edge);
    bool depolarize_partner_on_onset() const { return onset_; }

    const std::vector<DrawSite> &sites() const { return sites_; }
    size_t bits_consumed() const { return cursor_; }

   private:
    const InjectedFault *at(const GateOp &op) const;
    bool next_bit();

    std::vector<InjectedFault> faults_;
    const std::vector<uint8_t> *bits_;
    bool onset_;
    size_t cursor_ = 0;
    std::vector<DrawSite> sites_;
};

/// Executes a CircuitProgram shot by shot on a Pauli frame plus leakage mask.
class Simulator {
   public:
    Simulator(const ToricLattice &lattice, const CircuitProgram &program);

    const ToricLattice &lattice() const { return lattice_; }
    const CircuitProgram &program() const { return program_; }

    /// Runs every round and the final perfect readout. `out` buffers are reused.
    /// `initial_data_errors`, indexed by data edge, is applied before the first round.
    template <typename Channel>
    void run(Channel &channel, ShotResult &out, const PauliFrame *initial_data_errors = nullptr) const;

    void run_shot(const NoiseModel &noise, uint64_t master_seed, uint64_t shot_index, ShotResult &out) const;
    ShotResult run_shot(const NoiseModel &noise, uint64_t master_seed, uint64_t shot_index) const;

   private:
    const ToricLattice &lattice_;
    const CircuitProgram &program_;
};

extern template void Simulator::run<StochasticChannel>(StochasticChannel &, ShotResult &, const PauliFrame *) const;
extern template void Simulator::run<InjectedChannel>(InjectedChannel &, ShotResult &, const PauliFrame *) const;

}  // namespace leaksim

#endif
