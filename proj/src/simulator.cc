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

#include "leaksim/simulator.h"

#include <stdexcept>
#include <utility>

namespace leaksim {

namespace {

uint64_t threshold32(double probability) {
    if (probability <= 0) {
        return 0;
    }
    if (probability >= 1) {
        return uint64_t{1} << 32;
    }
    return static_cast<uint64_t>(probability * 4294967296.0);
}

}  // namespace

StochasticChannel::StochasticChannel(const NoiseModel &noise, RandomStream &rng)
    : noise_(noise),
      rng_(rng),
      two_depol_(threshold32(noise.p)),
      two_leak_(threshold32(noise.p_leak())),
      one_depol_(threshold32(noise.p * noise.single_qubit_ratio)),
      one_leak_(threshold32(noise.p_leak() * noise.single_qubit_ratio)) {}

GateFault StochasticChannel::gate_fault(const GateOp &op) {
    GateFault fault;
    if (op.kind == GateKind::Idle) {
        if (rng_.bernoulli(noise_.p_idle)) {
            fault.p0 = Pauli::from_index(1 + rng_.below(3));
        }
        return fault;
    }
    const bool two = op.is_two_qubit();
    const uint64_t depol = two ? two_depol_ : one_depol_;
    uint64_t leak = two ? two_leak_ : one_leak_;
    uint8_t candidates = leak ? leak_candidates(op, noise_.side_policy, noise_.site_filter) : 0;
    if (!candidates) {
        leak = 0;
    }
    if (depol == 0 && leak == 0) {
        return fault;
    }
    // The high and low halves of one draw decide depolarization and leakage independently.
    const uint64_t u = rng_.next_u64();
    if ((u >> 32) < depol) {
        if (two) {
            uint32_t k = 1 + rng_.below(15);
            fault.p0 = Pauli::from_index(k & 3);
            fault.p1 = Pauli::from_index(k >> 2);
        } else {
            fault.p0 = Pauli::from_index(1 + rng_.below(3));
        }
    }
    if ((u & 0xFFFFFFFFull) < leak) {
        if (candidates == 3) {
            fault.leak = rng_.bit() ? 1 : 0;
        } else {
            fault.leak = candidates == 1 ? 0 : 1;
        }
    }
    return fault;
}

PrepFault StochasticChannel::prep_fault(const GateOp &op) {
    PrepFault fault;
    fault.flip = rng_.bernoulli(noise_.p);
    if (noise_.p_init_leak > 0 && prep_may_leak(op, noise_.site_filter)) {
        fault.leak = rng_.bernoulli(noise_.p_init_leak);
    }
    return fault;
}

bool StochasticChannel::measurement_flip(const GateOp &) { return rng_.bernoulli(noise_.meas_flip_probability()); }

Pauli StochasticChannel::leaked_partner_draw(const GateOp &) { return Pauli::from_index(rng_.next_u64() >> 62); }

bool StochasticChannel::leaked_measurement_bit(const GateOp &) {
    return noise_.leaked_meas == LeakedMeasPolicy::FixedOne ? true : rng_.bit();
}

Pauli StochasticChannel::leaked_readout_draw(uint32_t) {
    if (noise_.leaked_meas == LeakedMeasPolicy::FixedOne) {
        return Pauli::Y();
    }
    return Pauli::from_index(rng_.next_u64() >> 62);
}

InjectedChannel::InjectedChannel(const InjectedFault &fault, const std::vector<uint8_t> *bits,
                                 bool depolarize_partner_on_onset)
    : InjectedChannel(std::vector<InjectedFault>{fault}, bits, depolarize_partner_on_onset) {}

InjectedChannel::InjectedChannel(std::vector<InjectedFault> faults, const std::vector<uint8_t> *bits,
                                 bool depolarize_partner_on_onset)
    : faults_(std::move(faults)), bits_(bits), onset_(depolarize_partner_on_onset) {
    std::erase_if(faults_, [](const InjectedFault &f) { return f.kind == InjectedFault::Kind::None; });
    for (size_t i = 0; i < faults_.size(); i++) {
        for (size_t j = i + 1; j < faults_.size(); j++) {
            if (faults_[i].round == faults_[j].round && faults_[i].gate_index == faults_[j].gate_index) {
                throw std::invalid_argument("two injected faults on the same gate");
            }
        }
    }
}

const InjectedFault *InjectedChannel::at(const GateOp &op) const {
    for (const auto &f : faults_) {
        if (f.round == op.label.round && f.gate_index == op.label.gate_index) {
            return &f;
        }
    }
    return nullptr;
}

bool InjectedChannel::next_bit() {
    bool b = bits_ != nullptr && cursor_ < bits_->size() && (*bits_)[cursor_];
    cursor_++;
    return b;
}

GateFault InjectedChannel::gate_fault(const GateOp &op) {
    GateFault fault;
    const InjectedFault *f = at(op);
    if (f == nullptr) {
        return fault;
    }
    if (f->kind == InjectedFault::Kind::Pauli) {
        fault.p0 = f->p0;
        fault.p1 = f->p1;
    } else if (f->kind == InjectedFault::Kind::Leak) {
        fault.leak = static_cast<int8_t>(f->victim);
    }
    return fault;
}

PrepFault InjectedChannel::prep_fault(const GateOp &op) {
    PrepFault fault;
    if (const InjectedFault *f = at(op)) {
        fault.flip = f->kind == InjectedFault::Kind::PrepFlip;
        fault.leak = f->kind == InjectedFault::Kind::PrepLeak;
    }
    return fault;
}

bool InjectedChannel::measurement_flip(const GateOp &op) {
    const InjectedFault *f = at(op);
    return f != nullptr && f->kind == InjectedFault::Kind::MeasFlip;
}

Pauli InjectedChannel::leaked_partner_draw(const GateOp &op) {
    sites_.push_back({DrawSite::Kind::Partner, op.label.round, op.label.gate_index, kNoQubit});
    bool x = next_bit();
    bool z = next_bit();
    return {x, z};
}

bool InjectedChannel::leaked_measurement_bit(const GateOp &op) {
    sites_.push_back({DrawSite::Kind::LeakedMeasurement, op.label.round, op.label.gate_index, op.q0});
    return next_bit();
}

Pauli InjectedChannel::leaked_readout_draw(uint32_t data_edge) {
    sites_.push_back({DrawSite::Kind::LeakedReadout, 0, 0, data_edge});
    bool x = next_bit();
    bool z = next_bit();
    return {x, z};
}

Simulator::Simulator(const ToricLattice &lattice, const CircuitProgram &program)
    : lattice_(lattice), program_(program) {
    if (program.distance != lattice.distance() || program.num_qubits != lattice.num_qubits()) {
        throw std::invalid_argument("circuit program was built for a different lattice");
    }
}

template <typename Channel>
void Simulator::run(Channel &channel, ShotResult &out, const PauliFrame *initial_data_errors) const {
    const uint32_t n = program_.num_qubits;
    PauliFrame &frame = out.frame;
    LeakageMask &mask = out.mask;
    if (frame.size() != n) {
        frame = PauliFrame(n);
        mask = LeakageMask(n);
    } else {
        frame.clear();
        mask.clear();
    }
    SyndromeRecord &record = out.record;
    record.rounds.resize(program_.rounds.size());
    for (auto &bits : record.rounds) {
        if (bits.size() != lattice_.num_checks()) {
            bits = BitVector(lattice_.num_checks());
        } else {
            bits.clear();
        }
    }

    if (initial_data_errors != nullptr) {
        if (initial_data_errors->size() != lattice_.num_data()) {
            throw std::invalid_argument("initial data errors must be indexed by data edge");
        }
        const auto &start = program_.rounds.front().roles;
        for (uint32_t q = 0; q < n; q++) {
            if (start[q].is_data()) {
                frame.set(q, initial_data_errors->get(start[q].site));
            }
        }
    }

    auto leak = [&](uint32_t q) {
        mask.set(q, true);
        frame.set(q, Pauli::I());
    };
    auto two_qubit_fault = [&](const GateOp &g) {
        GateFault fault = channel.gate_fault(g);
        frame.apply(g.q0, fault.p0);
        frame.apply(g.q1, fault.p1);
        if (fault.leak >= 0) {
            uint32_t victim = fault.leak == 0 ? g.q0 : g.q1;
            uint32_t partner = fault.leak == 0 ? g.q1 : g.q0;
            leak(victim);
            if (channel.depolarize_partner_on_onset()) {
                frame.apply(partner, channel.leaked_partner_draw(g));
            }
        }
    };

    for (size_t r = 0; r < program_.rounds.size(); r++) {
        BitVector &measured = record.rounds[r];
        for (const GateOp &g : program_.rounds[r].gates) {
            switch (g.kind) {
                case GateKind::PrepZ:
                case GateKind::PrepX: {
                    mask.set(g.q0, false);
                    frame.set(g.q0, Pauli::I());
                    PrepFault fault = channel.prep_fault(g);
                    if (fault.flip) {
                        frame.apply(g.q0, g.kind == GateKind::PrepZ ? Pauli::X() : Pauli::Z());
                    }
                    if (fault.leak) {
                        leak(g.q0);
                    }
                    break;
                }
                case GateKind::H:
                case GateKind::Idle: {
                    if (mask[g.q0]) {
                        break;
                    }
                    if (g.kind == GateKind::H) {
                        propagate_h_unchecked(frame, g.q0);
                    }
                    GateFault fault = channel.gate_fault(g);
                    frame.apply(g.q0, fault.p0);
                    if (fault.leak == 0) {
                        leak(g.q0);
                    }
                    break;
                }
                case GateKind::CNOT: {
                    const bool l0 = mask[g.q0];
                    const bool l1 = mask[g.q1];
                    if (l0 && l1) {
                        break;
                    }
                    if (l0 || l1) {
                        frame.apply(l0 ? g.q1 : g.q0, channel.leaked_partner_draw(g));
                        break;
                    }
                    propagate_cnot_unchecked(frame, g.q0, g.q1);
                    two_qubit_fault(g);
                    break;
                }
                case GateKind::SWAP: {
                    const bool l0 = mask[g.q0];
                    const bool l1 = mask[g.q1];
                    if (l0 && l1) {
                        break;
                    }
                    propagate_swap_unchecked(frame, g.q0, g.q1);
                    if (l0 || l1) {
                        // The leaked level stays on its physical qubit; the state it was
                        // meant to hand over arrives fully depolarized.
                        uint32_t leaked = l0 ? g.q0 : g.q1;
                        uint32_t clean = l0 ? g.q1 : g.q0;
                        frame.set(leaked, Pauli::I());
                        frame.apply(clean, channel.leaked_partner_draw(g));
                        break;
                    }
                    two_qubit_fault(g);
                    break;
                }
                case GateKind::MeasZ:
                case GateKind::MeasX: {
                    bool bit;
                    if (mask[g.q0]) {
                        bit = channel.leaked_measurement_bit(g);
                    } else {
                        bit = g.kind == GateKind::MeasZ ? frame.xs()[g.q0] : frame.zs()[g.q0];
                        bit ^= channel.measurement_flip(g);
                    }
                    measured.set(g.label.check, bit);
                    break;
                }
            }
        }
    }

    const uint32_t num_data = lattice_.num_data();
    if (record.final_data_frame.size() != num_data) {
        record.final_data_frame = PauliFrame(num_data);
    }
    for (uint32_t e = 0; e < num_data; e++) {
        uint32_t q = program_.final_data_qubits[e];
        record.final_data_frame.set(e, mask[q] ? channel.leaked_readout_draw(e) : frame.get(q));
    }
    record.final_syndrome = lattice_.syndrome_of(record.final_data_frame);
    record.final_data_outcomes = record.final_data_frame.xs();
}

template void Simulator::run<StochasticChannel>(StochasticChannel &, ShotResult &, const PauliFrame *) const;
template void Simulator::run<InjectedChannel>(InjectedChannel &, ShotResult &, const PauliFrame *) const;

void Simulator::run_shot(const NoiseModel &noise, uint64_t master_seed, uint64_t shot_index, ShotResult &out) const {
    RandomStream rng(master_seed, shot_index);
    StochasticChannel channel(noise, rng);
    run(channel, out);
}

ShotResult Simulator::run_shot(const NoiseModel &noise, uint64_t master_seed, uint64_t shot_index) const {
    ShotResult out;
    run_shot(noise, master_seed, shot_index, out);
    return out;
}

}  // namespace leaksim
