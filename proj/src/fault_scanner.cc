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

#include "leaksim/fault_scanner.h"

#include <atomic>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace leaksim {

const char *fault_kind_name(FaultKind kind) {
    switch (kind) {
        case FaultKind::Pauli: return "pauli";
        case FaultKind::Leak: return "leak";
        case FaultKind::PrepLeak: return "prep_leak";
        case FaultKind::PrepFlip: return "prep_flip";
        case FaultKind::MeasFlip: return "meas_flip";
    }
    return "?";
}

Role FaultSpec::role() const {
    switch (kind) {
        case FaultKind::Leak: return location.roles[victim];
        case FaultKind::Pauli: return p0.is_identity() ? location.roles[1] : location.roles[0];
        default: return location.roles[0];
    }
}

InjectedFault FaultSpec::injected() const {
    InjectedFault f;
    f.round = location.round;
    f.gate_index = location.gate_index;
    switch (kind) {
        case FaultKind::Pauli:
            f.kind = InjectedFault::Kind::Pauli;
            f.p0 = p0;
            f.p1 = p1;
            break;
        case FaultKind::Leak:
            f.kind = InjectedFault::Kind::Leak;
            f.victim = victim;
            break;
        case FaultKind::PrepLeak: f.kind = InjectedFault::Kind::PrepLeak; break;
        case FaultKind::PrepFlip: f.kind = InjectedFault::Kind::PrepFlip; break;
        case FaultKind::MeasFlip: f.kind = InjectedFault::Kind::MeasFlip; break;
    }
    return f;
}

uint64_t FaultSpec::assignments() const { return draw_bits >= 63 ? uint64_t{1} << 63 : uint64_t{1} << draw_bits; }

std::string FaultSpec::str() const {
    std::ostringstream out;
    out << fault_kind_name(kind) << " r" << location.round << " g" << location.gate_index << " "
        << gate_kind_name(location.kind) << "/" << purpose_name(location.purpose);
    if (location.cnot_ordinal) {
        out << " cnot=" << int(location.cnot_ordinal);
    }
    if (kind == FaultKind::Pauli) {
        out << " " << p0.name() << p1.name();
    }
    out << " role=" << role_str(role());
    return out.str();
}

namespace {

std::vector<FaultSpec> raw_universe(const CircuitProgram &program, const ScanPolicy &policy) {
    std::vector<FaultSpec> out;
    for (const Round &round : program.rounds) {
        for (const GateOp &g : round.gates) {
            FaultSpec base;
            base.location = g.label;
            auto add = [&](FaultKind kind) {
                FaultSpec s = base;
                s.kind = kind;
                out.push_back(s);
                return &out.back();
            };
            if (g.is_prep()) {
                if (policy.include_pauli) {
                    add(FaultKind::PrepFlip);
                }
                if (policy.include_init_leak && prep_may_leak(g, policy.site_filter)) {
                    add(FaultKind::PrepLeak);
                }
            } else if (g.is_measure()) {
                if (policy.include_pauli) {
                    add(FaultKind::MeasFlip);
                }
            } else {
                if (policy.include_pauli) {
                    if (g.is_two_qubit()) {
                        for (unsigned k = 1; k < 16; k++) {
                            FaultSpec *s = add(FaultKind::Pauli);
                            s->p0 = Pauli::from_index(k & 3);
                            s->p1 = Pauli::from_index(k >> 2);
                        }
                    } else {
                        for (unsigned k = 1; k < 4; k++) {
                            add(FaultKind::Pauli)->p0 = Pauli::from_index(k);
                        }
                    }
                }
                uint8_t candidates = leak_candidates(g, policy.side_policy, policy.site_filter);
                for (uint8_t v = 0; v < 2; v++) {
                    if (candidates >> v & 1) {
                        add(FaultKind::Leak)->victim = v;
                    }
                }
            }
        }
    }
    return out;
}

std::vector<InjectedFault> injected_faults(const std::vector<FaultSpec> &faults) {
    std::vector<InjectedFault> out;
    out.reserve(faults.size());
    for (const auto &f : faults) {
        out.push_back(f.injected());
    }
    return out;
}

/// Syndrome bits of every round followed by the X and Z parts of the final data frame.
class OutcomeCodec {
   public:
    explicit OutcomeCodec(const ToricLattice &lattice, uint32_t rounds)
        : lattice_(lattice), rounds_(rounds), checks_(lattice.num_checks()), data_(lattice.num_data()) {}

    size_t size() const { return static_cast<size_t>(rounds_) * checks_ + 2 * data_; }

    BitVector pack(const SyndromeRecord &record) const {
        BitVector out(size());
        size_t k = 0;
        for (const auto &round : record.rounds) {
            for (uint32_t s = 0; s < checks_; s++, k++) {
                if (round[s]) {
                    out.set(k, true);
                }
            }
        }
        for (uint32_t e = 0; e < data_; e++) {
            out.set(k + e, record.final_data_frame.xs()[e]);
            out.set(k + data_ + e, record.final_data_frame.zs()[e]);
        }
        return out;
    }

    void unpack(const BitVector &bits, SyndromeRecord &record) const {
        record.rounds.assign(rounds_, BitVector(checks_));
        size_t k = 0;
        for (uint32_t t = 0; t < rounds_; t++) {
            for (uint32_t s = 0; s < checks_; s++, k++) {
                if (bits[k]) {
                    record.rounds[t].set(s, true);
                }
            }
        }
        record.final_data_frame = PauliFrame(data_);
        for (uint32_t e = 0; e < data_; e++) {
            record.final_data_frame.set(e, {bits[k + e], bits[k + data_ + e]});
        }
        record.final_syndrome = lattice_.syndrome_of(record.final_data_frame);
        record.final_data_outcomes = record.final_data_frame.xs();
    }

   private:
    const ToricLattice &lattice_;
    uint32_t rounds_;
    uint32_t checks_;
    uint32_t data_;
};

struct Evaluation {
    bool failed = false;
    bool sampled = false;
    uint64_t examined = 0;
    std::vector<uint8_t> assignment;
};

/// Outcomes are affine in the downstream bits, so only the distinct points of
/// base + span(generators) need decoding.
class SpecEvaluator {
   public:
    SpecEvaluator(const CircuitProgram &program, const ToricLattice &lattice, const ScanPolicy &policy)
        : program_(program),
          lattice_(lattice),
          policy_(policy),
          sim_(lattice, program),
          decoder_(lattice),
          codec_(lattice, static_cast<uint32_t>(program.rounds.size())) {}

    Evaluation evaluate(const std::vector<FaultSpec> &faults, uint64_t sample_seed) {
        Evaluation out;
        auto injected = injected_faults(faults);
        std::vector<uint8_t> bits;
        InjectedChannel first(injected, &bits, policy_.depolarize_partner_on_onset);
        sim_.run(first, shot_);
        const size_t nbits = first.bits_consumed();
        const BitVector base = codec_.pack(shot_.record);

        std::vector<BitVector> basis;
        std::vector<std::vector<uint8_t>> combos;
        std::vector<size_t> pivots;
        for (size_t i = 0; i < nbits; i++) {
            bits.assign(nbits, 0);
            bits[i] = 1;
            InjectedChannel channel(injected, &bits, policy_.depolarize_partner_on_onset);
            sim_.run(channel, shot_);
            if (channel.bits_consumed() != nbits) {
                throw std::logic_error("internal inconsistency: downstream draw sites depend on drawn values");
            }
            BitVector v = codec_.pack(shot_.record);
            v ^= base;
            std::vector<uint8_t> combo(nbits, 0);
            combo[i] = 1;
            for (size_t b = 0; b < basis.size(); b++) {
                if (v[pivots[b]]) {
                    v ^= basis[b];
                    for (size_t k = 0; k < nbits; k++) {
                        combo[k] ^= combos[b][k];
                    }
                }
            }
            if (v.none()) {
                continue;
            }
            size_t pivot = 0;
            while (!v[pivot]) {
                pivot++;
            }
            basis.push_back(std::move(v));
            combos.push_back(std::move(combo));
            pivots.push_back(pivot);
        }

        const size_t rank = basis.size();
        BitVector current = base;
        std::vector<uint8_t> combo(nbits, 0);
        auto check = [&]() {
            out.examined++;
            if (fails(current)) {
                out.failed = true;
                out.assignment = combo;
                return true;
            }
            return false;
        };
        auto toggle = [&](size_t j) {
            current ^= basis[j];
            for (size_t k = 0; k < nbits; k++) {
                combo[k] ^= combos[j][k];
            }
        };

        if (rank <= policy_.max_exact_rank) {
            if (check()) {
                return out;
            }
            for (uint64_t k = 1; k < (uint64_t{1} << rank); k++) {
                toggle(static_cast<size_t>(__builtin_ctzll(k)));
                if (check()) {
                    return out;
                }
            }
            return out;
        }
        if (!policy_.allow_sampling) {
            throw std::runtime_error("fault spec has " + std::to_string(rank) +
                                     " independent downstream outcomes, above the exhaustive bound of " +
                                     std::to_string(policy_.max_exact_rank) + ", and sampling is disabled");
        }
        out.sampled = true;
        if (check()) {
            return out;
        }
        std::mt19937_64 rng(sample_seed);
        for (uint32_t s = 0; s < policy_.sample_count; s++) {
            for (size_t j = 0; j < rank; j++) {
                if (rng() & 1) {
                    toggle(j);
                }
            }
            if (check()) {
                return out;
            }
        }
        return out;
    }

   private:
    bool fails(const BitVector &outcome) {
        codec_.unpack(outcome, record_);
        return decode_record(record_, decoder_, lattice_).overall;
    }

    const CircuitProgram &program_;
    const ToricLattice &lattice_;
    const ScanPolicy &policy_;
    Simulator sim_;
    MatchingDecoder decoder_;
    OutcomeCodec codec_;
    ShotResult shot_;
    SyndromeRecord record_;
};

template <typename Fn>
void parallel_for(size_t count, uint32_t workers, Fn fn) {
    workers = std::max<uint32_t>(1, workers);
    if (workers == 1 || count < 2) {
        for (size_t i = 0; i < count; i++) {
            fn(0, i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (uint32_t w = 0; w < workers; w++) {
        pool.emplace_back([&, w] {
            try {
                for (size_t i = next++; i < count; i = next++) {
                    fn(w, i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                next = count;
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::vector<FaultSpec> enumerate_fault_universe(const CircuitProgram &program, const ToricLattice &lattice,
                                                const ScanPolicy &policy) {
    auto out = raw_universe(program, policy);
    Simulator sim(lattice, program);
    ShotResult shot;
    for (auto &spec : out) {
        InjectedChannel channel(spec.injected(), nullptr, policy.depolarize_partner_on_onset);
        sim.run(channel, shot);
        spec.draw_sites = static_cast<uint32_t>(channel.sites().size());
        spec.draw_bits = static_cast<uint32_t>(channel.bits_consumed());
    }
    return out;
}

SyndromeRecord inject(const CircuitProgram &program, const ToricLattice &lattice, const std::vector<FaultSpec> &faults,
                      const std::vector<uint8_t> &assignment, bool depolarize_partner_on_onset) {
    Simulator sim(lattice, program);
    InjectedChannel channel(injected_faults(faults), &assignment, depolarize_partner_on_onset);
    ShotResult shot;
    sim.run(channel, shot);
    return shot.record;
}

ScanVerdict scan(const CircuitProgram &program, const ToricLattice &lattice, const std::vector<FaultSpec> &universe,
                 const ScanPolicy &policy, uint32_t max_faults) {
    if (max_faults != 1 && max_faults != 2) {
        throw std::invalid_argument("max_faults must be 1 or 2");
    }
    std::vector<std::vector<uint32_t>> combinations;
    if (max_faults == 1) {
        for (uint32_t i = 0; i < universe.size(); i++) {
            combinations.push_back({i});
        }
    } else {
        if (universe.size() > policy.max_pair_universe) {
            throw std::invalid_argument("pair scan needs a universe of at most " +
                                        std::to_string(policy.max_pair_universe) + " specs, got " +
                                        std::to_string(universe.size()));
        }
        for (uint32_t i = 0; i < universe.size(); i++) {
            for (uint32_t j = i + 1; j < universe.size(); j++) {
                const auto &a = universe[i].location;
                const auto &b = universe[j].location;
                if (a.round != b.round || a.gate_index != b.gate_index) {
                    combinations.push_back({i, j});
                }
            }
        }
    }

    const uint32_t workers = std::max<uint32_t>(1, policy.workers);
    std::vector<std::unique_ptr<SpecEvaluator>> evaluators;
    for (uint32_t w = 0; w < workers; w++) {
        evaluators.push_back(std::make_unique<SpecEvaluator>(program, lattice, policy));
    }
    std::vector<Evaluation> results(combinations.size());
    parallel_for(combinations.size(), workers, [&](uint32_t w, size_t i) {
        std::vector<FaultSpec> faults;
        for (uint32_t k : combinations[i]) {
            faults.push_back(universe[k]);
        }
        results[i] = evaluators[w]->evaluate(faults, mix(i));
    });

    ScanVerdict verdict;
    verdict.variant = program.variant;
    verdict.distance = program.distance;
    verdict.rounds = static_cast<uint32_t>(program.rounds.size());
    verdict.max_faults = max_faults;
    verdict.policy = policy;
    verdict.universe_size = universe.size();
    verdict.combinations = combinations.size();
    for (size_t i = 0; i < combinations.size(); i++) {
        verdict.assignments_examined += results[i].examined;
        verdict.sampled_specs += results[i].sampled;
        if (results[i].failed) {
            FailingSpec f;
            for (uint32_t k : combinations[i]) {
                f.faults.push_back(universe[k]);
            }
            f.assignment = std::move(results[i].assignment);
            verdict.failing_specs.push_back(std::move(f));
        }
    }
    verdict.distance_preserving = max_faults == 1 && verdict.failing_specs.empty();
    return verdict;
}

std::string ScanVerdict::report_json() const {
    using nlohmann::ordered_json;
    ordered_json j;
    j["format"] = "leaksim-scan";
    j["version"] = 1;
    j["variant"] = variant_name(variant);
    j["d"] = distance;
    j["rounds"] = rounds;
    j["max_faults"] = max_faults;
    j["side_policy"] = side_policy_name(policy.side_policy);
    j["site_filter"] = policy.site_filter.str();
    j["include_init_leak"] = policy.include_init_leak;
    j["include_pauli"] = policy.include_pauli;
    j["universe_size"] = universe_size;
    j["combinations"] = combinations;
    j["assignments_examined"] = assignments_examined;
    j["sampled_specs"] = sampled_specs;
    j["failing_count"] = failing_specs.size();
    j["distance_preserving"] = distance_preserving;

    std::map<std::tuple<std::string, std::string, std::string, int, std::string>, size_t> groups;
    for (const auto &f : failing_specs) {
        for (const auto &spec : f.faults) {
            groups[{fault_kind_name(spec.kind), gate_kind_name(spec.location.kind), purpose_name(spec.location.purpose),
                    spec.location.cnot_ordinal, role_kind_name(spec.role().kind)}]++;
        }
    }
    ordered_json g = ordered_json::array();
    for (const auto &[key, count] : groups) {
        ordered_json e;
        e["kind"] = std::get<0>(key);
        e["gate"] = std::get<1>(key);
        e["purpose"] = std::get<2>(key);
        e["cnot_ordinal"] = std::get<3>(key);
        e["role"] = std::get<4>(key);
        e["count"] = count;
        g.push_back(e);
    }
    j["failing_groups"] = g;

    ordered_json list = ordered_json::array();
    for (const auto &f : failing_specs) {
        ordered_json item;
        ordered_json faults = ordered_json::array();
        for (const auto &spec : f.faults) {
            ordered_json s;
            s["kind"] = fault_kind_name(spec.kind);
            s["round"] = spec.location.round;
            s["gate_index"] = spec.location.gate_index;
            s["gate"] = gate_kind_name(spec.location.kind);
            s["purpose"] = purpose_name(spec.location.purpose);
            s["cnot_ordinal"] = spec.location.cnot_ordinal;
            if (spec.location.check == kNoCheck) {
                s["check"] = nullptr;
            } else {
                s["check"] = spec.location.check;
            }
            s["role"] = role_str(spec.role());
            if (spec.kind == FaultKind::Pauli) {
                s["pauli"] = std::string{spec.p0.name(), spec.p1.name()};
            }
            if (spec.kind == FaultKind::Leak) {
                s["victim"] = spec.victim;
            }
            faults.push_back(s);
        }
        item["faults"] = faults;
        std::string bits;
        for (uint8_t b : f.assignment) {
            bits.push_back(b ? '1' : '0');
        }
        item["assignment"] = bits;
        list.push_back(item);
    }
    j["failing_specs"] = list;
    return j.dump(2) + "\n";
}

namespace {

struct LineMasks {
    /// X-type errors run parallel to a logical when they fill part of one h row or one v column;
    /// Z-type errors when they sit in one h column or one v row.
    std::vector<uint64_t> x_lines;
    std::vector<uint64_t> z_lines;
};

LineMasks line_masks(const ToricLattice &lattice) {
    const uint32_t d = lattice.distance();
    LineMasks m;
    for (uint32_t a = 0; a < d; a++) {
        uint64_t h_row = 0, h_col = 0, v_row = 0, v_col = 0;
        for (uint32_t b = 0; b < d; b++) {
            h_row |= uint64_t{1} << lattice.h_edge(a, b);
            h_col |= uint64_t{1} << lattice.h_edge(b, a);
            v_row |= uint64_t{1} << lattice.v_edge(a, b);
            v_col |= uint64_t{1} << lattice.v_edge(b, a);
        }
        m.x_lines.push_back(h_row);
        m.x_lines.push_back(v_col);
        m.z_lines.push_back(h_col);
        m.z_lines.push_back(v_row);
    }
    return m;
}

uint64_t to_mask(const BitVector &bits) { return bits.words().empty() ? 0 : bits.words()[0]; }

/// Minimum weight over e + span(generators) and whether a minimizer lies on one line.
std::pair<uint32_t, bool> coset_minimum(uint64_t e, const std::vector<uint64_t> &generators,
                                        const std::vector<uint64_t> &lines) {
    auto on_line = [&](uint64_t v) {
        if (__builtin_popcountll(v) < 2) {
            return false;
        }
        for (uint64_t l : lines) {
            if ((v & ~l) == 0) {
                return true;
            }
        }
        return false;
    };
    uint64_t v = e;
    uint32_t best = static_cast<uint32_t>(__builtin_popcountll(v));
    bool parallel = on_line(v);
    const uint64_t total = uint64_t{1} << generators.size();
    for (uint64_t k = 1; k < total; k++) {
        v ^= generators[__builtin_ctzll(k)];
        uint32_t w = static_cast<uint32_t>(__builtin_popcountll(v));
        if (w < best) {
            best = w;
            parallel = on_line(v);
        } else if (w == best && !parallel) {
            parallel = on_line(v);
        }
    }
    return {best, parallel};
}

}  // namespace

ResidualWeight residual_weight(const PauliFrame &data_error, const ToricLattice &lattice) {
    if (data_error.size() != lattice.num_data()) {
        throw std::invalid_argument("data error must be indexed by data edge");
    }
    ResidualWeight out;
    out.raw_x = static_cast<uint32_t>(data_error.xs().popcount());
    out.raw_z = static_cast<uint32_t>(data_error.zs().popcount());
    out.raw_count = static_cast<uint32_t>(data_error.weight());
    const uint32_t n = lattice.num_checks_of_type();

    if (lattice.num_data() <= 64) {
        // X errors are reduced by the X-type (plaquette) stabilizers, Z errors by the Z-type (vertex) ones.
        std::vector<uint64_t> x_gens, z_gens;
        for (uint32_t k = 0; k < n; k++) {
            uint64_t zv = 0, xv = 0;
            for (uint32_t e : lattice.support(k)) {
                zv |= uint64_t{1} << e;
            }
            for (uint32_t e : lattice.support(n + k)) {
                xv |= uint64_t{1} << e;
            }
            z_gens.push_back(zv);
            x_gens.push_back(xv);
        }
        // The product of all generators of one type is the identity, so one can be dropped.
        x_gens.pop_back();
        z_gens.pop_back();
        LineMasks lines = line_masks(lattice);
        std::tie(out.reduced_x, out.parallel_x) = coset_minimum(to_mask(data_error.xs()), x_gens, lines.x_lines);
        std::tie(out.reduced_z, out.parallel_z) = coset_minimum(to_mask(data_error.zs()), z_gens, lines.z_lines);
        return out;
    }

    // Matching gives the minimum weight of any error with the same syndrome. It is
    // exact when that minimum sits in the same logical class as the input.
    MatchingDecoder decoder(lattice);
    SyndromeRecord record;
    record.final_syndrome = lattice.syndrome_of(data_error);
    record.final_data_frame = data_error;
    auto events = extract_events(record, lattice);
    auto correction = decoder.decode(events);
    PauliFrame product = data_error ^ correction.flips;
    auto flips = logical_flips(product, lattice);
    out.reduced_x = static_cast<uint32_t>(correction.flips.xs().popcount());
    out.reduced_z = static_cast<uint32_t>(correction.flips.zs().popcount());
    if (flips[2] || flips[3]) {
        out.reduced_x = out.raw_x;
        out.approximate = true;
    }
    if (flips[0] || flips[1]) {
        out.reduced_z = out.raw_z;
        out.approximate = true;
    }
    return out;
}

ResidualWeight residual_weight(const CircuitProgram &program, const ToricLattice &lattice,
                               const std::vector<FaultSpec> &faults, const std::vector<uint8_t> &assignment,
                               bool depolarize_partner_on_onset) {
    auto record = inject(program, lattice, faults, assignment, depolarize_partner_on_onset);
    return residual_weight(record.final_data_frame, lattice);
}

}  // namespace leaksim
