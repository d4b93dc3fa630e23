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

#include "leaksim/circuit.h"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace leaksim {

const char *gate_kind_name(GateKind kind) {
    switch (kind) {
        case GateKind::PrepZ: return "PrepZ";
        case GateKind::PrepX: return "PrepX";
        case GateKind::H: return "H";
        case GateKind::CNOT: return "CNOT";
        case GateKind::SWAP: return "SWAP";
        case GateKind::MeasZ: return "MeasZ";
        case GateKind::MeasX: return "MeasX";
        case GateKind::Idle: return "Idle";
    }
    return "?";
}

const char *role_kind_name(RoleKind kind) {
    switch (kind) {
        case RoleKind::Data: return "data";
        case RoleKind::AncillaZ: return "ancilla_z";
        case RoleKind::AncillaX: return "ancilla_x";
        case RoleKind::Spare: return "spare";
        case RoleKind::None: return "none";
    }
    return "?";
}

const char *purpose_name(GatePurpose purpose) {
    switch (purpose) {
        case GatePurpose::AncillaPrep: return "ancilla_prep";
        case GatePurpose::SparePrep: return "spare_prep";
        case GatePurpose::BasisIn: return "basis_in";
        case GatePurpose::CheckCnot: return "check_cnot";
        case GatePurpose::Reversal: return "reversal";
        case GatePurpose::BasisOut: return "basis_out";
        case GatePurpose::MidSwap: return "mid_swap";
        case GatePurpose::LrcSwap: return "lrc_swap";
        case GatePurpose::Measure: return "measure";
        case GatePurpose::Idle: return "idle";
    }
    return "?";
}

const char *variant_name(Variant variant) {
    switch (variant) {
        case Variant::Standard: return "standard";
        case Variant::SwapLrc: return "swap_lrc";
        case Variant::SwapAlt: return "swap_alt";
        case Variant::GateBiased: return "gate_biased";
        case Variant::GateBiasedOpt: return "gate_biased_opt";
        case Variant::MixedLrc: return "mixed_lrc";
    }
    return "?";
}

Variant parse_variant(std::string_view name) {
    for (Variant v : kAllVariants) {
        if (name == variant_name(v)) {
            return v;
        }
    }
    throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

std::string role_str(const Role &role) {
    switch (role.kind) {
        case RoleKind::Data: return "d" + std::to_string(role.site);
        case RoleKind::AncillaZ: return "z" + std::to_string(role.site);
        case RoleKind::AncillaX: return "x" + std::to_string(role.site);
        case RoleKind::Spare: return "s" + std::to_string(role.site);
        case RoleKind::None: return "-";
    }
    return "?";
}

size_t CircuitProgram::total_gates() const {
    size_t n = 0;
    for (const auto &round : rounds) {
        n += round.gates.size();
    }
    return n;
}

size_t CircuitProgram::count(GateKind kind) const {
    size_t n = 0;
    for (size_t r = 0; r < rounds.size(); r++) {
        n += count_in_round(r, kind);
    }
    return n;
}

size_t CircuitProgram::count_in_round(size_t round, GateKind kind) const {
    return std::count_if(rounds.at(round).gates.begin(), rounds.at(round).gates.end(),
                         [&](const GateOp &g) { return g.kind == kind; });
}

namespace {

/// Tracks which physical qubit currently carries each role.
struct RoleTracker {
    std::vector<Role> roles;
    std::vector<uint32_t> data_qubit;
    std::vector<uint32_t> ancilla_qubit;
    std::vector<uint32_t> spare_qubit;

    RoleTracker(const ToricLattice &lattice, bool spares) : roles(lattice.num_qubits()) {
        for (uint32_t e = 0; e < lattice.num_data(); e++) {
            roles[e] = {RoleKind::Data, e};
        }
        for (uint32_t s = 0; s < lattice.num_checks(); s++) {
            RoleKind kind = lattice.check_type(s) == CheckType::Z ? RoleKind::AncillaZ : RoleKind::AncillaX;
            roles[lattice.ancilla_qubit(s)] = {kind, s};
            if (spares) {
                roles[lattice.spare_qubit(s)] = {RoleKind::Spare, s};
            }
        }
        data_qubit.resize(lattice.num_data());
        ancilla_qubit.resize(lattice.num_checks());
        if (spares) {
            spare_qubit.resize(lattice.num_checks());
        }
        for (uint32_t q = 0; q < roles.size(); q++) {
            place(q);
        }
    }

    void place(uint32_t q) {
        const Role &r = roles[q];
        switch (r.kind) {
            case RoleKind::Data: data_qubit[r.site] = q; break;
            case RoleKind::AncillaZ:
            case RoleKind::AncillaX: ancilla_qubit[r.site] = q; break;
            case RoleKind::Spare: spare_qubit[r.site] = q; break;
            case RoleKind::None: break;
        }
    }

    void exchange(uint32_t a, uint32_t b) {
        std::swap(roles[a], roles[b]);
        place(a);
        place(b);
    }
};

using Layer = std::vector<GateOp>;

GateOp make_gate(GateKind kind, uint32_t q0, uint32_t q1, GatePurpose purpose, uint32_t check, uint8_t ordinal) {
    GateOp g;
    g.kind = kind;
    g.q0 = q0;
    g.q1 = q1;
    g.label.kind = kind;
    g.label.purpose = purpose;
    g.label.check = check;
    g.label.cnot_ordinal = ordinal;
    return g;
}

/// Emits the layers of one syndrome-extraction round, keeping the role tracker current.
class RoundWriter {
   public:
    RoundWriter(const ToricLattice &lattice, const Schedule &schedule, RoleTracker &tracker)
        : lattice_(lattice), schedule_(schedule), tracker_(tracker) {}

    void prep(bool with_spares) {
        Layer layer;
        for (uint32_t s = 0; s < lattice_.num_checks(); s++) {
            layer.push_back(
                make_gate(GateKind::PrepZ, tracker_.ancilla_qubit[s], kNoQubit, GatePurpose::AncillaPrep, s, 0));
            if (with_spares) {
                layer.push_back(
                    make_gate(GateKind::PrepZ, tracker_.spare_qubit[s], kNoQubit, GatePurpose::SparePrep, s, 0));
            }
        }
        layers_.push_back(std::move(layer));
    }

    void x_basis(GatePurpose purpose) {
        Layer layer;
        for (uint32_t s = lattice_.num_checks_of_type(); s < lattice_.num_checks(); s++) {
            layer.push_back(make_gate(GateKind::H, tracker_.ancilla_qubit[s], kNoQubit, purpose, s, 0));
        }
        layers_.push_back(std::move(layer));
    }

    /// CNOT layer k in [0, 4).
    void cnots(uint32_t k) {
        Layer layer;
        for (uint32_t s = 0; s < lattice_.num_checks(); s++) {
            CheckType type = lattice_.check_type(s);
            uint32_t data = tracker_.data_qubit[lattice_.neighbor(s, schedule_.order(type)[k])];
            uint32_t anc = tracker_.ancilla_qubit[s];
            auto ordinal = static_cast<uint8_t>(k + 1);
            if (type == CheckType::Z) {
                layer.push_back(make_gate(GateKind::CNOT, data, anc, GatePurpose::CheckCnot, s, ordinal));
            } else {
                layer.push_back(make_gate(GateKind::CNOT, anc, data, GatePurpose::CheckCnot, s, ordinal));
            }
        }
        layers_.push_back(std::move(layer));
    }

    void mid_swap() {
        Layer layer;
        for (uint32_t s = 0; s < lattice_.num_checks(); s++) {
            layer.push_back(make_gate(GateKind::SWAP, tracker_.ancilla_qubit[s], tracker_.spare_qubit[s],
                                      GatePurpose::MidSwap, s, 0));
        }
        apply_swaps(layer);
        layers_.push_back(std::move(layer));
    }

    /// Each check exchanges with its North data neighbour; this pairs every data edge with exactly one check.
    void lrc_swap() {
        Layer layer;
        for (uint32_t s = 0; s < lattice_.num_checks(); s++) {
            uint32_t data = tracker_.data_qubit[lattice_.neighbor(s, Direction::North)];
            layer.push_back(
                make_gate(GateKind::SWAP, data, tracker_.ancilla_qubit[s], GatePurpose::LrcSwap, s, 0));
        }
        apply_swaps(layer);
        layers_.push_back(std::move(layer));
    }

    void measure() {
        Layer layer;
        for (uint32_t s = 0; s < lattice_.num_checks(); s++) {
            layer.push_back(
                make_gate(GateKind::MeasZ, tracker_.ancilla_qubit[s], kNoQubit, GatePurpose::Measure, s, 0));
        }
        layers_.push_back(std::move(layer));
    }

    std::vector<Layer> take() { return std::move(layers_); }

   private:
    void apply_swaps(const Layer &layer) {
        for (const auto &g : layer) {
            tracker_.exchange(g.q0, g.q1);
        }
    }

    const ToricLattice &lattice_;
    const Schedule &schedule_;
    RoleTracker &tracker_;
    std::vector<Layer> layers_;
};

/// Assigns steps, gate indices and role labels by replaying the round from its starting roles.
Round finalize_round(std::vector<Layer> layers, const std::vector<Role> &start_roles, uint32_t round_index,
                     bool emit_idles) {
    Round round;
    round.roles = start_roles;
    std::vector<Role> roles = start_roles;
    uint32_t step = 0;
    std::vector<uint8_t> touched(roles.size());
    for (auto &layer : layers) {
        if (layer.empty()) {
            continue;
        }
        if (emit_idles) {
            std::fill(touched.begin(), touched.end(), 0);
            for (const auto &g : layer) {
                touched[g.q0] = 1;
                if (g.q1 != kNoQubit) {
                    touched[g.q1] = 1;
                }
            }
            for (uint32_t q = 0; q < roles.size(); q++) {
                if (!touched[q]) {
                    layer.push_back(make_gate(GateKind::Idle, q, kNoQubit, GatePurpose::Idle, kNoCheck, 0));
                }
            }
        }
        for (auto &g : layer) {
            g.step = step;
            g.label.round = round_index;
            g.label.gate_index = static_cast<uint32_t>(round.gates.size());
            g.label.roles[0] = roles[g.q0];
            g.label.roles[1] = g.q1 == kNoQubit ? Role{} : roles[g.q1];
            round.gates.push_back(g);
        }
        for (const auto &g : layer) {
            if (g.kind == GateKind::SWAP) {
                std::swap(roles[g.q0], roles[g.q1]);
            }
        }
        step++;
    }
    round.num_steps = step;
    return round;
}

using RoundFn = std::function<std::vector<Layer>(uint32_t round, RoundWriter &writer)>;

CircuitProgram assemble(Variant variant, const ToricLattice &lattice, uint32_t rounds, const BuildOptions &options,
                        bool spares, const RoundFn &round_fn) {
    if (rounds < 1) {
        throw std::invalid_argument("a circuit program needs at least one round");
    }
    if (spares && !lattice.has_spares()) {
        throw std::invalid_argument("variant " + std::string(variant_name(variant)) +
                                    " needs a lattice built with spare ancillas");
    }
    CircuitProgram program;
    program.variant = variant;
    program.distance = lattice.distance();
    program.num_qubits = lattice.num_qubits();
    program.uses_spares = spares;
    program.schedule = options.schedule;

    RoleTracker tracker(lattice, spares);
    for (uint32_t r = 0; r < rounds; r++) {
        std::vector<Role> start = tracker.roles;
        RoundWriter writer(lattice, options.schedule, tracker);
        program.rounds.push_back(finalize_round(round_fn(r, writer), start, r, options.emit_idles));
    }
    program.final_roles = tracker.roles;
    program.final_data_qubits = tracker.data_qubit;
    return program;
}

std::vector<Layer> swap_lrc_round(RoundWriter &w, bool swap_this_round) {
    w.prep(false);
    w.x_basis(GatePurpose::BasisIn);
    for (uint32_t k = 0; k < 4; k++) {
        w.cnots(k);
    }
    w.x_basis(GatePurpose::BasisOut);
    if (swap_this_round) {
        w.lrc_swap();
    }
    w.measure();
    return w.take();
}

bool is_reversed(const GateOp &g, uint32_t reversed_upto, uint32_t dd) {
    return g.kind == GateKind::CNOT && g.label.purpose == GatePurpose::CheckCnot && g.label.check >= dd &&
           g.label.cnot_ordinal <= reversed_upto;
}

/// Rewrites CNOT(a -> d) as H_a H_d CNOT(d -> a) H_a H_d for the selected X-check CNOTs.
std::vector<Layer> reverse_x_cnots(const std::vector<Layer> &layers, uint32_t reversed_upto, uint32_t dd) {
    std::vector<Layer> out;
    for (const auto &layer : layers) {
        Layer before;
        Layer middle;
        Layer after;
        for (const auto &g : layer) {
            if (!is_reversed(g, reversed_upto, dd)) {
                middle.push_back(g);
                continue;
            }
            for (uint32_t q : {g.q0, g.q1}) {
                before.push_back(make_gate(GateKind::H, q, kNoQubit, GatePurpose::Reversal, g.label.check, 0));
                after.push_back(make_gate(GateKind::H, q, kNoQubit, GatePurpose::Reversal, g.label.check, 0));
            }
            GateOp flipped = g;
            std::swap(flipped.q0, flipped.q1);
            middle.push_back(flipped);
        }
        for (Layer *l : {&before, &middle, &after}) {
            if (!l->empty()) {
                out.push_back(std::move(*l));
            }
        }
    }
    return out;
}

/// Cancels H.H pairs that are adjacent on a qubit and belong to the same check circuit.
std::vector<Layer> cancel_h_pairs(const std::vector<Layer> &layers, uint32_t num_qubits) {
    std::vector<std::vector<uint8_t>> removed(layers.size());
    for (size_t li = 0; li < layers.size(); li++) {
        removed[li].assign(layers[li].size(), 0);
    }
    std::vector<std::vector<std::pair<size_t, size_t>>> history(num_qubits);
    for (size_t li = 0; li < layers.size(); li++) {
        for (size_t gi = 0; gi < layers[li].size(); gi++) {
            const GateOp &g = layers[li][gi];
            for (uint32_t q : {g.q0, g.q1}) {
                if (q == kNoQubit) {
                    continue;
                }
                auto &h = history[q];
                if (g.kind == GateKind::H && !h.empty()) {
                    const GateOp &prev = layers[h.back().first][h.back().second];
                    if (prev.kind == GateKind::H && prev.label.check == g.label.check) {
                        removed[h.back().first][h.back().second] = 1;
                        removed[li][gi] = 1;
                        h.pop_back();
                        continue;
                    }
                }
                h.emplace_back(li, gi);
            }
        }
    }
    std::vector<Layer> out;
    for (size_t li = 0; li < layers.size(); li++) {
        Layer kept;
        for (size_t gi = 0; gi < layers[li].size(); gi++) {
            if (!removed[li][gi]) {
                kept.push_back(layers[li][gi]);
            }
        }
        if (!kept.empty()) {
            out.push_back(std::move(kept));
        }
    }
    return out;
}

uint32_t single_qubit_gates_of_check(const Round &round, uint32_t check) {
    uint32_t n = 0;
    for (const auto &g : round.gates) {
        if (g.kind == GateKind::H && g.label.check == check) {
            n++;
        }
    }
    return n;
}

}  // namespace

CircuitProgram build_standard(const ToricLattice &lattice, uint32_t rounds, const BuildOptions &options) {
    return assemble(Variant::Standard, lattice, rounds, options, false, [](uint32_t, RoundWriter &w) {
        return swap_lrc_round(w, false);
    });
}

CircuitProgram build_swap_lrc(const ToricLattice &lattice, uint32_t rounds, uint32_t period,
                              const BuildOptions &options) {
    if (period != 1 && period != 2) {
        throw std::invalid_argument("SWAP-LRC period must be 1 or 2");
    }
    Variant variant = period == 1 ? Variant::SwapLrc : Variant::SwapAlt;
    auto program = assemble(variant, lattice, rounds, options, false, [period](uint32_t r, RoundWriter &w) {
        return swap_lrc_round(w, (r + 1) % period == 0);
    });
    program.swap_period = period;
    return program;
}

CircuitProgram build_gate_biased(const ToricLattice &lattice, uint32_t rounds, bool optimized,
                                 const BuildOptions &options) {
    const uint32_t dd = lattice.num_checks_of_type();
    const uint32_t reversed_upto = optimized ? 2 : 4;
    const uint32_t num_qubits = lattice.num_qubits();
    Variant variant = optimized ? Variant::GateBiasedOpt : Variant::GateBiased;
    BuildOptions inner = options;
    inner.emit_idles = false;
    auto program = assemble(variant, lattice, rounds, inner, false, [&](uint32_t, RoundWriter &w) {
        auto layers = reverse_x_cnots(swap_lrc_round(w, true), reversed_upto, dd);
        return cancel_h_pairs(layers, num_qubits);
    });
    program.swap_period = 1;

    // Compare each X-check circuit against the two basis-change H gates of the plain circuit.
    const uint32_t expected = optimized ? kGateBiasedOptExtraGates : kGateBiasedExtraGates;
    for (const auto &round : program.rounds) {
        for (uint32_t s = dd; s < lattice.num_checks(); s++) {
            uint32_t extra = single_qubit_gates_of_check(round, s) - 2;
            if (extra != expected) {
                throw std::logic_error("construction-invariant violation: X-check " + std::to_string(s) +
                                       " carries " + std::to_string(extra) + " extra single-qubit gates, expected " +
                                       std::to_string(expected));
            }
        }
    }
    program.extra_single_qubit_gates_per_x_check = expected;

    if (options.emit_idles) {
        // Idles are added after cancellation so that they never separate an H pair.
        for (auto &round : program.rounds) {
            std::vector<Layer> layers;
            for (const auto &g : round.gates) {
                if (layers.size() <= g.step) {
                    layers.resize(g.step + 1);
                }
                layers[g.step].push_back(g);
            }
            uint32_t r = round.gates.empty() ? 0 : round.gates.front().label.round;
            round = finalize_round(std::move(layers), round.roles, r, true);
        }
    }
    return program;
}

CircuitProgram build_mixed_lrc(const ToricLattice &lattice, uint32_t rounds, const BuildOptions &options) {
    return assemble(Variant::MixedLrc, lattice, rounds, options, true, [](uint32_t, RoundWriter &w) {
        w.prep(true);
        w.x_basis(GatePurpose::BasisIn);
        w.cnots(0);
        w.cnots(1);
        w.mid_swap();
        w.cnots(2);
        w.cnots(3);
        w.x_basis(GatePurpose::BasisOut);
        w.lrc_swap();
        w.measure();
        return w.take();
    });
}

CircuitProgram build_variant(Variant variant, const ToricLattice &lattice, uint32_t rounds,
                             const BuildOptions &options) {
    switch (variant) {
        case Variant::Standard: return build_standard(lattice, rounds, options);
        case Variant::SwapLrc: return build_swap_lrc(lattice, rounds, 1, options);
        case Variant::SwapAlt: return build_swap_lrc(lattice, rounds, 2, options);
        case Variant::GateBiased: return build_gate_biased(lattice, rounds, false, options);
        case Variant::GateBiasedOpt: return build_gate_biased(lattice, rounds, true, options);
        case Variant::MixedLrc: return build_mixed_lrc(lattice, rounds, options);
    }
    throw std::invalid_argument("unknown variant");
}

void validate_program(const CircuitProgram &program) {
    auto fail = [](const std::string &msg) { throw std::logic_error("invalid circuit program: " + msg); };
    const uint32_t n = program.num_qubits;
    for (size_t r = 0; r < program.rounds.size(); r++) {
        const Round &round = program.rounds[r];
        std::vector<Role> roles = round.roles;
        // Which check's freshly prepared state each qubit currently carries.
        std::vector<uint32_t> fresh(n, kNoCheck);
        std::vector<uint32_t> last_step(n, UINT32_MAX);
        uint32_t prev_step = 0;
        for (const auto &g : round.gates) {
            if (g.step < prev_step) {
                fail("steps out of order in round " + std::to_string(r));
            }
            prev_step = g.step;
            for (uint32_t q : {g.q0, g.q1}) {
                if (q == kNoQubit) {
                    continue;
                }
                if (q >= n) {
                    fail("qubit index out of range");
                }
                if (last_step[q] == g.step) {
                    fail("qubit " + std::to_string(q) + " used twice in step " + std::to_string(g.step) +
                         " of round " + std::to_string(r));
                }
                last_step[q] = g.step;
            }
            if (g.is_two_qubit() && (g.q1 == kNoQubit || g.q0 == g.q1)) {
                fail("two-qubit gate needs two distinct qubits");
            }
            switch (g.kind) {
                case GateKind::PrepZ:
                case GateKind::PrepX: fresh[g.q0] = g.label.check; break;
                case GateKind::SWAP:
                    std::swap(fresh[g.q0], fresh[g.q1]);
                    std::swap(roles[g.q0], roles[g.q1]);
                    break;
                case GateKind::MeasZ:
                case GateKind::MeasX:
                    if (fresh[g.q0] != g.label.check) {
                        fail("measurement of check " + std::to_string(g.label.check) +
                             " without a preparation in round " + std::to_string(r));
                    }
                    if (!roles[g.q0].is_ancilla() || roles[g.q0].site != g.label.check) {
                        fail("measured qubit does not hold the ancilla of its check");
                    }
                    break;
                case GateKind::CNOT:
                    if (g.label.purpose == GatePurpose::CheckCnot) {
                        const Role &a = roles[g.q0];
                        const Role &b = roles[g.q1];
                        bool ok = (a.is_data() && b.is_ancilla() && b.site == g.label.check) ||
                                  (b.is_data() && a.is_ancilla() && a.site == g.label.check);
                        if (!ok) {
                            fail("check CNOT does not join a data qubit with its check ancilla");
                        }
                    }
                    break;
                default: break;
            }
        }
        const std::vector<Role> &next = r + 1 < program.rounds.size() ? program.rounds[r + 1].roles : program.final_roles;
        if (roles != next) {
            fail("role map of round " + std::to_string(r + 1) + " disagrees with the exchanges of round " +
                 std::to_string(r));
        }
    }
    for (uint32_t e = 0; e < program.final_data_qubits.size(); e++) {
        const Role &role = program.final_roles[program.final_data_qubits[e]];
        if (!role.is_data() || role.site != e) {
            fail("final data map is inconsistent");
        }
    }
}

std::string emit_program_text(const CircuitProgram &program) {
    std::ostringstream out;
    auto order = [](const std::array<Direction, 4> &o) {
        std::string s;
        for (Direction d : o) {
            s += direction_name(d);
        }
        return s;
    };
    out << "leaksim-circuit 1\n";
    out << "variant " << variant_name(program.variant) << "\n";
    out << "distance " << program.distance << "\n";
    out << "rounds " << program.rounds.size() << "\n";
    out << "qubits " << program.num_qubits << "\n";
    out << "schedule z=" << order(program.schedule.z_order) << " x=" << order(program.schedule.x_order) << "\n";
    for (size_t r = 0; r < program.rounds.size(); r++) {
        const Round &round = program.rounds[r];
        out << "round " << r << " steps " << round.num_steps << " gates " << round.gates.size() << "\n";
        out << "roles";
        for (const auto &role : round.roles) {
            out << ' ' << role_str(role);
        }
        out << "\n";
        for (const auto &g : round.gates) {
            out << "gate " << r << ' ' << g.label.gate_index << " step=" << g.step << ' ' << gate_kind_name(g.kind)
                << ' ' << g.q0;
            if (g.q1 != kNoQubit) {
                out << ',' << g.q1;
            }
            out << " purpose=" << purpose_name(g.label.purpose);
            out << " check=";
            if (g.label.check == kNoCheck) {
                out << '-';
            } else {
                out << g.label.check;
            }
            out << " cnot=" << static_cast<int>(g.label.cnot_ordinal);
            out << " roles=" << role_str(g.label.roles[0]);
            if (g.q1 != kNoQubit) {
                out << ',' << role_str(g.label.roles[1]);
            }
            out << "\n";
        }
    }
    out << "final_roles";
    for (const auto &role : program.final_roles) {
        out << ' ' << role_str(role);
    }
    out << "\nend\n";
    return out.str();
}

}  // namespace leaksim
