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

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

namespace leaksim {
namespace {

size_t count_purpose(const Round &round, GatePurpose purpose) {
    return std::count_if(round.gates.begin(), round.gates.end(),
                         [&](const GateOp &g) { return g.label.purpose == purpose; });
}

TEST(Circuit, StandardGateCounts) {
    ToricLattice lat(3, false);
    auto prog = build_standard(lat, 1);
    EXPECT_EQ(prog.count(GateKind::PrepZ), 18u);
    EXPECT_EQ(prog.count(GateKind::CNOT), 72u);
    // Nine X-ancillas, each with one H after preparation and one before measurement.
    EXPECT_EQ(prog.count(GateKind::H), 9u * 2);
    EXPECT_EQ(prog.count(GateKind::MeasZ), 18u);
    EXPECT_EQ(prog.count(GateKind::SWAP), 0u);
    EXPECT_EQ(prog.rounds[0].num_steps, 8u);
}

TEST(Circuit, StandardHasNoSwapsAtAnyDistance) {
    for (uint32_t d : {3u, 5u, 7u}) {
        ToricLattice lat(d, false);
        auto prog = build_standard(lat, 3);
        EXPECT_EQ(prog.count(GateKind::SWAP), 0u);
        for (const auto &round : prog.rounds) {
            EXPECT_EQ(round.roles, prog.rounds[0].roles);
        }
    }
}

TEST(Circuit, RejectsZeroRounds) {
    ToricLattice lat(3, false);
    EXPECT_THROW(build_standard(lat, 0), std::invalid_argument);
    EXPECT_THROW(build_swap_lrc(lat, 2, 3), std::invalid_argument);
    EXPECT_THROW(build_mixed_lrc(lat, 1), std::invalid_argument);
}

TEST(Circuit, SwapLrcEveryRound) {
    ToricLattice lat(3, false);
    auto prog = build_swap_lrc(lat, 3, 1);
    for (size_t r = 0; r < 3; r++) {
        EXPECT_EQ(prog.count_in_round(r, GateKind::SWAP), 18u);
    }
    // After one round each check's ancilla has exchanged places with its North data neighbour.
    const auto &after = prog.rounds[1].roles;
    for (uint32_t s = 0; s < lat.num_checks(); s++) {
        uint32_t north = lat.neighbor(s, Direction::North);
        EXPECT_TRUE(after[lat.ancilla_qubit(s)].is_data());
        EXPECT_EQ(after[lat.ancilla_qubit(s)].site, north);
        EXPECT_TRUE(after[north].is_ancilla());
        EXPECT_EQ(after[north].site, s);
    }
}

TEST(Circuit, SwapLrcNorthPartnersArePerfectPairing) {
    for (uint32_t d : {3u, 5u, 7u}) {
        ToricLattice lat(d, false);
        std::set<uint32_t> partners;
        for (uint32_t s = 0; s < lat.num_checks(); s++) {
            partners.insert(lat.neighbor(s, Direction::North));
        }
        EXPECT_EQ(partners.size(), lat.num_data());
    }
}

TEST(Circuit, SwapLrcPeriodTwo) {
    ToricLattice lat(3, false);
    auto prog = build_swap_lrc(lat, 4, 2);
    EXPECT_EQ(prog.variant, Variant::SwapAlt);
    EXPECT_EQ(prog.count_in_round(0, GateKind::SWAP), 0u);
    EXPECT_EQ(prog.count_in_round(1, GateKind::SWAP), 18u);
    EXPECT_EQ(prog.count_in_round(2, GateKind::SWAP), 0u);
    EXPECT_EQ(prog.count_in_round(3, GateKind::SWAP), 18u);
    EXPECT_EQ(prog.rounds[1].roles, prog.rounds[0].roles);
    EXPECT_NE(prog.rounds[2].roles, prog.rounds[0].roles);
}

TEST(Circuit, MixedLrcSwaps) {
    ToricLattice lat(3, true);
    auto prog = build_mixed_lrc(lat, 2);
    for (size_t r = 0; r < 2; r++) {
        EXPECT_EQ(prog.count_in_round(r, GateKind::SWAP), 36u);
        EXPECT_EQ(count_purpose(prog.rounds[r], GatePurpose::MidSwap), 18u);
        EXPECT_EQ(count_purpose(prog.rounds[r], GatePurpose::LrcSwap), 18u);
        EXPECT_EQ(count_purpose(prog.rounds[r], GatePurpose::SparePrep), 18u);
    }
}

TEST(Circuit, MixedLrcSwappedOutAncillaLeavesCnots) {
    ToricLattice lat(3, true);
    auto prog = build_mixed_lrc(lat, 1);
    const Round &round = prog.rounds[0];
    for (uint32_t s = 0; s < lat.num_checks(); s++) {
        uint32_t prepped = kNoQubit;
        for (const auto &g : round.gates) {
            if (g.label.purpose == GatePurpose::AncillaPrep && g.label.check == s) {
                prepped = g.q0;
            }
        }
        ASSERT_NE(prepped, kNoQubit);
        for (const auto &g : round.gates) {
            if (g.kind == GateKind::CNOT && (g.q0 == prepped || g.q1 == prepped)) {
                EXPECT_LE(g.label.cnot_ordinal, 2) << "check " << s;
            }
            if (g.is_measure()) {
                EXPECT_NE(g.q0, prepped);
            }
        }
    }
}

TEST(Circuit, GateBiasedExtraGateCounts) {
    ToricLattice lat(3, false);
    auto plain = build_swap_lrc(lat, 1, 1);
    auto full = build_gate_biased(lat, 1, false);
    auto opt = build_gate_biased(lat, 1, true);
    EXPECT_EQ(full.extra_single_qubit_gates_per_x_check, kGateBiasedExtraGates);
    EXPECT_EQ(opt.extra_single_qubit_gates_per_x_check, kGateBiasedOptExtraGates);
    const uint32_t x_checks = lat.num_checks_of_type();
    EXPECT_EQ(full.count(GateKind::H), plain.count(GateKind::H) + x_checks * kGateBiasedExtraGates);
    EXPECT_EQ(opt.count(GateKind::H), plain.count(GateKind::H) + x_checks * kGateBiasedOptExtraGates);
    EXPECT_EQ(full.count(GateKind::CNOT), plain.count(GateKind::CNOT));
}

TEST(Circuit, GateBiasedReversesSelectedXCnots) {
    ToricLattice lat(3, false);
    for (bool optimized : {false, true}) {
        auto prog = build_gate_biased(lat, 1, optimized);
        for (const auto &g : prog.rounds[0].gates) {
            if (g.kind != GateKind::CNOT || lat.check_type(g.label.check) != CheckType::X) {
                continue;
            }
            bool reversed = g.label.roles[0].is_data();
            bool expect_reversed = optimized ? g.label.cnot_ordinal <= 2 : true;
            EXPECT_EQ(reversed, expect_reversed) << "ordinal " << int(g.label.cnot_ordinal);
        }
    }
}

TEST(Circuit, ScheduleOrderIsRespected) {
    for (Variant v : kAllVariants) {
        ToricLattice lat(3, v == Variant::MixedLrc);
        auto prog = build_variant(v, lat, 2);
        for (const auto &round : prog.rounds) {
            std::map<uint32_t, std::vector<std::pair<uint32_t, uint32_t>>> seen;
            for (const auto &g : round.gates) {
                if (g.kind == GateKind::CNOT) {
                    const Role &data = g.label.roles[0].is_data() ? g.label.roles[0] : g.label.roles[1];
                    seen[g.label.check].emplace_back(g.label.cnot_ordinal, data.site);
                }
            }
            ASSERT_EQ(seen.size(), lat.num_checks());
            for (const auto &[s, list] : seen) {
                ASSERT_EQ(list.size(), 4u);
                const auto &order = prog.schedule.order(lat.check_type(s));
                for (uint32_t k = 0; k < 4; k++) {
                    EXPECT_EQ(list[k].first, k + 1);
                    EXPECT_EQ(list[k].second, lat.neighbor(s, order[k]));
                }
            }
        }
    }
}

class AllVariants : public testing::TestWithParam<std::tuple<Variant, uint32_t>> {};

TEST_P(AllVariants, StructurallyValid) {
    auto [variant, d] = GetParam();
    ToricLattice lat(d, variant == Variant::MixedLrc);
    for (bool idles : {false, true}) {
        BuildOptions opts;
        opts.emit_idles = idles;
        auto prog = build_variant(variant, lat, 3, opts);
        EXPECT_NO_THROW(validate_program(prog));
        for (const auto &round : prog.rounds) {
            std::map<uint32_t, std::set<uint32_t>> used;
            for (const auto &g : round.gates) {
                EXPECT_TRUE(used[g.step].insert(g.q0).second);
                if (g.q1 != kNoQubit) {
                    EXPECT_TRUE(used[g.step].insert(g.q1).second);
                }
            }
            if (idles) {
                for (const auto &[step, qs] : used) {
                    EXPECT_EQ(qs.size(), lat.num_qubits());
                }
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Variants, AllVariants,
                         testing::Combine(testing::ValuesIn(kAllVariants), testing::Values(3u, 5u, 7u)));

TEST(Circuit, ValidationCatchesCollisions) {
    ToricLattice lat(3, false);
    auto prog = build_standard(lat, 1);
    auto broken = prog;
    broken.rounds[0].gates[1].step = broken.rounds[0].gates[0].step;
    broken.rounds[0].gates[1].q0 = broken.rounds[0].gates[0].q0;
    EXPECT_THROW(validate_program(broken), std::logic_error);

    broken = prog;
    broken.rounds[0].gates.erase(broken.rounds[0].gates.begin());
    EXPECT_THROW(validate_program(broken), std::logic_error);
}

TEST(Circuit, VariantNamesRoundTrip) {
    for (Variant v : kAllVariants) {
        EXPECT_EQ(parse_variant(variant_name(v)), v);
    }
    EXPECT_THROW(parse_variant("surface"), std::invalid_argument);
}

TEST(Circuit, EmitTextHeader) {
    ToricLattice lat(3, false);
    auto text = emit_program_text(build_swap_lrc(lat, 1, 1));
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "leaksim-circuit 1");
    std::getline(in, line);
    EXPECT_EQ(line, "variant swap_lrc");
    size_t gates = 0;
    while (std::getline(in, line)) {
        gates += line.rfind("gate ", 0) == 0;
    }
    EXPECT_EQ(gates, 18u + 9 + 72 + 9 + 18 + 18);
}

TEST(Circuit, EmitMatchesGoldenFiles) {
    for (Variant v : kAllVariants) {
        ToricLattice lat(3, v == Variant::MixedLrc);
        std::string path = std::string(LEAKSIM_GOLDEN_DIR) + "/emit_" + variant_name(v) + "_d3.txt";
        std::ifstream in(path);
        ASSERT_TRUE(in.good()) << "missing golden file " << path;
        std::stringstream buf;
        buf << in.rdbuf();
        EXPECT_EQ(emit_program_text(build_variant(v, lat, 2)), buf.str()) << path;
    }
}

}  // namespace
}  // namespace leaksim
