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

#include "leaksim/lattice.h"

#include <gtest/gtest.h>

#include <bit>
#include <cstdlib>

#include "json.hpp"

namespace leaksim {
namespace {

TEST(Lattice, QubitCounts) {
    ToricLattice lat(3, false);
    EXPECT_EQ(lat.num_data(), 18u);
    EXPECT_EQ(lat.num_checks(), 18u);
    EXPECT_EQ(lat.num_qubits(), 36u);
    EXPECT_EQ(ToricLattice(3, true).num_qubits(), 54u);
    EXPECT_EQ(ToricLattice(5, false).num_qubits(), 100u);
}

TEST(Lattice, InvalidDistance) {
    EXPECT_THROW(build_lattice(2, false), std::invalid_argument);
    EXPECT_THROW(build_lattice(1, false), std::invalid_argument);
    EXPECT_THROW(build_lattice(4, true), std::invalid_argument);
    try {
        build_lattice(2, false);
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("invalid-distance"), std::string::npos);
    }
}

TEST(Lattice, SpareIndexRequiresSpares) {
    ToricLattice lat(3, false);
    EXPECT_THROW(lat.spare_qubit(0), std::logic_error);
    EXPECT_EQ(ToricLattice(3, true).spare_qubit(4), 40u);
}

class LatticeInvariants : public testing::TestWithParam<uint32_t> {};

TEST_P(LatticeInvariants, NeighbourStructure) {
    ToricLattice lat(GetParam(), false);
    std::vector<int> z_count(lat.num_data(), 0);
    std::vector<int> x_count(lat.num_data(), 0);
    for (uint32_t s = 0; s < lat.num_checks(); s++) {
        const auto &sup = lat.support(s);
        std::set<uint32_t> distinct(sup.begin(), sup.end());
        EXPECT_EQ(distinct.size(), 4u);
        for (uint32_t e : sup) {
            (lat.check_type(s) == CheckType::Z ? z_count : x_count)[e]++;
        }
    }
    for (uint32_t e = 0; e < lat.num_data(); e++) {
        EXPECT_EQ(z_count[e], 2);
        EXPECT_EQ(x_count[e], 2);
        const auto &cs = lat.checks_of_data(e);
        EXPECT_EQ(lat.check_type(cs[0]), CheckType::Z);
        EXPECT_EQ(lat.check_type(cs[1]), CheckType::Z);
        EXPECT_EQ(lat.check_type(cs[2]), CheckType::X);
        EXPECT_EQ(lat.check_type(cs[3]), CheckType::X);
    }
}

TEST_P(LatticeInvariants, ChecksCommute) {
    ToricLattice lat(GetParam(), false);
    for (uint32_t a = 0; a < lat.num_checks_of_type(); a++) {
        for (uint32_t b = lat.num_checks_of_type(); b < lat.num_checks(); b++) {
            int overlap = 0;
            for (uint32_t e : lat.support(a)) {
                for (uint32_t f : lat.support(b)) {
                    overlap += e == f;
                }
            }
            EXPECT_EQ(overlap % 2, 0);
        }
    }
}

TEST_P(LatticeInvariants, LogicalCommutationTable) {
    ToricLattice lat(GetParam(), false);
    const auto &L = lat.logicals();
    auto overlap = [](const std::vector<uint32_t> &a, const std::vector<uint32_t> &b) {
        int n = 0;
        for (uint32_t e : a) {
            n += std::count(b.begin(), b.end(), e);
        }
        return n;
    };
    for (int i = 0; i < 2; i++) {
        EXPECT_EQ(L.x_logicals[i].size(), lat.distance());
        EXPECT_EQ(L.z_logicals[i].size(), lat.distance());
        for (int j = 0; j < 2; j++) {
            EXPECT_EQ(overlap(L.x_logicals[i], L.z_logicals[j]) % 2, i == j ? 1 : 0);
        }
        // Logicals commute with every stabilizer: zero syndrome.
        PauliFrame fx(lat.num_data());
        for (uint32_t e : L.x_logicals[i]) {
            fx.apply(e, Pauli::X());
        }
        EXPECT_TRUE(lat.syndrome_of(fx).none());
        PauliFrame fz(lat.num_data());
        for (uint32_t e : L.z_logicals[i]) {
            fz.apply(e, Pauli::Z());
        }
        EXPECT_TRUE(lat.syndrome_of(fz).none());
    }
}

TEST_P(LatticeInvariants, SingleErrorsGiveTwoDefectsPerType) {
    ToricLattice lat(GetParam(), false);
    for (uint32_t e = 0; e < lat.num_data(); e++) {
        for (unsigned k = 1; k < 4; k++) {
            PauliFrame f(lat.num_data());
            f.set(e, Pauli::from_index(k));
            BitVector syn = lat.syndrome_of(f);
            size_t z = 0;
            size_t x = 0;
            for (uint32_t s = 0; s < lat.num_checks(); s++) {
                if (syn[s]) {
                    (lat.check_type(s) == CheckType::Z ? z : x)++;
                }
            }
            EXPECT_EQ(z, f.get(e).x ? 2u : 0u);
            EXPECT_EQ(x, f.get(e).z ? 2u : 0u);
        }
    }
}

TEST_P(LatticeInvariants, StabilizersHaveNoSyndrome) {
    ToricLattice lat(GetParam(), false);
    for (uint32_t s = 0; s < lat.num_checks(); s++) {
        PauliFrame f(lat.num_data());
        Pauli p = lat.check_type(s) == CheckType::Z ? Pauli::Z() : Pauli::X();
        for (uint32_t e : lat.support(s)) {
            f.apply(e, p);
        }
        EXPECT_TRUE(lat.syndrome_of(f).none());
    }
}

TEST_P(LatticeInvariants, TorusDistanceMatchesImageBruteForce) {
    ToricLattice lat(GetParam(), false);
    const int d = static_cast<int>(lat.distance());
    for (uint32_t a = 0; a < lat.num_checks(); a++) {
        for (uint32_t b = 0; b < lat.num_checks(); b++) {
            if (lat.check_type(a) != lat.check_type(b)) {
                EXPECT_THROW(lat.torus_distance(a, b), std::invalid_argument);
                continue;
            }
            int best = 1 << 30;
            for (int dr = -1; dr <= 1; dr++) {
                for (int dc = -1; dc <= 1; dc++) {
                    int rr = static_cast<int>(lat.check_row(b)) + dr * d - static_cast<int>(lat.check_row(a));
                    int cc = static_cast<int>(lat.check_col(b)) + dc * d - static_cast<int>(lat.check_col(a));
                    best = std::min(best, std::abs(rr) + std::abs(cc));
                }
            }
            EXPECT_EQ(lat.torus_distance(a, b), static_cast<uint32_t>(best));
        }
    }
}

TEST_P(LatticeInvariants, ShortestPathConnectsEndpoints) {
    ToricLattice lat(GetParam(), false);
    for (uint32_t a = 0; a < lat.num_checks(); a++) {
        for (uint32_t b = 0; b < lat.num_checks(); b++) {
            if (lat.check_type(a) != lat.check_type(b)) {
                continue;
            }
            auto path = lat.shortest_path(a, b);
            EXPECT_EQ(path.size(), lat.torus_distance(a, b));
            PauliFrame f(lat.num_data());
            Pauli p = lat.check_type(a) == CheckType::Z ? Pauli::X() : Pauli::Z();
            for (uint32_t e : path) {
                f.apply(e, p);
            }
            BitVector syn = lat.syndrome_of(f);
            for (uint32_t s = 0; s < lat.num_checks(); s++) {
                EXPECT_EQ(syn[s], a != b && (s == a || s == b)) << a << "->" << b;
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Distances, LatticeInvariants, testing::Values(3u, 5u, 7u));

TEST(Lattice, TorusDistanceExamples) {
    ToricLattice lat(5, false);
    EXPECT_EQ(lat.torus_distance(lat.z_check(1, 1), lat.z_check(1, 1)), 0u);
    EXPECT_EQ(lat.torus_distance(lat.z_check(1, 1), lat.z_check(1, 2)), 1u);
    EXPECT_EQ(lat.torus_distance(lat.z_check(0, 0), lat.z_check(4, 4)), 2u);
    EXPECT_EQ(lat.torus_distance(lat.x_check(0, 0), lat.x_check(4, 4)), 2u);
}

TEST(Lattice, ZeroFrameZeroSyndrome) {
    ToricLattice lat(3, false);
    EXPECT_TRUE(lat.syndrome_of(PauliFrame(lat.num_data())).none());
    EXPECT_TRUE(lat.syndrome_of(PauliFrame(lat.num_qubits())).none());
    EXPECT_THROW(lat.syndrome_of(PauliFrame(5)), std::invalid_argument);
}

TEST(Lattice, SingleXFlipsItsTwoVertices) {
    ToricLattice lat(3, false);
    PauliFrame f(lat.num_data());
    uint32_t e = lat.h_edge(1, 2);
    f.set(e, Pauli::X());
    BitVector syn = lat.syndrome_of(f);
    EXPECT_EQ(syn.popcount(), 2u);
    EXPECT_TRUE(syn[lat.z_check(1, 2)]);
    EXPECT_TRUE(syn[lat.z_check(1, 0)]);
}

// Exhaustive at d=3: the lightest undetectable error that flips a logical has weight d.
TEST(Lattice, MinimumLogicalWeightIsDistance) {
    ToricLattice lat(3, false);
    const uint32_t n = lat.num_data();
    const auto &L = lat.logicals();
    for (int type = 0; type < 2; type++) {
        int best = 100;
        for (uint32_t mask = 1; mask < (1u << n); mask++) {
            int w = std::popcount(mask);
            if (w >= best) {
                continue;
            }
            PauliFrame f(n);
            for (uint32_t e = 0; e < n; e++) {
                if (mask >> e & 1) {
                    f.set(e, type == 0 ? Pauli::X() : Pauli::Z());
                }
            }
            if (!lat.syndrome_of(f).none()) {
                continue;
            }
            const auto &probes = type == 0 ? L.z_logicals : L.x_logicals;
            bool flips = false;
            for (const auto &probe : probes) {
                int parity = 0;
                for (uint32_t e : probe) {
                    parity ^= (mask >> e) & 1;
                }
                flips |= parity != 0;
            }
            if (flips) {
                best = w;
            }
        }
        EXPECT_EQ(best, 3);
    }
}

TEST(Lattice, DescribeIsVersionedJson) {
    ToricLattice lat(3, true);
    auto doc = nlohmann::json::parse(lat.describe());
    EXPECT_EQ(doc["format"], "leaksim-lattice");
    EXPECT_EQ(doc["version"], 1);
    EXPECT_EQ(doc["sites"].size(), 54u);
    EXPECT_EQ(doc["checks"].size(), 18u);
    EXPECT_EQ(doc["logicals"]["x"][0].size(), 3u);
}

}  // namespace
}  // namespace leaksim
