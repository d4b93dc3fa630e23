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

#include "leaksim/decoder.h"

#include <gtest/gtest.h>

#include <random>

#include "leaksim/blossom.h"
#include "support/brute_force_matching.h"

namespace leaksim {
namespace {

int64_t matching_cost(int n, const std::vector<int64_t> &w, const std::vector<int> &mate) {
    int64_t total = 0;
    for (int i = 0; i < n; i++) {
        EXPECT_GE(mate[i], 0);
        EXPECT_EQ(mate[mate[i]], i);
        if (mate[i] > i) {
            total += w[static_cast<size_t>(i) * n + mate[i]];
        }
    }
    return total;
}

SyndromeRecord perfect_record(const ToricLattice &lat, const PauliFrame &data, uint32_t rounds) {
    SyndromeRecord record;
    BitVector s = lat.syndrome_of(data);
    record.rounds.assign(rounds, s);
    record.final_syndrome = s;
    record.final_data_frame = data;
    record.final_data_outcomes = data.xs();
    return record;
}

TEST(Blossom, MatchesBruteForceOnRandomCompleteGraphs) {
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 1000; trial++) {
        int n = 2 * static_cast<int>(1 + rng() % 5);
        std::vector<int64_t> w(static_cast<size_t>(n) * n, 0);
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                int64_t x = static_cast<int64_t>(rng() % 12);
                w[static_cast<size_t>(i) * n + j] = x;
                w[static_cast<size_t>(j) * n + i] = x;
            }
        }
        auto mate = min_weight_perfect_matching(n, w);
        EXPECT_EQ(matching_cost(n, w, mate), oracle::brute_force_min_matching(n, w)) << "trial " << trial;
    }
}

// Sparse graphs, checked against brute-force maximum-weight matching over all edge subsets.
TEST(Blossom, MaxWeightMatchesBruteForceOnSparseGraphs) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; trial++) {
        int n = 2 + static_cast<int>(rng() % 7);
        std::vector<WeightedEdge> edges;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                if (rng() % 2 == 0 && edges.size() < 14) {
                    edges.push_back({i, j, static_cast<int64_t>(1 + rng() % 20)});
                }
            }
        }
        int64_t best = 0;
        for (uint32_t subset = 0; subset < (1u << edges.size()); subset++) {
            uint32_t used = 0;
            int64_t total = 0;
            bool ok = true;
            for (size_t k = 0; k < edges.size() && ok; k++) {
                if (subset >> k & 1) {
                    uint32_t bits = (1u << edges[k].u) | (1u << edges[k].v);
                    ok = (used & bits) == 0;
                    used |= bits;
                    total += edges[k].weight;
                }
            }
            if (ok) {
                best = std::max(best, total);
            }
        }
        auto mate = max_weight_matching(n, edges, false);
        int64_t got = 0;
        for (const auto &e : edges) {
            if (mate[e.u] == e.v) {
                got += e.weight;
            }
        }
        EXPECT_EQ(got, best) << "trial " << trial;
    }
}

TEST(Blossom, RejectsBadInput) {
    EXPECT_THROW(min_weight_perfect_matching(3, std::vector<int64_t>(9, 1)), std::invalid_argument);
    std::vector<int64_t> w = {0, -1, -1, 0};
    EXPECT_THROW(min_weight_perfect_matching(2, w), std::invalid_argument);
    EXPECT_TRUE(min_weight_perfect_matching(0, {}).empty());
}

TEST(Decoder, MatchesBruteForceOnRandomSyndromes) {
    ToricLattice lat(5, false);
    MatchingDecoder decoder(lat);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 1000; trial++) {
        int n = 2 * static_cast<int>(1 + rng() % 5);
        std::vector<Defect> defects;
        for (int i = 0; i < n; i++) {
            defects.push_back({static_cast<uint32_t>(rng() % 25), static_cast<uint32_t>(rng() % 6)});
        }
        std::vector<int64_t> w(static_cast<size_t>(n) * n, 0);
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < n; j++) {
                if (i != j) {
                    w[static_cast<size_t>(i) * n + j] = decoder.edge_weight(defects[i], defects[j]);
                }
            }
        }
        auto mate = decoder.match(defects);
        EXPECT_EQ(matching_cost(n, w, mate), oracle::brute_force_min_matching(n, w));
    }
}

TEST(Decoder, EmptyRecordHasNoEvents) {
    ToricLattice lat(3, false);
    auto record = perfect_record(lat, PauliFrame(lat.num_data()), 3);
    auto events = extract_events(record, lat);
    EXPECT_EQ(events.size(), 0u);
    EXPECT_EQ(events.num_layers, 4u);
}

TEST(Decoder, AdjacentDefectsGiveOneFlip) {
    ToricLattice lat(3, false);
    MatchingDecoder decoder(lat);
    DetectionEventSet events;
    events.by_type[0] = {{lat.z_check(1, 1), 2}, {lat.z_check(1, 2), 2}};
    auto c = decoder.decode(events);
    EXPECT_EQ(c.weight[0], 1);
    EXPECT_EQ(c.flips.weight(), 1u);
    EXPECT_TRUE(c.flips.xs()[lat.h_edge(1, 1)]);
}

TEST(Decoder, TimelikePairGivesNoFlip) {
    ToricLattice lat(3, false);
    MatchingDecoder decoder(lat);
    DetectionEventSet events;
    events.by_type[1] = {{lat.x_check(0, 2), 1}, {lat.x_check(0, 2), 2}};
    auto c = decoder.decode(events);
    EXPECT_EQ(c.weight[1], 1);
    EXPECT_TRUE(c.flips.is_identity());
}

TEST(Decoder, FourDefectsInALine) {
    ToricLattice lat(5, false);
    MatchingDecoder decoder(lat);
    std::vector<Defect> defects = {{lat.z_check(2, 0), 0}, {lat.z_check(2, 1), 0},
                                   {lat.z_check(2, 3), 0}, {lat.z_check(2, 4), 0}};
    auto mate = decoder.match(defects);
    // Neighbouring pairs cost 1 + 1; every other pairing costs at least 3.
    int64_t total = 0;
    for (int i = 0; i < 4; i++) {
        if (mate[i] > i) {
            total += decoder.edge_weight(defects[i], defects[mate[i]]);
        }
    }
    EXPECT_EQ(total, 2);
    EXPECT_EQ(mate[0], 1);
    EXPECT_EQ(mate[2], 3);
}

TEST(Decoder, DataErrorBeforeFirstRound) {
    ToricLattice lat(3, false);
    PauliFrame data(lat.num_data());
    data.set(lat.v_edge(0, 1), Pauli::X());
    auto events = extract_events(perfect_record(lat, data, 3), lat);
    ASSERT_EQ(events.of(CheckType::Z).size(), 2u);
    for (const auto &d : events.of(CheckType::Z)) {
        EXPECT_EQ(d.layer, 0u);
    }
    EXPECT_TRUE(events.of(CheckType::X).empty());
}

TEST(Decoder, OddParityIsInternalError) {
    ToricLattice lat(3, false);
    auto record = perfect_record(lat, PauliFrame(lat.num_data()), 2);
    record.rounds[1].set(0, true);
    record.final_syndrome.set(0, true);
    record.rounds[0].set(3, true);
    EXPECT_THROW(extract_events(record, lat), std::logic_error);
}

TEST(Decoder, JudgeExamples) {
    ToricLattice lat(3, false);
    PauliFrame zero(lat.num_data());
    Correction none;
    none.flips = PauliFrame(lat.num_data());
    EXPECT_FALSE(judge(none, zero, lat).overall);

    PauliFrame stab(lat.num_data());
    for (uint32_t e : lat.support(lat.z_check(1, 1))) {
        stab.set(e, Pauli::Z());
    }
    for (uint32_t e : lat.support(lat.x_check(2, 0))) {
        stab.apply(e, Pauli::X());
    }
    EXPECT_FALSE(judge(none, stab, lat).overall);

    const auto &logicals = lat.logicals();
    for (int k = 0; k < 2; k++) {
        PauliFrame xl(lat.num_data());
        for (uint32_t e : logicals.x_logicals[k]) {
            xl.set(e, Pauli::X());
        }
        auto j = judge(none, xl, lat);
        EXPECT_TRUE(j.overall);
        int set = j.fails[0] + j.fails[1] + j.fails[2] + j.fails[3];
        EXPECT_EQ(set, 1);
        EXPECT_TRUE(j.fails[2 + k]);
    }

    PauliFrame bad(lat.num_data());
    bad.set(0, Pauli::X());
    EXPECT_THROW(judge(none, bad, lat), std::logic_error);
}

TEST(Decoder, CorrectsEveryWeightOneErrorAtDistanceThree) {
    ToricLattice lat(3, false);
    MatchingDecoder decoder(lat);
    for (uint32_t e = 0; e < lat.num_data(); e++) {
        for (Pauli p : {Pauli::X(), Pauli::Y(), Pauli::Z()}) {
            PauliFrame data(lat.num_data());
            data.set(e, p);
            EXPECT_FALSE(decode_record(perfect_record(lat, data, 3), decoder, lat).overall)
                << "edge " << e << " " << p.name();
        }
    }
}

TEST(Decoder, CorrectsRandomWeightTwoErrorsAtDistanceFive) {
    ToricLattice lat(5, false);
    MatchingDecoder decoder(lat);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10000; trial++) {
        PauliFrame data(lat.num_data());
        uint32_t a = rng() % lat.num_data();
        uint32_t b = rng() % lat.num_data();
        while (b == a) {
            b = rng() % lat.num_data();
        }
        data.set(a, Pauli::from_index(1 + rng() % 3));
        data.set(b, Pauli::from_index(1 + rng() % 3));
        ASSERT_FALSE(decode_record(perfect_record(lat, data, 5), decoder, lat).overall) << data.str();
    }
}

// A measurement error alone is absorbed without touching the data.
TEST(Decoder, MeasurementErrorIsHarmless) {
    ToricLattice lat(3, false);
    MatchingDecoder decoder(lat);
    for (uint32_t s = 0; s < lat.num_checks(); s++) {
        for (uint32_t t = 0; t < 3; t++) {
            auto record = perfect_record(lat, PauliFrame(lat.num_data()), 3);
            record.rounds[t].flip(s);
            auto events = extract_events(record, lat);
            auto c = decoder.decode(events);
            EXPECT_TRUE(c.flips.is_identity());
            EXPECT_FALSE(judge(c, record.final_data_frame, lat).overall);
        }
    }
}

TEST(Decoder, IsDeterministic) {
    ToricLattice lat(5, false);
    MatchingDecoder decoder(lat);
    std::vector<Defect> defects = {{0, 0}, {2, 0}, {10, 1}, {12, 1}, {4, 2}, {20, 2}};
    auto first = decoder.match(defects);
    for (int k = 0; k < 5; k++) {
        EXPECT_EQ(decoder.match(defects), first);
    }
}

}  // namespace
}  // namespace leaksim
