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

#include <stdexcept>

#include "leaksim/blossom.h"

namespace leaksim {

DetectionEventSet extract_events(const SyndromeRecord &record, const ToricLattice &lattice) {
    const uint32_t num_checks = lattice.num_checks();
    const uint32_t rounds = static_cast<uint32_t>(record.rounds.size());
    if (record.final_syndrome.size() != num_checks) {
        throw std::invalid_argument("syndrome record does not match the lattice");
    }
    DetectionEventSet events;
    events.num_layers = rounds + 1;
    for (uint32_t t = 0; t <= rounds; t++) {
        const BitVector &now = t < rounds ? record.rounds[t] : record.final_syndrome;
        const BitVector *before = t > 0 ? &record.rounds[t - 1] : nullptr;
        const auto &now_words = now.words();
        for (size_t w = 0; w < now_words.size(); w++) {
            uint64_t diff = now_words[w] ^ (before ? before->words()[w] : 0);
            while (diff) {
                uint32_t s = static_cast<uint32_t>(w * 64 + __builtin_ctzll(diff));
                diff &= diff - 1;
                events.by_type[static_cast<size_t>(lattice.check_type(s))].push_back({s, t});
            }
        }
    }
    for (size_t k = 0; k < 2; k++) {
        if (events.by_type[k].size() % 2 != 0) {
            throw std::logic_error(std::string("internal inconsistency: odd number of ") +
                                   check_type_name(static_cast<CheckType>(k)) + "-check detection events");
        }
    }
    return events;
}

int64_t MatchingDecoder::edge_weight(const Defect &a, const Defect &b) const {
    int64_t dt = a.layer > b.layer ? a.layer - b.layer : b.layer - a.layer;
    return lattice_.torus_distance(a.check, b.check) + dt;
}

std::vector<int> MatchingDecoder::match(const std::vector<Defect> &defects) const {
    const int n = static_cast<int>(defects.size());
    if (n % 2 != 0) {
        throw std::invalid_argument("odd number of defects");
    }
    std::vector<int64_t> w(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; i++) {
        for (int j = i + 1; j < n; j++) {
            int64_t x = edge_weight(defects[i], defects[j]);
            w[static_cast<size_t>(i) * n + j] = x;
            w[static_cast<size_t>(j) * n + i] = x;
        }
    }
    return min_weight_perfect_matching(n, w);
}

Correction MatchingDecoder::decode(const DetectionEventSet &events) const {
    Correction correction;
    correction.flips = PauliFrame(lattice_.num_data());
    for (size_t k = 0; k < 2; k++) {
        const auto &defects = events.by_type[k];
        if (defects.empty()) {
            continue;
        }
        BitVector &bits = k == static_cast<size_t>(CheckType::Z) ? correction.flips.xs() : correction.flips.zs();
        auto mate = match(defects);
        for (uint32_t i = 0; i < defects.size(); i++) {
            uint32_t j = static_cast<uint32_t>(mate[i]);
            if (j < i) {
                continue;
            }
            correction.pairs[k].emplace_back(i, j);
            correction.weight[k] += edge_weight(defects[i], defects[j]);
            for (uint32_t e : lattice_.shortest_path(defects[i].check, defects[j].check)) {
                bits.flip(e);
            }
        }
    }
    return correction;
}

std::array<bool, 4> logical_flips(const PauliFrame &residual, const ToricLattice &lattice) {
    const auto &logicals = lattice.logicals();
    auto parity = [](const BitVector &bits, const std::vector<uint32_t> &support) {
        bool out = false;
        for (uint32_t e : support) {
            out ^= bits[e];
        }
        return out;
    };
    return {parity(residual.zs(), logicals.x_logicals[0]), parity(residual.zs(), logicals.x_logicals[1]),
            parity(residual.xs(), logicals.z_logicals[0]), parity(residual.xs(), logicals.z_logicals[1])};
}

Judgement judge(const Correction &correction, const PauliFrame &final_data_frame, const ToricLattice &lattice) {
    PauliFrame residual = final_data_frame ^ correction.flips;
    if (!lattice.syndrome_of(residual).none()) {
        throw std::logic_error("internal inconsistency: corrected data frame still has a syndrome");
    }
    Judgement out;
    out.fails = logical_flips(residual, lattice);
    out.overall = out.fails[0] || out.fails[1] || out.fails[2] || out.fails[3];
    return out;
}

Judgement decode_record(const SyndromeRecord &record, const MatchingDecoder &decoder, const ToricLattice &lattice) {
    return judge(decoder.decode(extract_events(record, lattice)), record.final_data_frame, lattice);
}

}  // namespace leaksim
