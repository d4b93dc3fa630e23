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

#ifndef LEAKSIM_DECODER_H
#define LEAKSIM_DECODER_H

#include <array>
#include <cstdint>
#include <vector>

#include "leaksim/lattice.h"
#include "leaksim/pauli.h"
#include "leaksim/simulator.h"

namespace leaksim {

/// A detection event: check `check` changed value between layers `layer-1` and `layer`.
struct Defect {
    uint32_t check;
    uint32_t layer;

    bool operator==(const Defect &) const = default;
};

/// Defects split by check type. Layer 0 compares the first round against the
/// noiseless value 0; the last layer compares the final perfect round against
/// the last measured round.
struct DetectionEventSet {
    std::array<std::vector<Defect>, 2> by_type;
    uint32_t num_layers = 0;

    const std::vector<Defect> &of(CheckType type) const { return by_type[static_cast<size_t>(type)]; }
    size_t size() const { return by_type[0].size() + by_type[1].size(); }
};

/// Throws std::logic_error if a check type ends up with an odd number of defects.
DetectionEventSet extract_events(const SyndromeRecord &record, const ToricLattice &lattice);

struct Correction {
    /// X flips from the Z-check graph and Z flips from the X-check graph, by data edge.
    PauliFrame flips;
    /// Total matching weight per check type.
    std::array<int64_t, 2> weight{0, 0};
    /// Matched defect index pairs per check type.
    std::array<std::vector<std::pair<uint32_t, uint32_t>>, 2> pairs;
};

/// Failure flags in the order X-logical 1, X-logical 2, Z-logical 1, Z-logical 2.
struct Judgement {
    std::array<bool, 4> fails{false, false, false, false};
    bool overall = false;
};

/// Exact minimum-weight perfect matching decoder on the spacetime torus.
///
/// Edge weight between defects (s, t) and (s', t') is the torus Manhattan
/// distance between s and s' plus |t - t'|. Each matched pair is corrected along
/// one fixed shortest spacelike path; timelike components need no correction.
class MatchingDecoder {
   public:
    explicit MatchingDecoder(const ToricLattice &lattice) : lattice_(lattice) {}

    Correction decode(const DetectionEventSet &events) const;

    /// Matching for one sector: returns mate indices into `defects`.
    std::vector<int> match(const std::vector<Defect> &defects) const;
    int64_t edge_weight(const Defect &a, const Defect &b) const;

   private:
    const ToricLattice &lattice_;
};

/// Residual = final data frame XOR correction. A fail bit is set when the
/// residual anticommutes with the corresponding logical. Throws std::logic_error
/// if the residual still has a syndrome.
Judgement judge(const Correction &correction, const PauliFrame &final_data_frame, const ToricLattice &lattice);

/// Parity flags of `residual` against the four logicals, without the syndrome check.
std::array<bool, 4> logical_flips(const PauliFrame &residual, const ToricLattice &lattice);

/// Extract, decode and judge one record.
Judgement decode_record(const SyndromeRecord &record, const MatchingDecoder &decoder, const ToricLattice &lattice);

}  // namespace leaksim

#endif
