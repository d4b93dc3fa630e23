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

#ifndef LEAKSIM_RANDOM_STREAM_H
#define LEAKSIM_RANDOM_STREAM_H

#include <cstdint>

namespace leaksim {

/// Counter-based random stream.
///
/// Draw k of shot s is a pure function of (master_seed, s, k), so a shot can
/// be replayed in isolation and shots can run in any order on any thread.
class RandomStream {
   public:
    RandomStream(uint64_t master_seed, uint64_t shot_index)
        : master_seed_(master_seed), shot_index_(shot_index), key_(derive_key(master_seed, shot_index)) {}

    uint64_t master_seed() const { return master_seed_; }
    uint64_t shot_index() const { return shot_index_; }
    uint64_t draw_counter() const { return counter_; }

    uint64_t next_u64() { return mix(key_ + kGolden * ++counter_); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0) {
            return false;
        }
        return next_double() < p;
    }

    /// Uniform in [0, n). Lemire's multiply-shift; bias is below 2^-60 for the tiny n used here.
    uint32_t below(uint32_t n) { return static_cast<uint32_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64); }

    bool bit() { return next_u64() >> 63; }

   private:
    static constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static uint64_t derive_key(uint64_t seed, uint64_t shot) {
        return mix(mix(seed ^ 0x6C65616B73696D00ull) + kGolden * (shot + 1));
    }

    uint64_t master_seed_;
    uint64_t shot_index_;
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace leaksim

#endif
