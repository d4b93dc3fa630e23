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

#ifndef LEAKSIM_BLOSSOM_H
#define LEAKSIM_BLOSSOM_H

#include <cstdint>
#include <vector>

namespace leaksim {

struct WeightedEdge {
    int u;
    int v;
    int64_t weight;
};

/// Maximum-weight matching on a general graph with integer weights (Edmonds'
/// blossom algorithm with primal-dual updates, O(n^3)).
///
/// Returns mate[v] for every vertex, or -1 when unmatched. With
/// `max_cardinality` the result maximizes weight among maximum-cardinality
/// matchings. The result depends only on the edge list, including its order.
std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge> &edges, bool max_cardinality);

/// Minimum-weight perfect matching on the complete graph over `n` vertices
/// (n even) with symmetric non-negative weights `w[i*n + j]`.
/// Returns mate[v]. Throws std::invalid_argument for odd n.
std::vector<int> min_weight_perfect_matching(int n, const std::vector<int64_t> &w);

}  // namespace leaksim

#endif
