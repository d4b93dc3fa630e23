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

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace leaksim {

const char *direction_name(Direction dir) {
    switch (dir) {
        case Direction::North: return "N";
        case Direction::West: return "W";
        case Direction::East: return "E";
        case Direction::South: return "S";
    }
    return "?";
}

const char *check_type_name(CheckType type) { return type == CheckType::Z ? "Z" : "X"; }

ToricLattice::ToricLattice(uint32_t distance, bool with_spares) : d_(distance), with_spares_(with_spares) {
    if (distance < 3 || distance % 2 == 0) {
        throw std::invalid_argument("invalid-distance: toric code distance must be odd and >= 3, got " +
                                    std::to_string(distance));
    }
    const int64_t d = d_;
    neighbors_.resize(num_checks());
    for (int64_t r = 0; r < d; r++) {
        for (int64_t c = 0; c < d; c++) {
            // Vertex (r,c): N = v(r-1,c), W = h(r,c-1), E = h(r,c), S = v(r,c).
            neighbors_[z_check(r, c)] = {v_edge(r - 1, c), h_edge(r, c - 1), h_edge(r, c), v_edge(r, c)};
            // Plaquette below-right of vertex (r,c): N = h(r,c), W = v(r,c), E = v(r,c+1), S = h(r+1,c).
            neighbors_[x_check(r, c)] = {h_edge(r, c), v_edge(r, c), v_edge(r, c + 1), h_edge(r + 1, c)};
        }
    }

    data_checks_.assign(num_data(), {0, 0, 0, 0});
    std::vector<uint32_t> filled_z(num_data(), 0);
    std::vector<uint32_t> filled_x(num_data(), 0);
    for (uint32_t s = 0; s < num_checks(); s++) {
        for (uint32_t e : neighbors_[s]) {
            if (check_type(s) == CheckType::Z) {
                data_checks_[e][filled_z[e]++] = s;
            } else {
                data_checks_[e][2 + filled_x[e]++] = s;
            }
        }
    }

    for (int64_t k = 0; k < d; k++) {
        logicals_.x_logicals[0].push_back(h_edge(0, k));
        logicals_.x_logicals[1].push_back(v_edge(k, 0));
        logicals_.z_logicals[0].push_back(h_edge(k, 0));
        logicals_.z_logicals[1].push_back(v_edge(0, k));
    }
}

uint32_t ToricLattice::spare_qubit(uint32_t check) const {
    if (!with_spares_) {
        throw std::logic_error("lattice was built without spare ancillas");
    }
    return 2 * num_data() + check;
}

SiteCoord ToricLattice::data_coord(uint32_t data) const {
    uint32_t dd = d_ * d_;
    if (data < dd) {
        return {2 * (data / d_), 2 * (data % d_) + 1, "h"};
    }
    data -= dd;
    return {2 * (data / d_) + 1, 2 * (data % d_), "v"};
}

SiteCoord ToricLattice::check_coord(uint32_t check) const {
    if (check_type(check) == CheckType::Z) {
        return {2 * check_row(check), 2 * check_col(check), "vertex"};
    }
    return {2 * check_row(check) + 1, 2 * check_col(check) + 1, "plaquette"};
}

BitVector ToricLattice::syndrome_of(const PauliFrame &data_frame) const {
    if (data_frame.size() != num_data() && data_frame.size() != num_qubits()) {
        throw std::invalid_argument("frame size " + std::to_string(data_frame.size()) + " does not match lattice");
    }
    BitVector out(num_checks());
    for (uint32_t s = 0; s < num_checks(); s++) {
        const BitVector &bits = check_type(s) == CheckType::Z ? data_frame.xs() : data_frame.zs();
        bool parity = false;
        for (uint32_t e : neighbors_[s]) {
            parity ^= bits[e];
        }
        out.set(s, parity);
    }
    return out;
}

void ToricLattice::check_same_type(uint32_t a, uint32_t b) const {
    if (a >= num_checks() || b >= num_checks()) {
        throw std::out_of_range("check index out of range");
    }
    if (check_type(a) != check_type(b)) {
        throw std::invalid_argument("type mismatch: torus distance needs two checks of the same type");
    }
}

uint32_t ToricLattice::torus_distance(uint32_t check_a, uint32_t check_b) const {
    check_same_type(check_a, check_b);
    auto axis = [&](uint32_t u, uint32_t v) {
        uint32_t delta = u > v ? u - v : v - u;
        return std::min(delta, d_ - delta);
    };
    return axis(check_row(check_a), check_row(check_b)) + axis(check_col(check_a), check_col(check_b));
}

std::vector<uint32_t> ToricLattice::shortest_path(uint32_t check_a, uint32_t check_b) const {
    check_same_type(check_a, check_b);
    const bool vertex = check_type(check_a) == CheckType::Z;
    // Signed shortest displacement along one axis; d is odd so there are no ties.
    auto step = [&](uint32_t from, uint32_t to) {
        int64_t delta = static_cast<int64_t>(to) - static_cast<int64_t>(from);
        int64_t d = d_;
        if (delta > d / 2) {
            delta -= d;
        } else if (delta < -(d / 2)) {
            delta += d;
        }
        return delta;
    };
    std::vector<uint32_t> path;
    int64_t r = check_row(check_a);
    int64_t c = check_col(check_a);
    int64_t dr = step(check_row(check_a), check_row(check_b));
    int64_t dc = step(check_col(check_a), check_col(check_b));
    for (; dr > 0; dr--, r++) {
        path.push_back(vertex ? v_edge(r, c) : h_edge(r + 1, c));
    }
    for (; dr < 0; dr++, r--) {
        path.push_back(vertex ? v_edge(r - 1, c) : h_edge(r, c));
    }
    for (; dc > 0; dc--, c++) {
        path.push_back(vertex ? h_edge(r, c) : v_edge(r, c + 1));
    }
    for (; dc < 0; dc++, c--) {
        path.push_back(vertex ? h_edge(r, c - 1) : v_edge(r, c));
    }
    return path;
}

std::string ToricLattice::describe() const {
    using nlohmann::ordered_json;
    ordered_json doc;
    doc["format"] = "leaksim-lattice";
    doc["version"] = 1;
    doc["distance"] = d_;
    doc["with_spares"] = with_spares_;
    doc["num_qubits"] = num_qubits();

    ordered_json sites = ordered_json::array();
    for (uint32_t e = 0; e < num_data(); e++) {
        SiteCoord c = data_coord(e);
        sites.push_back({{"qubit", e}, {"role", "data"}, {"row", c.row}, {"col", c.col}, {"subtype", c.subtype}});
    }
    for (uint32_t s = 0; s < num_checks(); s++) {
        SiteCoord c = check_coord(s);
        sites.push_back({{"qubit", ancilla_qubit(s)},
                         {"role", check_type(s) == CheckType::Z ? "ancilla_z" : "ancilla_x"},
                         {"check", s},
                         {"row", c.row},
                         {"col", c.col},
                         {"subtype", c.subtype}});
    }
    if (with_spares_) {
        for (uint32_t s = 0; s < num_checks(); s++) {
            SiteCoord c = check_coord(s);
            sites.push_back({{"qubit", spare_qubit(s)}, {"role", "spare"}, {"check", s}, {"row", c.row},
                             {"col", c.col}, {"subtype", c.subtype}});
        }
    }
    doc["sites"] = std::move(sites);

    ordered_json checks = ordered_json::array();
    for (uint32_t s = 0; s < num_checks(); s++) {
        ordered_json support = ordered_json::object();
        for (uint32_t k = 0; k < 4; k++) {
            support[direction_name(static_cast<Direction>(k))] = neighbors_[s][k];
        }
        checks.push_back({{"check", s}, {"type", check_type_name(check_type(s))}, {"support", std::move(support)}});
    }
    doc["checks"] = std::move(checks);
    doc["logicals"] = {{"x", {logicals_.x_logicals[0], logicals_.x_logicals[1]}},
                       {"z", {logicals_.z_logicals[0], logicals_.z_logicals[1]}}};
    return doc.dump(2) + "\n";
}

ToricLattice build_lattice(uint32_t distance, bool with_spares) { return ToricLattice(distance, with_spares); }

}  // namespace leaksim
