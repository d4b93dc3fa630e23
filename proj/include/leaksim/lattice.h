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

#ifndef LEAKSIM_LATTICE_H
#define LEAKSIM_LATTICE_H

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "leaksim/pauli.h"

namespace leaksim {

/// Z-type checks sit on vertices and detect X errors; X-type checks sit on
/// plaquettes and detect Z errors.
enum class CheckType : uint8_t { Z = 0, X = 1 };

enum class Direction : uint8_t { North = 0, West = 1, East = 2, South = 3 };

const char *direction_name(Direction dir);
const char *check_type_name(CheckType type);

/// Doubled torus coordinates: vertices at (even, even), horizontal edges at
/// (even, odd), vertical edges at (odd, even), plaquettes at (odd, odd).
struct SiteCoord {
    uint32_t row;
    uint32_t col;
    const char *subtype;
};

struct LogicalOperators {
    /// X-logical i and Z-logical i anticommute; all other pairs commute.
    std::array<std::vector<uint32_t>, 2> x_logicals;
    std::array<std::vector<uint32_t>, 2> z_logicals;
};

/// Distance-d toric code.
///
/// Flat physical index layout: data edges [0, 2d^2), check ancillas
/// [2d^2, 4d^2) in check order, and optional spares [4d^2, 6d^2), spare k
/// belonging to check k. Data edge h(r,c) = r*d + c joins vertex (r,c) to
/// (r,c+1); v(r,c) = d^2 + r*d + c joins (r,c) to (r+1,c). Check k < d^2 is
/// the Z-check on vertex (k/d, k%d); check d^2 + k is the X-check on the
/// plaquette whose top-left vertex is (k/d, k%d).
class ToricLattice {
   public:
    ToricLattice(uint32_t distance, bool with_spares);

    uint32_t distance() const { return d_; }
    bool has_spares() const { return with_spares_; }

    uint32_t num_data() const { return 2 * d_ * d_; }
    uint32_t num_checks() const { return 2 * d_ * d_; }
    uint32_t num_checks_of_type() const { return d_ * d_; }
    uint32_t num_qubits() const { return with_spares_ ? 6 * d_ * d_ : 4 * d_ * d_; }

    uint32_t h_edge(int64_t row, int64_t col) const { return wrap(row) * d_ + wrap(col); }
    uint32_t v_edge(int64_t row, int64_t col) const { return d_ * d_ + wrap(row) * d_ + wrap(col); }
    uint32_t z_check(int64_t row, int64_t col) const { return wrap(row) * d_ + wrap(col); }
    uint32_t x_check(int64_t row, int64_t col) const { return d_ * d_ + wrap(row) * d_ + wrap(col); }

    CheckType check_type(uint32_t check) const { return check < d_ * d_ ? CheckType::Z : CheckType::X; }
    /// Index of the check among checks of its own type.
    uint32_t check_local(uint32_t check) const { return check % (d_ * d_); }
    uint32_t check_row(uint32_t check) const { return check_local(check) / d_; }
    uint32_t check_col(uint32_t check) const { return check_local(check) % d_; }

    uint32_t ancilla_qubit(uint32_t check) const { return num_data() + check; }
    uint32_t spare_qubit(uint32_t check) const;

    uint32_t neighbor(uint32_t check, Direction dir) const { return neighbors_[check][static_cast<size_t>(dir)]; }
    const std::array<uint32_t, 4> &support(uint32_t check) const { return neighbors_[check]; }
    /// Two Z-checks then two X-checks touching data edge `data`.
    const std::array<uint32_t, 4> &checks_of_data(uint32_t data) const { return data_checks_[data]; }

    SiteCoord data_coord(uint32_t data) const;
    SiteCoord check_coord(uint32_t check) const;

    const LogicalOperators &logicals() const { return logicals_; }

    /// Z-check bits are the X-parity of their support, X-check bits the Z-parity.
    /// `data_frame` is indexed by data edge and must have num_data() or num_qubits() entries.
    BitVector syndrome_of(const PauliFrame &data_frame) const;

    /// Minimum over periodic images of the Manhattan distance between two checks of one type.
    uint32_t torus_distance(uint32_t check_a, uint32_t check_b) const;

    /// Data edges along one shortest path between two same-type checks: rows first, then columns.
    std::vector<uint32_t> shortest_path(uint32_t check_a, uint32_t check_b) const;

    /// Versioned JSON description (sites, supports, logicals).
    std::string describe() const;

   private:
    uint32_t wrap(int64_t k) const {
        int64_t m = k % static_cast<int64_t>(d_);
        return static_cast<uint32_t>(m < 0 ? m + d_ : m);
    }
    void check_same_type(uint32_t a, uint32_t b) const;

    uint32_t d_;
    bool with_spares_;
    std::vector<std::array<uint32_t, 4>> neighbors_;
    std::vector<std::array<uint32_t, 4>> data_checks_;
    LogicalOperators logicals_;
};

/// Throws std::invalid_argument for even or too-small distances.
ToricLattice build_lattice(uint32_t distance, bool with_spares);

}  // namespace leaksim

#endif
