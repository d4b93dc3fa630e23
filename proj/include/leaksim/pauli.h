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

#ifndef LEAKSIM_PAULI_H
#define LEAKSIM_PAULI_H

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace leaksim {

/// Single-qubit Pauli operator with the phase discarded.
struct Pauli {
    bool x = false;
    bool z = false;

    static constexpr Pauli I() { return {false, false}; }
    static constexpr Pauli X() { return {true, false}; }
    static constexpr Pauli Z() { return {false, true}; }
    static constexpr Pauli Y() { return {true, true}; }

    /// Index in {0,1,2,3} = {I,X,Y,Z}.
    static constexpr Pauli from_index(unsigned k) {
        switch (k & 3u) {
            case 1: return X();
            case 2: return Y();
            case 3: return Z();
            default: return I();
        }
    }
    constexpr unsigned index() const { return x ? (z ? 2u : 1u) : (z ? 3u : 0u); }

    constexpr bool is_identity() const { return !x && !z; }
    constexpr bool commutes_with(Pauli other) const { return (x && other.z) == (z && other.x); }

    constexpr Pauli operator*(Pauli other) const { return {x != other.x, z != other.z}; }
    constexpr bool operator==(const Pauli &other) const = default;

    char name() const { return "IXYZ"[index()]; }
};

/// Phase-free product.
constexpr Pauli pauli_mul(Pauli a, Pauli b) { return a * b; }

/// Growable bit vector packed into 64-bit words.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t num_bits) : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

    size_t size() const { return num_bits_; }
    size_t num_words() const { return words_.size(); }

    bool operator[](size_t k) const { return (words_[k >> 6] >> (k & 63)) & 1u; }
    void set(size_t k, bool value) {
        uint64_t mask = uint64_t{1} << (k & 63);
        if (value) {
            words_[k >> 6] |= mask;
        } else {
            words_[k >> 6] &= ~mask;
        }
    }
    void flip(size_t k) { words_[k >> 6] ^= uint64_t{1} << (k & 63); }

    void clear() {
        for (auto &w : words_) {
            w = 0;
        }
    }
    bool none() const {
        for (auto w : words_) {
            if (w) {
                return false;
            }
        }
        return true;
    }
    size_t popcount() const;

    BitVector &operator^=(const BitVector &other);
    BitVector operator^(const BitVector &other) const {
        BitVector out = *this;
        out ^= other;
        return out;
    }
    bool operator==(const BitVector &other) const = default;

    const std::vector<uint64_t> &words() const { return words_; }
    std::vector<uint64_t> &words() { return words_; }

    std::string str() const;

   private:
    size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

/// Pauli error record over every physical qubit.
///
/// Only the error equivalence class is tracked: signs and phases are dropped,
/// and composing two frames is the XOR of their bit vectors.
class PauliFrame {
   public:
    PauliFrame() = default;
    explicit PauliFrame(size_t num_qubits) : xs_(num_qubits), zs_(num_qubits) {}

    size_t size() const { return xs_.size(); }

    Pauli get(size_t q) const { return {xs_[q], zs_[q]}; }
    void set(size_t q, Pauli p) {
        xs_.set(q, p.x);
        zs_.set(q, p.z);
    }
    /// Multiplies the error at `q` by `p`.
    void apply(size_t q, Pauli p) {
        if (p.x) {
            xs_.flip(q);
        }
        if (p.z) {
            zs_.flip(q);
        }
    }

    const BitVector &xs() const { return xs_; }
    const BitVector &zs() const { return zs_; }
    BitVector &xs() { return xs_; }
    BitVector &zs() { return zs_; }

    void clear() {
        xs_.clear();
        zs_.clear();
    }
    bool is_identity() const { return xs_.none() && zs_.none(); }
    size_t weight() const;

    PauliFrame &operator^=(const PauliFrame &other) {
        check_same_size(other);
        xs_ ^= other.xs_;
        zs_ ^= other.zs_;
        return *this;
    }
    PauliFrame operator^(const PauliFrame &other) const {
        PauliFrame out = *this;
        out ^= other;
        return out;
    }
    bool operator==(const PauliFrame &other) const = default;

    /// e.g. "_X__Z_Y".
    std::string str() const;

   private:
    void check_same_size(const PauliFrame &other) const {
        if (other.size() != size()) {
            throw std::invalid_argument("PauliFrame size mismatch");
        }
    }

    BitVector xs_;
    BitVector zs_;
};

/// Per-qubit leaked flags. A leaked qubit's frame bits carry no information.
using LeakageMask = BitVector;

// Clifford conjugation rules. The unchecked variants are used on the
// simulator hot path where the circuit has already been validated.

inline void propagate_cnot_unchecked(PauliFrame &frame, size_t control, size_t target) {
    if (frame.xs()[control]) {
        frame.xs().flip(target);
    }
    if (frame.zs()[target]) {
        frame.zs().flip(control);
    }
}

inline void propagate_h_unchecked(PauliFrame &frame, size_t q) {
    bool x = frame.xs()[q];
    bool z = frame.zs()[q];
    frame.xs().set(q, z);
    frame.zs().set(q, x);
}

inline void propagate_swap_unchecked(PauliFrame &frame, size_t a, size_t b) {
    Pauli pa = frame.get(a);
    frame.set(a, frame.get(b));
    frame.set(b, pa);
}

/// X on the control copies to the target; Z on the target copies to the control.
void propagate_cnot(PauliFrame &frame, size_t control, size_t target);
/// Exchanges the X and Z components at `q`.
void propagate_h(PauliFrame &frame, size_t q);
void propagate_swap(PauliFrame &frame, size_t a, size_t b);

}  // namespace leaksim

#endif
