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

#include "leaksim/pauli.h"

#include <bit>

namespace leaksim {

size_t BitVector::popcount() const {
    size_t n = 0;
    for (auto w : words_) {
        n += std::popcount(w);
    }
    return n;
}

BitVector &BitVector::operator^=(const BitVector &other) {
    if (other.num_bits_ != num_bits_) {
        throw std::invalid_argument("BitVector size mismatch");
    }
    for (size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

std::string BitVector::str() const {
    std::string out;
    out.reserve(num_bits_);
    for (size_t k = 0; k < num_bits_; k++) {
        out.push_back((*this)[k] ? '1' : '0');
    }
    return out;
}

size_t PauliFrame::weight() const {
    size_t n = 0;
    for (size_t k = 0; k < xs_.num_words(); k++) {
        n += std::popcount(xs_.words()[k] | zs_.words()[k]);
    }
    return n;
}

std::string PauliFrame::str() const {
    std::string out;
    out.reserve(size());
    for (size_t q = 0; q < size(); q++) {
        Pauli p = get(q);
        out.push_back(p.is_identity() ? '_' : p.name());
    }
    return out;
}

namespace {

void check_index(const PauliFrame &frame, size_t q) {
    if (q >= frame.size()) {
        throw std::out_of_range("qubit index " + std::to_string(q) + " out of range for frame of size " +
                                std::to_string(frame.size()));
    }
}

}  // namespace

void propagate_cnot(PauliFrame &frame, size_t control, size_t target) {
    check_index(frame, control);
    check_index(frame, target);
    if (control == target) {
        throw std::invalid_argument("CNOT control and target must differ");
    }
    propagate_cnot_unchecked(frame, control, target);
}

void propagate_h(PauliFrame &frame, size_t q) {
    check_index(frame, q);
    propagate_h_unchecked(frame, q);
}

void propagate_swap(PauliFrame &frame, size_t a, size_t b) {
    check_index(frame, a);
    check_index(frame, b);
    if (a == b) {
        throw std::invalid_argument("SWAP qubits must differ");
    }
    propagate_swap_unchecked(frame, a, b);
}

}  // namespace leaksim
