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

#include "leaksim/noise_model.h"

#include <cmath>
#include <stdexcept>

namespace leaksim {

const char *side_policy_name(SidePolicy policy) {
    return policy == SidePolicy::TwoSided ? "two_sided" : "control_only";
}

SidePolicy parse_side_policy(std::string_view name) {
    if (name == "two_sided") {
        return SidePolicy::TwoSided;
    }
    if (name == "control_only") {
        return SidePolicy::ControlOnly;
    }
    throw std::invalid_argument("unknown side policy '" + std::string(name) + "'");
}

const char *leaked_meas_name(LeakedMeasPolicy policy) {
    return policy == LeakedMeasPolicy::RandomBit ? "random_bit" : "fixed_one";
}

LeakedMeasPolicy parse_leaked_meas(std::string_view name) {
    if (name == "random_bit") {
        return LeakedMeasPolicy::RandomBit;
    }
    if (name == "fixed_one") {
        return LeakedMeasPolicy::FixedOne;
    }
    throw std::invalid_argument("unknown leaked measurement policy '" + std::string(name) + "'");
}

SiteFilter SiteFilter::cnot_ordinal(uint8_t k) {
    if (k < 1 || k > 4) {
        throw std::invalid_argument("cnot ordinal must be in 1..4");
    }
    return {Kind::CnotOrdinal, k};
}

std::string SiteFilter::str() const {
    switch (kind) {
        case Kind::All: return "all";
        case Kind::DataOnly: return "data_only";
        case Kind::AncillaOnly: return "ancilla_only";
        case Kind::CnotOrdinal: return "cnot_ordinal(" + std::to_string(ordinal) + ")";
    }
    return "?";
}

SiteFilter SiteFilter::parse(std::string_view text) {
    if (text == "all") {
        return all();
    }
    if (text == "data_only") {
        return data_only();
    }
    if (text == "ancilla_only") {
        return ancilla_only();
    }
    constexpr std::string_view prefix = "cnot_ordinal(";
    if (text.size() == prefix.size() + 2 && text.substr(0, prefix.size()) == prefix && text.back() == ')') {
        char c = text[prefix.size()];
        if (c >= '1' && c <= '4') {
            return cnot_ordinal(static_cast<uint8_t>(c - '0'));
        }
    }
    throw std::invalid_argument("unknown site filter '" + std::string(text) + "'");
}

bool SiteFilter::admits(const GateOp &op, const Role &role) const {
    switch (kind) {
        case Kind::All: return true;
        case Kind::DataOnly: return role.is_data();
        case Kind::AncillaOnly: return role.is_ancilla() || role.kind == RoleKind::Spare;
        case Kind::CnotOrdinal:
            return op.kind == GateKind::CNOT && op.label.purpose == GatePurpose::CheckCnot &&
                   op.label.cnot_ordinal == ordinal;
    }
    return false;
}

void NoiseModel::validate() const {
    auto probability = [](double v, const char *field) {
        if (!(v >= 0 && v <= 1) || std::isnan(v)) {
            throw std::invalid_argument(std::string(field) + " must lie in [0, 1]");
        }
    };
    probability(p, "p");
    if (!(r >= 0) || std::isnan(r)) {
        throw std::invalid_argument("r must be non-negative");
    }
    probability(p_leak(), "r*p");
    probability(p_init_leak, "p_init_leak");
    probability(meas_flip_probability(), "meas_flip");
    probability(p_idle, "p_idle");
    if (!(single_qubit_ratio >= 0) || single_qubit_ratio * p > 1 || single_qubit_ratio * p_leak() > 1) {
        throw std::invalid_argument("single_qubit_ratio must keep single-qubit probabilities in [0, 1]");
    }
}

uint8_t leak_candidates(const GateOp &op, SidePolicy side, const SiteFilter &filter) {
    switch (op.kind) {
        case GateKind::H:
            if (side == SidePolicy::ControlOnly) {
                return 0;
            }
            return filter.admits(op, op.label.roles[0]) ? 1 : 0;
        case GateKind::CNOT:
        case GateKind::SWAP: {
            uint8_t mask = filter.admits(op, op.label.roles[0]) ? 1 : 0;
            if (side == SidePolicy::TwoSided && filter.admits(op, op.label.roles[1])) {
                mask |= 2;
            }
            return mask;
        }
        default: return 0;
    }
}

bool prep_may_leak(const GateOp &op, const SiteFilter &filter) {
    if (!op.is_prep()) {
        return false;
    }
    return filter.kind == SiteFilter::Kind::All || filter.kind == SiteFilter::Kind::AncillaOnly;
}

}  // namespace leaksim
