// Copyright 2026 The MultiQ-NLP Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "multiq/circuit.hpp"

#include <nlohmann/json.hpp>

namespace multiq {

std::string_view to_string(GateKind k) {
    switch (k) {
    case GateKind::RY:
        return "RY";
    case GateKind::RX:
        return "RX";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CRX:
        return "CRX";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::H:
        return "H";
    }
    return "?";
}

std::set<SlotId> Circuit::slots() const {
    std::set<SlotId> out;
    for (const auto &g : gates) {
        if (const auto *slot = std::get_if<SlotId>(&g.angle)) {
            out.insert(*slot);
        }
    }
    return out;
}

nlohmann::json to_json(const Circuit &c) {
    using nlohmann::json;
    json gates = json::array();
    for (const auto &g : c.gates) {
        json j = {{"kind", to_string(g.kind)}, {"target", g.target}};
        j["control"] = g.control ? json(*g.control) : json(nullptr);
        if (is_parameterized(g.kind)) {
            if (const auto *slot = std::get_if<SlotId>(&g.angle)) {
                j["slot"] = slot->value;
            } else {
                j["angle"] = std::get<double>(g.angle);
            }
        }
        gates.push_back(std::move(j));
    }
    return {{"layout", "little-endian: qubit 0 is the least significant bit"},
            {"angle_units", "fixed angles in radians, slot values in turns"},
            {"n_qubits", c.n_qubits},
            {"gates", std::move(gates)},
            {"postselect", c.postselect},
            {"measure", c.measure},
            {"n_slots", c.slots().size()}};
}

} // namespace multiq
