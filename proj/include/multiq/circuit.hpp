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
/**
 * @file
 * Gate-list circuit IR produced by the ansatz and consumed by the
 * simulator. Amplitudes are little-endian: qubit 0 is the least
 * significant bit of a basis-state index.
 */
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <set>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace multiq {

using Qubit = std::uint32_t;

/// Index into a ParamStore's flat parameter vector.
struct SlotId {
    std::uint32_t value = 0;
    friend auto operator<=>(const SlotId &, const SlotId &) = default;
};

/// Radians per unit of a trainable slot value.
inline constexpr double kTurn = 2.0 * std::numbers::pi;

/// A fixed radian value or a reference to a trainable slot whose value is
/// measured in turns (1 turn = 2*pi rad).
using Angle = std::variant<double, SlotId>;

enum class GateKind : std::uint8_t { RY, RX, RZ, CRX, CNOT, H };

[[nodiscard]] std::string_view to_string(GateKind k);
[[nodiscard]] constexpr bool is_controlled(GateKind k) {
    return k == GateKind::CRX || k == GateKind::CNOT;
}
[[nodiscard]] constexpr bool is_parameterized(GateKind k) {
    return k == GateKind::RY || k == GateKind::RX || k == GateKind::RZ ||
           k == GateKind::CRX;
}

struct Gate {
    GateKind kind = GateKind::H;
    Qubit target = 0;
    std::optional<Qubit> control;
    Angle angle = 0.0;

    static Gate ry(Qubit q, Angle a) { return {GateKind::RY, q, {}, a}; }
    static Gate rx(Qubit q, Angle a) { return {GateKind::RX, q, {}, a}; }
    static Gate rz(Qubit q, Angle a) { return {GateKind::RZ, q, {}, a}; }
    static Gate crx(Qubit c, Qubit t, Angle a) {
        return {GateKind::CRX, t, c, a};
    }
    static Gate cnot(Qubit c, Qubit t) { return {GateKind::CNOT, t, c, 0.0}; }
    static Gate h(Qubit q) { return {GateKind::H, q, {}, 0.0}; }

    friend bool operator==(const Gate &, const Gate &) = default;
};

struct Circuit {
    std::size_t n_qubits = 0;
    std::vector<Gate> gates;
    /// Qubits projected onto |0>.
    std::vector<Qubit> postselect;
    Qubit measure = 0;

    /// Distinct trainable slots referenced by the gates.
    [[nodiscard]] std::set<SlotId> slots() const;

    friend bool operator==(const Circuit &, const Circuit &) = default;
};

[[nodiscard]] nlohmann::json to_json(const Circuit &c);

} // namespace multiq
