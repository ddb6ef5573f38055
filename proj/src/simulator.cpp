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
#include "multiq/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "multiq/errors.hpp"

namespace multiq {

namespace {

constexpr Complex kI{0.0, 1.0};

// Pair-wise update of every amplitude pair (i, i | tbit) with i's target
// bit clear and all control bits set.
void apply_kernel(std::span<Complex> amps, const Matrix2 &m, std::size_t tbit,
                  std::size_t cmask) {
    const std::size_t size = amps.size();
    for (std::size_t base = 0; base < size; base += 2 * tbit) {
        for (std::size_t i = base; i < base + tbit; ++i) {
            if ((i & cmask) != cmask) {
                continue;
            }
            const Complex a0 = amps[i];
            const Complex a1 = amps[i | tbit];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i | tbit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

void check_gate(const Gate &g, std::size_t n) {
    if (g.target >= n || (g.control && *g.control >= n)) {
        throw IndexError(fmt::format("{} gate addresses qubit beyond {}",
                                     to_string(g.kind), n));
    }
    if (is_controlled(g.kind) != g.control.has_value()) {
        throw IndexError(fmt::format("{} gate has a malformed control",
                                     to_string(g.kind)));
    }
    if (g.control && *g.control == g.target) {
        throw IndexError("control and target coincide");
    }
}

// Statevector over the currently live subset of a circuit's qubits.
class CompactState {
  public:
    explicit CompactState(std::size_t n_logical)
        : position_(n_logical, kDead), amps_{Complex{1.0, 0.0}} {}

    std::size_t bit(Qubit q) {
        if (position_[q] == kDead) {
            position_[q] = live_++;
            amps_.resize(amps_.size() * 2, Complex{0.0, 0.0});
        }
        return std::size_t{1} << position_[q];
    }

    [[nodiscard]] bool live(Qubit q) const { return position_[q] != kDead; }

    void apply(const Matrix2 &m, Qubit target, std::optional<Qubit> control) {
        const std::size_t cmask = control ? bit(*control) : 0;
        const std::size_t tbit = bit(target);
        apply_kernel(amps_, m, tbit, cmask);
    }

    // Projects q onto |0> and removes it from the register.
    void drop_zero(Qubit q) {
        const std::size_t b = position_[q];
        const std::size_t low = (std::size_t{1} << b) - 1;
        std::vector<Complex> next(amps_.size() / 2);
        for (std::size_t j = 0; j < next.size(); ++j) {
            next[j] = amps_[((j & ~low) << 1) | (j & low)];
        }
        amps_ = std::move(next);
        for (auto &p : position_) {
            if (p != kDead && p > b) {
                --p;
            }
        }
        position_[q] = kDead;
        --live_;
    }

    [[nodiscard]] double norm_squared() const {
        double s = 0.0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return s;
    }

    [[nodiscard]] double probability_one(Qubit q) const {
        if (position_[q] == kDead) {
            return 0.0;
        }
        const std::size_t mask = std::size_t{1} << position_[q];
        double s = 0.0;
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            if (i & mask) {
                s += std::norm(amps_[i]);
            }
        }
        return s;
    }

    [[nodiscard]] const std::vector<Complex> &amplitudes() const {
        return amps_;
    }

  private:
    static constexpr std::size_t kDead = static_cast<std::size_t>(-1);
    std::vector<std::size_t> position_;
    std::size_t live_ = 0;
    std::vector<Complex> amps_;
};

} // namespace

Matrix2 gate_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
    case GateKind::RY:
        return {{{c, -s}, {s, c}}};
    case GateKind::RX:
    case GateKind::CRX:
        return {{{c, -kI * s}, {-kI * s, c}}};
    case GateKind::RZ:
        return {{{std::exp(-kI * (angle / 2.0)), 0.0},
                 {0.0, std::exp(kI * (angle / 2.0))}}};
    case GateKind::CNOT:
        return {{{0.0, 1.0}, {1.0, 0.0}}};
    case GateKind::H: {
        const double r = std::numbers::sqrt2 / 2.0;
        return {{{r, r}, {r, -r}}};
    }
    }
    return {};
}

double resolve_angle(const Gate &g, std::span<const double> bindings) {
    if (const auto *slot = std::get_if<SlotId>(&g.angle)) {
        if (slot->value >= bindings.size()) {
            throw UnboundSlot(slot->value);
        }
        return kTurn * bindings[slot->value];
    }
    return std::get<double>(g.angle);
}

StateVector::StateVector(std::size_t n_qubits) : n_(n_qubits) {
    if (n_qubits > kMaxQubits) {
        throw QubitCapExceeded(
            fmt::format("{} qubits exceeds the cap of {}", n_qubits, kMaxQubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
    : n_(n_qubits), amps_(std::move(amplitudes)) {
    if (n_qubits > kMaxQubits) {
        throw QubitCapExceeded(
            fmt::format("{} qubits exceeds the cap of {}", n_qubits, kMaxQubits));
    }
    if (amps_.size() != (std::size_t{1} << n_qubits)) {
        throw IndexError("amplitude count does not match qubit count");
    }
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return s;
}

void StateVector::apply_matrix(const Matrix2 &m, Qubit target,
                               std::size_t control_mask) {
    if (target >= n_ || (control_mask >> n_) != 0) {
        throw IndexError(fmt::format("qubit index out of range for {} qubits", n_));
    }
    apply_kernel(amps_, m, std::size_t{1} << target, control_mask);
}

double StateVector::project_zero(Qubit q) {
    if (q >= n_) {
        throw IndexError(fmt::format("qubit {} out of range", q));
    }
    const std::size_t mask = std::size_t{1} << q;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) {
            amps_[i] = 0.0;
        }
    }
    return norm_squared();
}

double StateVector::probability_one(Qubit q) const {
    if (q >= n_) {
        throw IndexError(fmt::format("qubit {} out of range", q));
    }
    const std::size_t mask = std::size_t{1} << q;
    double s = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) {
            s += std::norm(amps_[i]);
        }
    }
    return s;
}

void apply_gate(StateVector &state, const Gate &g,
                std::span<const double> bindings) {
    check_gate(g, state.num_qubits());
    const double angle = resolve_angle(g, bindings);
    const std::size_t cmask = g.control ? (std::size_t{1} << *g.control) : 0;
    state.apply_matrix(gate_matrix(g.kind, angle), g.target, cmask);
}

EvalResult evaluate(const Circuit &c, std::span<const double> bindings,
                    std::vector<Complex> *final_state) {
    if (c.n_qubits > kMaxQubits) {
        throw QubitCapExceeded(fmt::format("{} qubits exceeds the cap of {}",
                                           c.n_qubits, kMaxQubits));
    }
    if (c.measure >= c.n_qubits && c.n_qubits > 0) {
        throw IndexError("measured qubit out of range");
    }
    std::vector<bool> postselected(c.n_qubits, false);
    for (const auto q : c.postselect) {
        if (q >= c.n_qubits) {
            throw IndexError(fmt::format("post-selected qubit {} out of range", q));
        }
        if (q == c.measure) {
            throw ShapeError("the measured qubit cannot be post-selected");
        }
        postselected[q] = true;
    }

    std::vector<std::size_t> last_use(c.n_qubits, 0);
    std::vector<Matrix2> matrices;
    matrices.reserve(c.gates.size());
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto &g = c.gates[i];
        check_gate(g, c.n_qubits);
        matrices.push_back(gate_matrix(g.kind, resolve_angle(g, bindings)));
        last_use[g.target] = i;
        if (g.control) {
            last_use[*g.control] = i;
        }
    }

    CompactState state(c.n_qubits);
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const auto &g = c.gates[i];
        state.apply(matrices[i], g.target, g.control);
        for (const auto q : {std::optional<Qubit>(g.target), g.control}) {
            if (q && postselected[*q] && last_use[*q] == i && state.live(*q)) {
                state.drop_zero(*q);
            }
        }
    }

    EvalResult result;
    result.postselect_weight = state.norm_squared();
    if (result.postselect_weight < kVanishingWeight) {
        result.vanished = true;
        result.p_match = 0.5;
    } else {
        const double p = c.n_qubits == 0
                             ? 0.0
                             : state.probability_one(c.measure) /
                                   result.postselect_weight;
        result.p_match = std::clamp(p, 0.0, 1.0);
    }
    if (final_state != nullptr) {
        *final_state = state.amplitudes();
        if (!result.vanished) {
            const double scale = 1.0 / std::sqrt(result.postselect_weight);
            for (auto &a : *final_state) {
                a *= scale;
            }
        }
    }
    return result;
}

} // namespace multiq
