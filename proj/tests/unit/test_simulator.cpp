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
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <catch_amalgamated.hpp>

#include "multiq/errors.hpp"
#include "multiq/simulator.hpp"
#include "oracles/kron_oracle.hpp"

using namespace multiq;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

/// Random circuit over `n` qubits; half the parameterized gates use slots.
Circuit random_circuit(std::mt19937_64 &gen, std::size_t n,
                       std::size_t n_gates, std::size_t n_slots) {
    std::uniform_real_distribution<double> angle(-2 * kPi, 2 * kPi);
    Circuit c;
    c.n_qubits = n;
    const GateKind kinds[] = {GateKind::RY, GateKind::RX, GateKind::RZ,
                              GateKind::CRX, GateKind::CNOT, GateKind::H};
    for (std::size_t i = 0; i < n_gates; ++i) {
        auto kind = kinds[gen() % 6];
        if (n == 1 && is_controlled(kind)) {
            kind = GateKind::RY;
        }
        const Qubit t = static_cast<Qubit>(gen() % n);
        Gate g{kind, t, {}, 0.0};
        if (is_controlled(kind)) {
            Qubit ctl = static_cast<Qubit>(gen() % (n - 1));
            g.control = ctl >= t ? ctl + 1 : ctl;
        }
        if (is_parameterized(kind)) {
            if (n_slots > 0 && gen() % 2 == 0) {
                g.angle = SlotId{static_cast<std::uint32_t>(gen() % n_slots)};
            } else {
                g.angle = angle(gen);
            }
        }
        c.gates.push_back(g);
    }
    return c;
}

std::vector<double> random_bindings(std::mt19937_64 &gen, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> b(n);
    for (auto &x : b) {
        x = u(gen);
    }
    return b;
}

StateVector dense_run(const Circuit &c, std::span<const double> bindings) {
    StateVector sv(c.n_qubits);
    for (const auto &g : c.gates) {
        apply_gate(sv, g, bindings);
    }
    return sv;
}

} // namespace

TEST_CASE("Gate matrices are unitary", "[simulator]") {
    for (const auto kind : {GateKind::RY, GateKind::RX, GateKind::RZ,
                            GateKind::CRX, GateKind::CNOT, GateKind::H}) {
        for (const double t : {0.0, 0.3, -1.7, 2 * kPi, 5.0}) {
            const auto m = gate_matrix(kind, t);
            for (int r = 0; r < 2; ++r) {
                for (int c = 0; c < 2; ++c) {
                    Complex dot = 0.0;
                    for (int k = 0; k < 2; ++k) {
                        dot += std::conj(m[k][r]) * m[k][c];
                    }
                    REQUIRE(std::abs(dot - Complex(r == c ? 1.0 : 0.0)) <
                            1e-12);
                }
            }
        }
    }
}

TEST_CASE("Rotation conventions", "[simulator]") {
    // RY(pi)|0> = |1>; RX(pi)|0> = -i|1>.
    StateVector sv(1);
    sv.apply_matrix(gate_matrix(GateKind::RY, kPi), 0);
    REQUIRE(std::abs(sv.amplitudes()[1] - Complex(1.0)) < 1e-12);
    StateVector sx(1);
    sx.apply_matrix(gate_matrix(GateKind::RX, kPi), 0);
    REQUIRE(std::abs(sx.amplitudes()[1] - Complex(0.0, -1.0)) < 1e-12);
}

TEST_CASE("Little-endian layout", "[simulator]") {
    Circuit c;
    c.n_qubits = 3;
    c.gates.push_back(Gate::h(1));
    c.gates.push_back(Gate::cnot(1, 2));
    const auto sv = dense_run(c, {});
    const double h = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(sv.amplitudes()[0] - Complex(h)) < 1e-12);
    REQUIRE(std::abs(sv.amplitudes()[0b110] - Complex(h)) < 1e-12);
}

TEST_CASE("Slot values are turns", "[simulator]") {
    const Gate g = Gate::ry(0, SlotId{1});
    const std::vector<double> b{0.0, 0.25};
    REQUIRE(resolve_angle(g, b) == Approx(kPi / 2));
    REQUIRE(resolve_angle(Gate::ry(0, 0.7), b) == 0.7);
    REQUIRE_THROWS_AS(resolve_angle(Gate::ry(0, SlotId{2}), b), UnboundSlot);
}

TEST_CASE("Kronecker oracle equivalence on random circuits", "[simulator]") {
    std::mt19937_64 gen(20260418);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + gen() % 5;
        const std::size_t gates = gen() % 31;
        const auto c = random_circuit(gen, n, gates, 4);
        const auto b = random_bindings(gen, 4);
        const auto expected = oracle::run(c, b);
        const auto got = dense_run(c, b);
        for (std::size_t i = 0; i < expected.size(); ++i) {
            REQUIRE(std::abs(got.amplitudes()[i] - expected[i]) < 1e-10);
        }
    }
}

TEST_CASE("Streaming evaluation matches the oracle with post-selection",
          "[simulator]") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + gen() % 5;
        auto c = random_circuit(gen, n, 1 + gen() % 40, 6);
        std::vector<Qubit> qubits(n);
        std::iota(qubits.begin(), qubits.end(), Qubit{0});
        std::shuffle(qubits.begin(), qubits.end(), gen);
        c.measure = qubits.front();
        const std::size_t n_post = gen() % n;
        c.postselect.assign(qubits.begin() + 1,
                            qubits.begin() + 1 + static_cast<long>(n_post));
        const auto b = random_bindings(gen, 6);
        const auto expected = oracle::measure(c, oracle::run(c, b));
        const auto got = evaluate(c, b);
        REQUIRE(got.postselect_weight == Approx(expected.weight).margin(1e-10));
        if (!got.vanished) {
            REQUIRE(got.p_match == Approx(expected.p_match).margin(1e-9));
        }
    }
}

TEST_CASE("Norm is conserved without post-selection", "[simulator]") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = random_circuit(gen, 1 + gen() % 8, 60, 3);
        const auto b = random_bindings(gen, 3);
        REQUIRE(dense_run(c, b).norm_squared() == Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("Post-selection weight is monotone", "[simulator]") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 6;
        auto c = random_circuit(gen, n, 40, 2);
        const auto b = random_bindings(gen, 2);
        c.measure = 0;
        double last = 1.0 + 1e-12;
        for (Qubit q = 1; q < n; ++q) {
            c.postselect.push_back(q);
            const double w = evaluate(c, b).postselect_weight;
            REQUIRE(w <= last + 1e-12);
            last = w;
        }
    }
}

TEST_CASE("Cup effect on a product state gives weight one half",
          "[simulator]") {
    // CNOT + H then post-selecting both qubits on |00> projects onto the
    // Bell state (|00> + |11>)/sqrt(2). On |00> the overlap is 1/sqrt(2),
    // so the weight is 1/2.
    Circuit c;
    c.n_qubits = 3;
    c.gates = {Gate::cnot(0, 1), Gate::h(0)};
    c.postselect = {0, 1};
    c.measure = 2;
    const auto r = evaluate(c, std::vector<double>{});
    REQUIRE(r.postselect_weight == Approx(0.5).margin(1e-12));
    REQUIRE(r.p_match == Approx(0.0).margin(1e-12));

    // Preparing a state and its complex conjugate on the two cup legs:
    // <Bell| (|psi> (x) |psi*>) = 1/sqrt(2) for any normalized psi.
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto b = random_bindings(gen, 2);
        Circuit d;
        d.n_qubits = 3;
        d.gates = {Gate::ry(0, SlotId{0}), Gate::rz(0, SlotId{1}),
                   Gate::ry(1, SlotId{0}),
                   Gate::rz(1, -2 * kPi * b[1]), Gate::cnot(0, 1), Gate::h(0)};
        d.postselect = {0, 1};
        d.measure = 2;
        REQUIRE(evaluate(d, b).postselect_weight ==
                Approx(0.5).margin(1e-12));
    }
}

TEST_CASE("Vanishing post-selection reports one half", "[simulator]") {
    Circuit c;
    c.n_qubits = 2;
    c.gates = {Gate::ry(0, kPi)};
    c.postselect = {0};
    c.measure = 1;
    const auto r = evaluate(c, std::vector<double>{});
    REQUIRE(r.vanished);
    REQUIRE(r.p_match == 0.5);
    REQUIRE(r.postselect_weight < kVanishingWeight);
}

TEST_CASE("Final state is renormalized and exposed", "[simulator]") {
    Circuit c;
    c.n_qubits = 2;
    c.gates = {Gate::h(0), Gate::cnot(0, 1), Gate::ry(1, 0.4)};
    c.postselect = {0};
    c.measure = 1;
    std::vector<Complex> amps;
    const auto r = evaluate(c, std::vector<double>{}, &amps);
    double norm = 0.0;
    for (const auto &z : amps) {
        norm += std::norm(z);
    }
    REQUIRE(norm == Approx(1.0).margin(1e-12));
    REQUIRE(r.p_match == Approx(std::pow(std::sin(0.2), 2)).margin(1e-12));
}

TEST_CASE("Parameter-shift agrees with finite differences", "[simulator]") {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + gen() % 4;
        auto c = random_circuit(gen, n, 20, 0);
        // One RY slot at a random position.
        const auto pos = static_cast<long>(gen() % (c.gates.size() + 1));
        c.gates.insert(c.gates.begin() + pos,
                       Gate::ry(static_cast<Qubit>(gen() % n), SlotId{0}));
        c.measure = static_cast<Qubit>(gen() % n);
        const double theta = random_bindings(gen, 1)[0];
        const auto p = [&](double t) {
            return evaluate(c, std::vector<double>{t}).p_match;
        };
        // Derivatives with respect to the radian angle.
        const double h = 1e-5;
        const double fd = (p(theta + h / (2 * kPi)) - p(theta - h / (2 * kPi))) /
                          (2 * h);
        const double shift = (p(theta + 0.25) - p(theta - 0.25)) / 2.0;
        REQUIRE(fd == Approx(shift).margin(1e-6));
    }
}

TEST_CASE("Simulator errors", "[simulator]") {
    StateVector sv(2);
    REQUIRE_THROWS_AS(apply_gate(sv, Gate::h(2), {}), IndexError);
    REQUIRE_THROWS_AS(apply_gate(sv, Gate::cnot(1, 1), {}), IndexError);
    REQUIRE_THROWS_AS(StateVector(kMaxQubits + 1), QubitCapExceeded);

    Circuit big;
    big.n_qubits = kMaxQubits + 1;
    REQUIRE_THROWS_AS(evaluate(big, std::vector<double>{}), QubitCapExceeded);

    Circuit c;
    c.n_qubits = 2;
    c.gates = {Gate::ry(0, SlotId{3})};
    REQUIRE_THROWS_AS(evaluate(c, std::vector<double>{0.1}), UnboundSlot);

    Circuit m;
    m.n_qubits = 2;
    m.postselect = {0};
    m.measure = 0;
    REQUIRE_THROWS_AS(evaluate(m, std::vector<double>{}), ShapeError);
}
