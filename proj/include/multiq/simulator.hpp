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
 * Dense statevector simulation with post-selection.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "multiq/circuit.hpp"

namespace multiq {

using Complex = std::complex<double>;
using Matrix2 = std::array<std::array<Complex, 2>, 2>;

inline constexpr std::size_t kMaxQubits = 24;
/// Post-selection weights below this count as vanished.
inline constexpr double kVanishingWeight = 1e-9;

/// 2x2 matrix of a single-qubit gate, or of the target block of a
/// controlled gate (RX for CRX, X for CNOT).
[[nodiscard]] Matrix2 gate_matrix(GateKind kind, double angle);

/// Radian angle of `g` under `bindings`. Slot values are in turns and
/// are scaled by 2*pi; fixed angles are already radians. Throws
/// UnboundSlot.
[[nodiscard]] double resolve_angle(const Gate &g,
                                   std::span<const double> bindings);

class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits.
    explicit StateVector(std::size_t n_qubits);
    StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes);

    [[nodiscard]] std::size_t num_qubits() const { return n_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
    [[nodiscard]] std::span<Complex> amplitudes() { return amps_; }

    [[nodiscard]] double norm_squared() const;

    /// Applies `m` to `target`, restricted to basis states whose
    /// `control_mask` bits are all set.
    void apply_matrix(const Matrix2 &m, Qubit target,
                      std::size_t control_mask = 0);

    /// Zeroes every amplitude with `q` = 1; returns the surviving norm².
    double project_zero(Qubit q);

    /// Marginal probability of `q` = 1 (unnormalized state).
    [[nodiscard]] double probability_one(Qubit q) const;

  private:
    std::size_t n_;
    std::vector<Complex> amps_;
};

/// In-place gate application. Throws IndexError for out-of-range qubits.
void apply_gate(StateVector &state, const Gate &g,
                std::span<const double> bindings);

struct EvalResult {
    double p_match = 0.5;
    double postselect_weight = 0.0;
    bool vanished = false;
};

/// Runs `c` from |0...0>, post-selects, and returns P(measured = 1) on the
/// renormalized state. A weight below kVanishingWeight yields p = 0.5 with
/// `vanished` set.
///
/// Qubits are allocated on first touch and post-selected qubits are
/// projected and dropped right after their last gate, so peak memory
/// tracks the live width of the circuit rather than n_qubits. When
/// `final_state` is given it receives the surviving amplitudes (measured
/// qubit plus any unconsumed ones) after renormalization.
[[nodiscard]] EvalResult evaluate(const Circuit &c,
                                  std::span<const double> bindings,
                                  std::vector<Complex> *final_state = nullptr);

} // namespace multiq
