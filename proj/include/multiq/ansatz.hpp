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
 * Diagram-to-circuit compilation with the Sim14 ansatz.
 *
 * Box translations:
 *  - WORD: one Sim14 block over the qubits of its codomain, trainable.
 *  - IMAGE_STATE: one Sim14 block over the image qubits, angles fixed by
 *    the image's feature vector.
 *  - CUP: Bell effect, CNOT(left -> right), H(left), both post-selected.
 *  - SPIDER: CNOT from the first wire onto each other wire, which is then
 *    post-selected; the first wire survives.
 *  - MERGE: trainable Sim14 block over both wires, left wire
 *    post-selected; the right wire survives.
 *  - COMPARISON: trainable Sim14 block over the sentence qubit and the
 *    image register, image qubits post-selected.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "multiq/circuit.hpp"
#include "multiq/diagram.hpp"
#include "multiq/features.hpp"
#include "multiq/grammar.hpp"
#include "multiq/param_store.hpp"

namespace multiq {

struct QubitMap {
    std::uint32_t n = 1;
    std::uint32_t s = 1;
    std::uint32_t p = 1;
    std::uint32_t img = 5;
    std::uint32_t layers = 1;

    [[nodiscard]] std::uint32_t count(AtomicType t) const;
    [[nodiscard]] std::uint32_t qubits(const PregroupType &t) const;
    /// Length of the image feature vector the map expects.
    [[nodiscard]] std::size_t image_feature_dim() const {
        return std::size_t{4} * img * layers;
    }
    /// Throws ConfigError when a count or the layer number is zero.
    void validate() const;
};

[[nodiscard]] constexpr std::size_t sim14_param_count(std::size_t n_qubits,
                                                      std::size_t layers) {
    return 4 * n_qubits * layers;
}

/// Per layer: RY on every qubit; CRX ring with q_i controlling
/// q_{i-1 mod k} for i = k-1 down to 0; RY on every qubit; CRX ring with
/// q_i controlling q_{i+1 mod k} for i = 0 up to k-1. A one-qubit ring
/// degenerates to a plain RX. Angles are consumed in emission order.
/// Throws ArityError unless params.size() == 4 * qubits.size() * layers.
[[nodiscard]] std::vector<Gate> sim14_layer(std::span<const Qubit> qubits,
                                            std::span<const Angle> params,
                                            std::size_t layers = 1);

/// Compiles a type-checked diagram, allocating trainable slots in `store`
/// on first use. Qubits are numbered in topological box order. Throws
/// ShapeError or MissingFeatures.
[[nodiscard]] Circuit compile(const Diagram &d, const QubitMap &qmap,
                              ParamStore &store,
                              const FeatureTable *features = nullptr);

/// Number of distinct trainable slots in the full pipeline circuit
/// (sentence plus comparison box) for one sentence.
[[nodiscard]] std::size_t parameter_count(ModelKind model,
                                          std::string_view sentence,
                                          const Lexicon &lexicon,
                                          const QubitMap &qmap = {});

} // namespace multiq
