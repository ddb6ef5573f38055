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
 * BCE loss, the SPSA optimizer and the contrastive training loop.
 */
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "multiq/ansatz.hpp"
#include "multiq/circuit.hpp"
#include "multiq/dataset.hpp"
#include "multiq/features.hpp"
#include "multiq/param_store.hpp"
#include "multiq/random.hpp"

namespace multiq {

inline constexpr double kProbabilityClamp = 1e-7;

struct SpsaConfig {
    double a = 0.02;
    double c = 0.06;
    /// Stability offset; 0.001 * epochs when unset.
    std::optional<double> A;
    double alpha = 0.602;
    double gamma = 0.101;
    std::size_t epochs = 200;
    std::size_t batch_size = 20;

    [[nodiscard]] double stability() const {
        return A ? *A : 0.001 * static_cast<double>(epochs);
    }
    /// Throws ConfigError unless a, c > 0, A >= 0 and batch_size >= 1.
    void validate() const;
};

struct SpsaGains {
    double a_k = 0.0;
    double c_k = 0.0;
};

/// c_k = c / (k+1)^gamma, a_k = a / (A+k+1)^alpha.
[[nodiscard]] SpsaGains spsa_gains(const SpsaConfig &cfg, std::size_t k);

/// Binary cross-entropy with p clamped to [1e-7, 1 - 1e-7].
[[nodiscard]] double bce_loss(double p, int label);

struct Prediction {
    double p = 0.5;
    int label = 0;
};

[[nodiscard]] double mean_bce(std::span<const Prediction> predictions);

using LossFn = std::function<double(std::span<const double>)>;

/// One two-sided SPSA update of `theta` in place. Draws the Rademacher
/// direction from `rng`, one draw per coordinate in order. Returns the
/// mean of the two perturbed losses.
double spsa_step(std::span<double> theta, std::size_t k, const LossFn &loss,
                 const SpsaConfig &cfg, Rng &rng);

struct Sample {
    const Circuit *circuit = nullptr;
    int label = 0;
};

/// The positive and negative circuits of one contrastive entry.
struct CompiledEntry {
    Circuit pos;
    Circuit neg;
};

[[nodiscard]] CompiledEntry compile_entry(const DatasetEntry &entry,
                                          ModelKind model,
                                          const Lexicon &lexicon,
                                          const QubitMap &qmap,
                                          ParamStore &store,
                                          const FeatureTable &features);

/// (pos, 1) followed by (neg, 0).
[[nodiscard]] std::array<Sample, 2> entry_samples(const CompiledEntry &e);

/// 1 if p_pos > p_neg, 0 if p_pos < p_neg, 0.5 on an exact tie.
[[nodiscard]] double score_pair(double p_pos, double p_neg);

struct PairScore {
    double p_pos = 0.5;
    double p_neg = 0.5;
};

[[nodiscard]] double accuracy(std::span<const PairScore> pairs);

[[nodiscard]] std::vector<PairScore>
predict(std::span<const CompiledEntry *const> entries,
        std::span<const double> theta);

[[nodiscard]] double evaluate_accuracy(std::span<const CompiledEntry *const> entries,
                                       std::span<const double> theta);

/// Mean BCE over both samples of every entry.
[[nodiscard]] double entries_loss(std::span<const CompiledEntry *const> entries,
                                  std::span<const double> theta);

struct EpochMetrics {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    /// Row 0 holds the metrics at initialization.
    std::vector<EpochMetrics> history;
    std::size_t best_epoch = 0;
    std::vector<double> best_theta;
};

/// Runs cfg.epochs epochs of mini-batch SPSA over `train`. Each epoch
/// shuffles the training set with `rng`; the iteration index k runs
/// across epochs. The best epoch maximizes validation accuracy, ties
/// going to the earliest; with zero epochs it is the initialization.
[[nodiscard]] TrainResult train(std::span<double> theta,
                                std::span<const CompiledEntry *const> train_set,
                                std::span<const CompiledEntry *const> val_set,
                                const SpsaConfig &cfg, Rng &rng);

} // namespace multiq
