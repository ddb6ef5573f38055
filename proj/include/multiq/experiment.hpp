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
 * Experiment orchestration: configuration, per-seed splits and training,
 * and the metrics.csv / results.json outputs.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "multiq/ansatz.hpp"
#include "multiq/dataset.hpp"
#include "multiq/diagram.hpp"
#include "multiq/training.hpp"

namespace multiq {

struct ExperimentConfig {
    ModelKind model = ModelKind::Cat;
    Task task = Task::Structured;
    std::filesystem::path data;
    /// Defaults to lexicon.tsv next to the dataset file.
    std::filesystem::path lexicon;
    std::filesystem::path features;
    std::optional<std::uint64_t> synthetic_seed;
    /// Task defaults: 200/20 unstructured, 120/7 structured.
    std::optional<std::size_t> epochs;
    std::optional<std::size_t> batch;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    double a = 0.02;
    double c = 0.06;
    std::filesystem::path out;
    QubitMap qmap;

    [[nodiscard]] std::size_t resolved_epochs() const;
    [[nodiscard]] std::size_t resolved_batch() const;
    [[nodiscard]] std::filesystem::path resolved_lexicon() const;
    [[nodiscard]] SpsaConfig spsa() const;
    /// Throws ConfigError on a missing data path, missing feature source,
    /// empty seed list or invalid SPSA settings.
    void validate() const;
};

/// Reads keys named after the command-line flags: model, task, data,
/// lexicon, features, synthetic-seed, epochs, batch, seeds, a, c, out.
/// Unknown keys are a ConfigError.
[[nodiscard]] ExperimentConfig config_from_json(const nlohmann::json &j);
[[nodiscard]] nlohmann::json to_json(const ExperimentConfig &cfg);

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Seeded 60/20/20 partition of [0, n). Needs n >= 3.
[[nodiscard]] Split split_indices(std::size_t n, std::uint64_t seed);

struct SeedResult {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::size_t best_epoch = 0;
    double test_accuracy = 0.0;
    double best_val_accuracy = 0.0;
    double final_train_accuracy = 0.0;
    double max_train_accuracy = 0.0;
    std::vector<EpochMetrics> history;
    double wall_seconds = 0.0;
};

struct ExperimentResult {
    std::vector<SeedResult> seeds;
    std::size_t n_entries = 0;
    std::size_t n_params = 0;
    /// Over successful seeds; absent when every seed failed.
    std::optional<double> mean_test_accuracy;
    std::optional<double> best_test_accuracy;
};

/// Loads data and features, compiles every entry once, and trains one
/// model per seed. A seed that throws is recorded as failed and the
/// remaining seeds still run. Writes outputs when cfg.out is set.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig &cfg,
                                              std::ostream *log = nullptr);

void write_metrics_csv(const std::filesystem::path &path,
                       const std::vector<EpochMetrics> &history);
[[nodiscard]] std::vector<EpochMetrics>
read_metrics_csv(const std::filesystem::path &path);

/// Hex digest of the canonical config JSON.
[[nodiscard]] std::string run_id(const ExperimentConfig &cfg);

struct ConvergencePoint {
    std::size_t epoch = 0;
    double mean_train_loss = 0.0;
    double mean_train_accuracy = 0.0;
    double mean_val_accuracy = 0.0;
    double best_val_accuracy = 0.0;
};

/// Per-epoch aggregate over the seed-*/metrics.csv files of a run
/// directory, truncated to the shortest history.
[[nodiscard]] std::vector<ConvergencePoint>
convergence(const std::filesystem::path &run_dir);

} // namespace multiq
