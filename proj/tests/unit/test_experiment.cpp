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
#include <filesystem>
#include <fstream>
#include <set>

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include "multiq/errors.hpp"
#include "multiq/experiment.hpp"
#include "unit/support.hpp"

using namespace multiq;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / "multiq-tests" / name;
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig sample_config(ModelKind model) {
    ExperimentConfig cfg;
    cfg.model = model;
    cfg.task = Task::Structured;
    cfg.data = testing::data_dir() / "structured_sample.jsonl";
    cfg.synthetic_seed = 7;
    cfg.epochs = 3;
    cfg.seeds = {1, 2};
    return cfg;
}

} // namespace

TEST_CASE("Task defaults", "[experiment]") {
    ExperimentConfig cfg;
    cfg.task = Task::Unstructured;
    REQUIRE(cfg.resolved_epochs() == 200);
    REQUIRE(cfg.resolved_batch() == 20);
    cfg.task = Task::Structured;
    REQUIRE(cfg.resolved_epochs() == 120);
    REQUIRE(cfg.resolved_batch() == 7);
    REQUIRE(cfg.spsa().stability() == Catch::Approx(0.12));
    cfg.data = "somewhere/structured.jsonl";
    REQUIRE(cfg.resolved_lexicon() == fs::path("somewhere/lexicon.tsv"));
}

TEST_CASE("Config from JSON", "[experiment]") {
    const auto j = nlohmann::json::parse(R"({
        "model": "ltree", "task": "unstructured", "data": "d.jsonl",
        "synthetic-seed": 4, "epochs": 9, "batch": 3, "seeds": [5, 6],
        "a": 0.1, "c": 0.2, "out": "runs/x"})");
    const auto cfg = config_from_json(j);
    REQUIRE(cfg.model == ModelKind::LTree);
    REQUIRE(cfg.task == Task::Unstructured);
    REQUIRE(cfg.synthetic_seed == 4u);
    REQUIRE(cfg.resolved_epochs() == 9);
    REQUIRE(cfg.resolved_batch() == 3);
    REQUIRE(cfg.seeds == std::vector<std::uint64_t>{5, 6});
    REQUIRE(cfg.a == 0.1);
    REQUIRE(cfg.out == fs::path("runs/x"));
    REQUIRE_NOTHROW(cfg.validate());

    REQUIRE_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"lr": 1})")),
                      ConfigError);
    REQUIRE_THROWS_AS(
        config_from_json(nlohmann::json::parse(R"({"model": "tree"})")),
        ConfigError);
    REQUIRE_THROWS_AS(
        config_from_json(nlohmann::json::parse(R"({"epochs": "many"})")),
        ConfigError);
}

TEST_CASE("Config validation", "[experiment]") {
    auto cfg = sample_config(ModelKind::Cat);
    REQUIRE_NOTHROW(cfg.validate());
    auto no_features = cfg;
    no_features.synthetic_seed.reset();
    REQUIRE_THROWS_AS(no_features.validate(), ConfigError);
    auto both = cfg;
    both.features = "f.csv";
    REQUIRE_THROWS_AS(both.validate(), ConfigError);
    auto no_seeds = cfg;
    no_seeds.seeds.clear();
    REQUIRE_THROWS_AS(no_seeds.validate(), ConfigError);
    auto no_batch = cfg;
    no_batch.batch = 0;
    REQUIRE_THROWS_AS(no_batch.validate(), ConfigError);
}

TEST_CASE("Run id ignores the output directory", "[experiment]") {
    auto a = sample_config(ModelKind::Cat);
    auto b = a;
    b.out = "elsewhere";
    REQUIRE(run_id(a) == run_id(b));
    b.epochs = 4;
    REQUIRE(run_id(a) != run_id(b));
}

TEST_CASE("Splits partition the entries", "[experiment]") {
    for (const std::size_t n : {3u, 20u, 130u, 350u}) {
        const auto s = split_indices(n, 1);
        REQUIRE(s.train.size() + s.val.size() + s.test.size() == n);
        REQUIRE_FALSE(s.val.empty());
        REQUIRE_FALSE(s.test.empty());
        std::set<std::size_t> all(s.train.begin(), s.train.end());
        all.insert(s.val.begin(), s.val.end());
        all.insert(s.test.begin(), s.test.end());
        REQUIRE(all.size() == n);
    }
    const auto s20 = split_indices(20, 1);
    REQUIRE(s20.train.size() == 12);
    REQUIRE(s20.val.size() == 4);
    REQUIRE(split_indices(130, 4).train == split_indices(130, 4).train);
    REQUIRE(split_indices(130, 4).train != split_indices(130, 5).train);
    REQUIRE_THROWS_AS(split_indices(2, 1), ConfigError);
}

TEST_CASE("BOW on the structured task scores exactly one half",
          "[experiment]") {
    auto cfg = sample_config(ModelKind::Bow);
    cfg.seeds = {1, 2, 3, 4, 5};
    const auto r = run_experiment(cfg);
    REQUIRE(r.seeds.size() == 5);
    for (const auto &s : r.seeds) {
        REQUIRE(s.ok);
        REQUIRE(s.test_accuracy == 0.5);
        for (const auto &m : s.history) {
            REQUIRE(m.val_accuracy == 0.5);
            REQUIRE(m.train_accuracy == 0.5);
        }
    }
    REQUIRE(r.mean_test_accuracy == 0.5);
    REQUIRE(r.best_test_accuracy == 0.5);
}

TEST_CASE("Zero epochs evaluates the initialization", "[experiment]") {
    auto cfg = sample_config(ModelKind::Cat);
    cfg.epochs = 0;
    cfg.seeds = {3};
    const auto r = run_experiment(cfg);
    REQUIRE(r.seeds.front().ok);
    REQUIRE(r.seeds.front().best_epoch == 0);
    REQUIRE(r.seeds.front().history.size() == 1);
}

TEST_CASE("Outputs are written", "[experiment]") {
    auto cfg = sample_config(ModelKind::Seq);
    cfg.out = scratch("outputs");
    const auto r = run_experiment(cfg);
    REQUIRE(fs::exists(cfg.out / "results.json"));
    for (const auto seed : cfg.seeds) {
        const auto path = cfg.out / ("seed-" + std::to_string(seed)) / "metrics.csv";
        REQUIRE(fs::exists(path));
        const auto rows = read_metrics_csv(path);
        REQUIRE(rows.size() == 4);
        const auto &hist =
            std::find_if(r.seeds.begin(), r.seeds.end(), [&](const auto &s) {
                return s.seed == seed;
            })->history;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            REQUIRE(rows[i].train_loss == hist[i].train_loss);
            REQUIRE(rows[i].val_accuracy == hist[i].val_accuracy);
        }
    }
    std::ifstream in(cfg.out / "results.json");
    const auto j = nlohmann::json::parse(in);
    REQUIRE(j.at("software").at("version") == MULTIQ_VERSION);
    REQUIRE(j.at("run_id") == run_id(cfg));
    REQUIRE(j.at("config").at("model") == "seq");
    REQUIRE(j.at("seeds").size() == 2);
    REQUIRE(j.at("mean_test_accuracy").get<double>() ==
            *r.mean_test_accuracy);
    REQUIRE(j.at("best_test_accuracy").get<double>() ==
            *r.best_test_accuracy);
    REQUIRE(j.contains("timestamps"));

    const auto curve = convergence(cfg.out);
    REQUIRE(curve.size() == 4);
    for (const auto &pt : curve) {
        REQUIRE(pt.best_val_accuracy >= pt.mean_val_accuracy - 1e-15);
    }
}

TEST_CASE("A failing seed does not stop the others", "[experiment]") {
    // Seeds cannot fail on valid data, so use a dataset too small to split.
    const auto dir = scratch("tiny");
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "tiny.jsonl");
        out << R"({"pos_sentence": "Dogs chase cats", "neg_sentence": "Cats chase dogs", "image": "i"})"
            << '\n'
            << R"({"pos_sentence": "Boys hold girls", "neg_sentence": "Girls hold boys", "image": "j"})"
            << '\n';
    }
    auto cfg = sample_config(ModelKind::Cat);
    cfg.data = dir / "tiny.jsonl";
    cfg.lexicon = testing::data_dir() / "lexicon.tsv";
    cfg.out = dir / "run";
    const auto r = run_experiment(cfg);
    REQUIRE(r.seeds.size() == 2);
    for (const auto &s : r.seeds) {
        REQUIRE_FALSE(s.ok);
        REQUIRE_FALSE(s.error.empty());
    }
    REQUIRE_FALSE(r.mean_test_accuracy);
    REQUIRE(fs::exists(cfg.out / "results.json"));
}

TEST_CASE("Metrics files are validated", "[experiment]") {
    const auto dir = scratch("metrics");
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "bad.csv");
        out << "epoch,loss\n0,1\n";
    }
    REQUIRE_THROWS_AS(read_metrics_csv(dir / "bad.csv"), SchemaError);
    {
        std::ofstream out(dir / "row.csv");
        out << "epoch,train_loss,train_accuracy,val_accuracy\n0,1,x,0\n";
    }
    REQUIRE_THROWS_AS(read_metrics_csv(dir / "row.csv"), SchemaError);
}
