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
#include "multiq/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/os.h>
#include <nlohmann/json.hpp>

#include "multiq/errors.hpp"
#include "multiq/features.hpp"
#include "multiq/random.hpp"

namespace multiq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSplitStream = 0x5851f42d4c957f2dULL;
constexpr std::uint64_t kSpsaStream = 0x9e3779b97f4a7c15ULL;
constexpr const char *kMetricsHeader =
    "epoch,train_loss,train_accuracy,val_accuracy";

std::string utc_now() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                       fmt::gmtime(std::chrono::system_clock::to_time_t(
                           std::chrono::system_clock::now())));
}

template <typename T>
T get_as(const json &j, const char *key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(fmt::format("config key '{}': {}", key, e.what()));
    }
}

std::vector<const CompiledEntry *> pick(const std::vector<CompiledEntry> &all,
                                        const std::vector<std::size_t> &idx) {
    std::vector<const CompiledEntry *> out;
    out.reserve(idx.size());
    for (const auto i : idx) {
        out.push_back(&all[i]);
    }
    return out;
}

json seed_json(const SeedResult &r) {
    json j = {{"seed", r.seed}, {"status", r.ok ? "ok" : "failed"}};
    if (!r.ok) {
        j["error"] = r.error;
        return j;
    }
    j["best_epoch"] = r.best_epoch;
    j["test_accuracy"] = r.test_accuracy;
    j["best_val_accuracy"] = r.best_val_accuracy;
    j["final_train_accuracy"] = r.final_train_accuracy;
    j["max_train_accuracy"] = r.max_train_accuracy;
    j["epochs_run"] = r.history.empty() ? 0 : r.history.size() - 1;
    return j;
}

} // namespace

std::size_t ExperimentConfig::resolved_epochs() const {
    return epochs.value_or(task == Task::Unstructured ? 200 : 120);
}

std::size_t ExperimentConfig::resolved_batch() const {
    return batch.value_or(task == Task::Unstructured ? 20 : 7);
}

fs::path ExperimentConfig::resolved_lexicon() const {
    return lexicon.empty() ? data.parent_path() / "lexicon.tsv" : lexicon;
}

SpsaConfig ExperimentConfig::spsa() const {
    SpsaConfig s;
    s.a = a;
    s.c = c;
    s.epochs = resolved_epochs();
    s.batch_size = resolved_batch();
    return s;
}

void ExperimentConfig::validate() const {
    if (data.empty()) {
        throw ConfigError("no dataset given (--data)");
    }
    if (features.empty() == !synthetic_seed.has_value()) {
        throw ConfigError(
            "exactly one of --features and --synthetic-seed is required");
    }
    if (seeds.empty()) {
        throw ConfigError("seed list is empty");
    }
    qmap.validate();
    spsa().validate();
}

ExperimentConfig config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ExperimentConfig cfg;
    for (const auto &[key, value] : j.items()) {
        if (key == "model") {
            const auto m = parse_model_kind(get_as<std::string>(j, "model"));
            if (!m) {
                throw ConfigError(fmt::format("unknown model '{}'",
                                              value.dump()));
            }
            cfg.model = *m;
        } else if (key == "task") {
            const auto t = parse_task(get_as<std::string>(j, "task"));
            if (!t) {
                throw ConfigError(fmt::format("unknown task '{}'",
                                              value.dump()));
            }
            cfg.task = *t;
        } else if (key == "data") {
            cfg.data = get_as<std::string>(j, "data");
        } else if (key == "lexicon") {
            cfg.lexicon = get_as<std::string>(j, "lexicon");
        } else if (key == "features") {
            cfg.features = get_as<std::string>(j, "features");
        } else if (key == "synthetic-seed") {
            cfg.synthetic_seed = get_as<std::uint64_t>(j, "synthetic-seed");
        } else if (key == "epochs") {
            cfg.epochs = get_as<std::size_t>(j, "epochs");
        } else if (key == "batch") {
            cfg.batch = get_as<std::size_t>(j, "batch");
        } else if (key == "seeds") {
            cfg.seeds = get_as<std::vector<std::uint64_t>>(j, "seeds");
        } else if (key == "a") {
            cfg.a = get_as<double>(j, "a");
        } else if (key == "c") {
            cfg.c = get_as<double>(j, "c");
        } else if (key == "out") {
            cfg.out = get_as<std::string>(j, "out");
        } else {
            throw ConfigError(fmt::format("unknown config key '{}'", key));
        }
    }
    return cfg;
}

json to_json(const ExperimentConfig &cfg) {
    // The output directory is deliberately left out: it names where a run
    // is stored, not what it computes.
    json j = {{"model", to_string(cfg.model)},
              {"task", to_string(cfg.task)},
              {"data", cfg.data.generic_string()},
              {"lexicon", cfg.resolved_lexicon().generic_string()},
              {"epochs", cfg.resolved_epochs()},
              {"batch", cfg.resolved_batch()},
              {"seeds", cfg.seeds},
              {"a", cfg.a},
              {"c", cfg.c},
              {"A", cfg.spsa().stability()},
              {"alpha", cfg.spsa().alpha},
              {"gamma", cfg.spsa().gamma},
              {"qubits",
               {{"n", cfg.qmap.n},
                {"s", cfg.qmap.s},
                {"p", cfg.qmap.p},
                {"img", cfg.qmap.img},
                {"layers", cfg.qmap.layers}}}};
    if (cfg.synthetic_seed) {
        j["synthetic-seed"] = *cfg.synthetic_seed;
    } else {
        j["features"] = cfg.features.generic_string();
    }
    return j;
}

std::string run_id(const ExperimentConfig &cfg) {
    return fmt::format("{:016x}", fnv1a64(to_json(cfg).dump()));
}

Split split_indices(std::size_t n, std::uint64_t seed) {
    if (n < 3) {
        throw ConfigError(fmt::format(
            "need at least 3 entries for a train/val/test split, got {}", n));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed ^ kSplitStream);
    rng.shuffle(std::span(order));
    const auto frac = [n](double f) {
        return std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(f * static_cast<double>(n))));
    };
    const std::size_t n_val = frac(0.2);
    const std::size_t n_test = frac(0.2);
    const std::size_t n_train = n - n_val - n_test;
    Split s;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.val.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                 order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train + n_val),
                  order.end());
    return s;
}

void write_metrics_csv(const fs::path &path,
                       const std::vector<EpochMetrics> &history) {
    auto out = fmt::output_file(path.string());
    out.print("{}\n", kMetricsHeader);
    for (const auto &m : history) {
        out.print("{},{:.17g},{:.17g},{:.17g}\n", m.epoch, m.train_loss,
                  m.train_accuracy, m.val_accuracy);
    }
}

std::vector<EpochMetrics> read_metrics_csv(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open '{}'", path.string()));
    }
    std::string line;
    if (!std::getline(in, line) || line != kMetricsHeader) {
        throw SchemaError(1, fmt::format("expected header '{}'",
                                         kMetricsHeader));
    }
    std::vector<EpochMetrics> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        EpochMetrics m;
        char tail = 0;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf%c", &m.epoch,
                        &m.train_loss, &m.train_accuracy, &m.val_accuracy,
                        &tail) != 4) {
            throw SchemaError(lineno, "malformed metrics row");
        }
        rows.push_back(m);
    }
    return rows;
}

std::vector<ConvergencePoint> convergence(const fs::path &run_dir) {
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(run_dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_directory() && name.starts_with("seed-") &&
            fs::exists(entry.path() / "metrics.csv")) {
            files.push_back(entry.path() / "metrics.csv");
        }
    }
    if (files.empty()) {
        throw ConfigError(fmt::format("no seed-*/metrics.csv under '{}'",
                                      run_dir.string()));
    }
    std::sort(files.begin(), files.end());
    std::vector<std::vector<EpochMetrics>> runs;
    std::size_t length = SIZE_MAX;
    for (const auto &f : files) {
        runs.push_back(read_metrics_csv(f));
        length = std::min(length, runs.back().size());
    }
    std::vector<ConvergencePoint> curve(length);
    const double n = static_cast<double>(runs.size());
    for (std::size_t e = 0; e < length; ++e) {
        auto &pt = curve[e];
        pt.epoch = runs.front()[e].epoch;
        for (const auto &r : runs) {
            pt.mean_train_loss += r[e].train_loss / n;
            pt.mean_train_accuracy += r[e].train_accuracy / n;
            pt.mean_val_accuracy += r[e].val_accuracy / n;
            pt.best_val_accuracy = std::max(pt.best_val_accuracy, r[e].val_accuracy);
        }
    }
    return curve;
}

ExperimentResult run_experiment(const ExperimentConfig &cfg,
                                std::ostream *log) {
    cfg.validate();
    const auto started = utc_now();
    const auto say = [log](const std::string &msg) {
        if (log != nullptr) {
            *log << msg << '\n' << std::flush;
        }
    };

    const auto lexicon = Lexicon::load(cfg.resolved_lexicon());
    const auto entries = load_dataset(cfg.data, cfg.task, lexicon);
    say(fmt::format("loaded {} {} entries from {}", entries.size(),
                    to_string(cfg.task), cfg.data.string()));
    const auto dim = cfg.qmap.image_feature_dim();
    const auto features =
        cfg.synthetic_seed
            ? synthetic_features(image_ids(entries), dim, *cfg.synthetic_seed)
            : load_features(cfg.features, dim);

    ParamStore store;
    std::vector<CompiledEntry> compiled;
    compiled.reserve(entries.size());
    for (const auto &e : entries) {
        compiled.push_back(compile_entry(e, cfg.model, lexicon, cfg.qmap,
                                         store, features));
    }
    say(fmt::format("model {}: {} trainable parameters",
                    to_string(cfg.model), store.size()));

    ExperimentResult result;
    result.n_entries = entries.size();
    result.n_params = store.size();
    const auto spsa = cfg.spsa();
    std::vector<std::string> wall;

    for (const auto seed : cfg.seeds) {
        SeedResult r;
        r.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto split = split_indices(compiled.size(), seed);
            const auto train_set = pick(compiled, split.train);
            const auto val_set = pick(compiled, split.val);
            const auto test_set = pick(compiled, split.test);
            ParamStore params = store;
            params.initialize(seed);
            Rng rng(seed ^ kSpsaStream);
            const auto tr = train(params.values(), train_set, val_set, spsa, rng);
            r.history = tr.history;
            r.best_epoch = tr.best_epoch;
            r.best_val_accuracy = tr.history[tr.best_epoch].val_accuracy;
            r.final_train_accuracy = tr.history.back().train_accuracy;
            for (const auto &m : tr.history) {
                r.max_train_accuracy = std::max(r.max_train_accuracy, m.train_accuracy);
            }
            r.test_accuracy = evaluate_accuracy(test_set, tr.best_theta);
            r.ok = true;
            say(fmt::format("seed {}: best epoch {}, val {:.4f}, test {:.4f}",
                            seed, r.best_epoch, r.best_val_accuracy,
                            r.test_accuracy));
        } catch (const std::exception &e) {
            r.ok = false;
            r.error = e.what();
            say(fmt::format("seed {} failed: {}", seed, e.what()));
        }
        r.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
        result.seeds.push_back(std::move(r));
    }

    std::vector<double> accs;
    for (const auto &r : result.seeds) {
        if (r.ok) {
            accs.push_back(r.test_accuracy);
        }
    }
    if (!accs.empty()) {
        result.mean_test_accuracy =
            std::accumulate(accs.begin(), accs.end(), 0.0) /
            static_cast<double>(accs.size());
        result.best_test_accuracy = *std::max_element(accs.begin(), accs.end());
    }

    if (cfg.out.empty()) {
        return result;
    }
    fs::create_directories(cfg.out);
    json seeds = json::array();
    json seed_wall = json::object();
    for (const auto &r : result.seeds) {
        seeds.push_back(seed_json(r));
        seed_wall[std::to_string(r.seed)] = r.wall_seconds;
        if (r.ok) {
            const auto dir = cfg.out / fmt::format("seed-{}", r.seed);
            fs::create_directories(dir);
            write_metrics_csv(dir / "metrics.csv", r.history);
        }
    }
    json doc = {
        {"software", {{"name", "multiq"}, {"version", MULTIQ_VERSION}}},
        {"run_id", run_id(cfg)},
        {"config", to_json(cfg)},
        {"metadata",
         {{"entries", result.n_entries},
          {"parameters", result.n_params},
          {"split", {{"train", 0.6}, {"val", 0.2}, {"test", 0.2}}},
          {"selection", "best validation accuracy, earliest epoch on ties"},
          {"probabilities", "exact statevector, no shot sampling"},
          {"angle_units", "trainable slots in turns, fixed angles in radians"},
          {"initialization", "uniform [0, 1) turns"}}},
        {"seeds", std::move(seeds)},
        {"mean_test_accuracy", result.mean_test_accuracy
                                   ? json(*result.mean_test_accuracy)
                                   : json(nullptr)},
        {"best_test_accuracy", result.best_test_accuracy
                                   ? json(*result.best_test_accuracy)
                                   : json(nullptr)},
        {"timestamps",
         {{"started", started},
          {"finished", utc_now()},
          {"seed_wall_seconds", std::move(seed_wall)}}}};
    std::ofstream out(cfg.out / "results.json");
    out << doc.dump(2) << '\n';
    say(fmt::format("wrote {}", (cfg.out / "results.json").string()));
    return result;
}

} // namespace multiq
