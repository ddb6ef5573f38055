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
 * `multiq` command-line front end: train, parse, diagram, compile,
 * features gen and report.
 */
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "multiq/ansatz.hpp"
#include "multiq/dataset.hpp"
#include "multiq/diagram.hpp"
#include "multiq/errors.hpp"
#include "multiq/experiment.hpp"
#include "multiq/features.hpp"
#include "multiq/grammar.hpp"
#include "multiq/simulator.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::map<std::string, multiq::ModelKind> kModels = {
    {"cat", multiq::ModelKind::Cat},
    {"bow", multiq::ModelKind::Bow},
    {"seq", multiq::ModelKind::Seq},
    {"ltree", multiq::ModelKind::LTree},
    {"cfg", multiq::ModelKind::Cfg}};

const std::map<std::string, multiq::Task> kTasks = {
    {"unstructured", multiq::Task::Unstructured},
    {"structured", multiq::Task::Structured}};

std::string default_lexicon() {
    return (fs::path(MULTIQ_DATA_DIR) / "lexicon.tsv").string();
}

json parse_json(const multiq::Parse &p) {
    json tokens = json::array();
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
        tokens.push_back({{"token", p.tokens[i]},
                          {"category", multiq::to_string(p.categories[i])},
                          {"type", p.types[i].to_string()}});
    }
    json cups = json::array();
    for (const auto &link : p.reductions) {
        cups.push_back({link.left, link.right});
    }
    return {{"tokens", std::move(tokens)},
            {"cups", std::move(cups)},
            {"result", p.result.to_string()}};
}

struct TrainOptions {
    std::string config;
    std::optional<std::string> model, task, data, lexicon, features, out;
    std::optional<std::uint64_t> synthetic_seed;
    std::optional<std::size_t> epochs, batch;
    std::optional<std::vector<std::uint64_t>> seeds;
    std::optional<double> a, c;
};

int run_train(const TrainOptions &o) {
    multiq::ExperimentConfig cfg;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) {
            throw multiq::ConfigError(
                fmt::format("cannot open config '{}'", o.config));
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error &e) {
            throw multiq::ConfigError(
                fmt::format("config '{}': {}", o.config, e.what()));
        }
        cfg = multiq::config_from_json(j);
    }
    if (o.model) {
        cfg.model = kModels.at(*o.model);
    }
    if (o.task) {
        cfg.task = kTasks.at(*o.task);
    }
    if (o.data) {
        cfg.data = *o.data;
    }
    if (o.lexicon) {
        cfg.lexicon = *o.lexicon;
    }
    if (o.features) {
        cfg.features = *o.features;
        cfg.synthetic_seed.reset();
    }
    if (o.synthetic_seed) {
        cfg.synthetic_seed = o.synthetic_seed;
        cfg.features.clear();
    }
    if (o.epochs) {
        cfg.epochs = o.epochs;
    }
    if (o.batch) {
        cfg.batch = o.batch;
    }
    if (o.seeds) {
        cfg.seeds = *o.seeds;
    }
    if (o.a) {
        cfg.a = *o.a;
    }
    if (o.c) {
        cfg.c = *o.c;
    }
    if (o.out) {
        cfg.out = *o.out;
    }
    const auto result = multiq::run_experiment(cfg, &std::cerr);
    if (!result.mean_test_accuracy) {
        fmt::print(stderr, "every seed failed\n");
        return 1;
    }
    fmt::print("mean test accuracy {:.4f}, best {:.4f}\n",
               *result.mean_test_accuracy, *result.best_test_accuracy);
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multimodal quantum NLP: compositional sentence circuits "
                 "matched against image features"};
    app.set_version_flag("--version", MULTIQ_VERSION);
    app.require_subcommand(1);

    // train
    TrainOptions topt;
    auto *train = app.add_subcommand("train", "Train a model over several seeds");
    train->add_option("--config", topt.config, "JSON config; flags override it")
        ->check(CLI::ExistingFile);
    train->add_option("--model", topt.model)
        ->check(CLI::IsMember({"cat", "bow", "seq", "ltree", "cfg"}));
    train->add_option("--task", topt.task)
        ->check(CLI::IsMember({"unstructured", "structured"}));
    train->add_option("--data", topt.data, "JSON-lines dataset");
    train->add_option("--lexicon", topt.lexicon,
                      "Defaults to lexicon.tsv beside the dataset");
    train->add_option("--features", topt.features, "features.csv");
    train->add_option("--synthetic-seed", topt.synthetic_seed,
                      "Use seeded synthetic features instead of a CSV");
    train->add_option("--epochs", topt.epochs);
    train->add_option("--batch", topt.batch);
    train->add_option("--seeds", topt.seeds, "Comma-separated seed list")
        ->delimiter(',');
    train->add_option("--a", topt.a, "SPSA learning-rate gain");
    train->add_option("--c", topt.c, "SPSA perturbation gain");
    train->add_option("--out", topt.out, "Output directory");

    // parse
    std::string sentence;
    std::string lexicon_path = default_lexicon();
    auto *parse = app.add_subcommand("parse", "Pregroup parse of a sentence");
    parse->add_option("sentence", sentence)->required();
    parse->add_option("--lexicon", lexicon_path)->check(CLI::ExistingFile);

    // diagram
    std::string model_name = "cat";
    std::string image_id;
    bool canonical = false;
    auto *diagram = app.add_subcommand("diagram", "String diagram as JSON");
    diagram->add_option("sentence", sentence)->required();
    diagram->add_option("--model", model_name)
        ->check(CLI::IsMember({"cat", "bow", "seq", "ltree", "cfg"}));
    diagram->add_option("--lexicon", lexicon_path)->check(CLI::ExistingFile);
    diagram->add_option("--image", image_id,
                        "Attach the comparison box for this image");
    diagram->add_flag("--canonical", canonical, "Print the canonical form");

    // compile
    std::string features_path;
    std::uint64_t synthetic_seed = 0;
    std::uint64_t param_seed = 1;
    bool trace_state = false;
    auto *compile = app.add_subcommand("compile", "Circuit as JSON");
    compile->add_option("sentence", sentence)->required();
    compile->add_option("--model", model_name)
        ->check(CLI::IsMember({"cat", "bow", "seq", "ltree", "cfg"}));
    compile->add_option("--lexicon", lexicon_path)->check(CLI::ExistingFile);
    compile->add_option("--image", image_id)->required();
    auto *feat_opt = compile->add_option("--features", features_path)
                         ->check(CLI::ExistingFile);
    compile->add_option("--synthetic-seed", synthetic_seed)->excludes(feat_opt);
    compile->add_option("--param-seed", param_seed,
                        "Initialization seed used by --trace-state");
    compile->add_flag("--trace-state", trace_state,
                      "Evaluate and print the final amplitudes");

    // features gen
    auto *features = app.add_subcommand("features", "Feature tables");
    features->require_subcommand(1);
    std::string ids_from;
    std::string task_name = "structured";
    std::string out_path;
    std::size_t dim = multiq::QubitMap{}.image_feature_dim();
    std::uint64_t gen_seed = 7;
    auto *gen = features->add_subcommand(
        "gen", "Write seeded synthetic features for a dataset's images");
    gen->add_option("--data", ids_from)->required()->check(CLI::ExistingFile);
    gen->add_option("--task", task_name)
        ->check(CLI::IsMember({"unstructured", "structured"}));
    gen->add_option("--lexicon", lexicon_path)->check(CLI::ExistingFile);
    gen->add_option("--seed", gen_seed);
    gen->add_option("--dim", dim);
    gen->add_option("--out", out_path)->required();

    // report
    std::string run_dir;
    auto *report = app.add_subcommand(
        "report", "Per-epoch convergence data of a training run");
    report->add_option("run", run_dir)->required()->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            return run_train(topt);
        }
        const auto load_lexicon = [&] {
            return multiq::Lexicon::load(lexicon_path);
        };
        if (parse->parsed()) {
            const auto p = multiq::parse_sentence(sentence, load_lexicon());
            fmt::print("{}\n", parse_json(p).dump(2));
            return 0;
        }
        if (diagram->parsed()) {
            const auto p = multiq::parse_sentence(sentence, load_lexicon());
            auto d = multiq::build_diagram(kModels.at(model_name), p);
            if (!image_id.empty()) {
                d = multiq::attach_comparison(d, image_id);
            }
            if (canonical) {
                d = multiq::canonical_form(d);
            }
            fmt::print("{}\n", multiq::to_json(d).dump(2));
            return 0;
        }
        if (compile->parsed()) {
            const auto lex = load_lexicon();
            const multiq::QubitMap qmap;
            const auto table =
                features_path.empty()
                    ? multiq::synthetic_features(std::vector{image_id},
                                                 qmap.image_feature_dim(),
                                                 synthetic_seed)
                    : multiq::load_features(features_path,
                                            qmap.image_feature_dim());
            const auto p = multiq::parse_sentence(sentence, lex);
            const auto d = multiq::attach_comparison(
                multiq::build_diagram(kModels.at(model_name), p), image_id);
            multiq::ParamStore store;
            const auto circuit = multiq::compile(d, qmap, store, &table);
            json out = {{"circuit", multiq::to_json(circuit)},
                        {"parameters", multiq::to_json(store)}};
            if (trace_state) {
                store.initialize(param_seed);
                std::vector<multiq::Complex> amps;
                const auto r = multiq::evaluate(circuit, store.values(), &amps);
                json state = json::array();
                for (const auto &z : amps) {
                    state.push_back({z.real(), z.imag()});
                }
                out["trace"] = {{"param_seed", param_seed},
                                {"p_match", r.p_match},
                                {"postselect_weight", r.postselect_weight},
                                {"vanished", r.vanished},
                                {"final_state", std::move(state)}};
            }
            fmt::print("{}\n", out.dump(2));
            return 0;
        }
        if (gen->parsed()) {
            const auto entries = multiq::load_dataset(
                ids_from, kTasks.at(task_name), load_lexicon());
            const auto table = multiq::synthetic_features(
                multiq::image_ids(entries), dim, gen_seed);
            std::ofstream out(out_path);
            if (!out) {
                throw multiq::ConfigError(
                    fmt::format("cannot write '{}'", out_path));
            }
            multiq::write_features(table, out,
                                   fmt::format("synthetic seed {}", gen_seed));
            fmt::print(stderr, "wrote {} rows to {}\n", table.size(), out_path);
            return 0;
        }
        if (report->parsed()) {
            fmt::print("epoch,mean_train_loss,mean_train_accuracy,"
                       "mean_val_accuracy,best_val_accuracy\n");
            for (const auto &pt : multiq::convergence(run_dir)) {
                fmt::print("{},{:.17g},{:.17g},{:.17g},{:.17g}\n", pt.epoch,
                           pt.mean_train_loss, pt.mean_train_accuracy,
                           pt.mean_val_accuracy, pt.best_val_accuracy);
            }
            return 0;
        }
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 1;
}
