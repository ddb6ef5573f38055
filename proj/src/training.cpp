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
#include "multiq/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "multiq/errors.hpp"
#include "multiq/simulator.hpp"

namespace multiq {

namespace {

Circuit compile_pipeline(std::string_view sentence, const std::string &image,
                         ModelKind model, const Lexicon &lexicon,
                         const QubitMap &qmap, ParamStore &store,
                         const FeatureTable &features) {
    const auto parse = parse_sentence(sentence, lexicon);
    const auto d = attach_comparison(build_diagram(model, parse), image);
    return compile(d, qmap, store, &features);
}

} // namespace

void SpsaConfig::validate() const {
    if (!(a > 0.0) || !(c > 0.0)) {
        throw ConfigError("SPSA gains a and c must be positive");
    }
    if (stability() < 0.0) {
        throw ConfigError("SPSA stability offset A must be non-negative");
    }
    if (batch_size == 0) {
        throw ConfigError("batch size must be at least 1");
    }
}

SpsaGains spsa_gains(const SpsaConfig &cfg, std::size_t k) {
    const double kk = static_cast<double>(k);
    return {cfg.a / std::pow(cfg.stability() + kk + 1.0, cfg.alpha),
            cfg.c / std::pow(kk + 1.0, cfg.gamma)};
}

double bce_loss(double p, int label) {
    // Clamp the probability assigned to the true label so both tails hit
    // exactly -log(kProbabilityClamp).
    const double q = label != 0 ? p : 1.0 - p;
    return -std::log(std::clamp(q, kProbabilityClamp, 1.0 - kProbabilityClamp));
}

double mean_bce(std::span<const Prediction> predictions) {
    if (predictions.empty()) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto &pr : predictions) {
        total += bce_loss(pr.p, pr.label);
    }
    return total / static_cast<double>(predictions.size());
}

double spsa_step(std::span<double> theta, std::size_t k, const LossFn &loss,
                 const SpsaConfig &cfg, Rng &rng) {
    const auto gains = spsa_gains(cfg, k);
    std::vector<double> delta(theta.size());
    for (auto &d : delta) {
        d = rng.rademacher();
    }
    std::vector<double> plus(theta.begin(), theta.end());
    std::vector<double> minus(theta.begin(), theta.end());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        plus[i] += gains.c_k * delta[i];
        minus[i] -= gains.c_k * delta[i];
    }
    const double l_plus = loss(plus);
    const double l_minus = loss(minus);
    const double scale = (l_plus - l_minus) / (2.0 * gains.c_k);
    for (std::size_t i = 0; i < theta.size(); ++i) {
        // delta is +-1, so dividing by it equals multiplying.
        theta[i] -= gains.a_k * scale * delta[i];
    }
    return 0.5 * (l_plus + l_minus);
}

CompiledEntry compile_entry(const DatasetEntry &entry, ModelKind model,
                            const Lexicon &lexicon, const QubitMap &qmap,
                            ParamStore &store, const FeatureTable &features) {
    if (const auto *u = std::get_if<UnstructuredEntry>(&entry)) {
        return {compile_pipeline(u->sentence, u->pos_image, model, lexicon,
                                 qmap, store, features),
                compile_pipeline(u->sentence, u->neg_image, model, lexicon,
                                 qmap, store, features)};
    }
    const auto &s = std::get<StructuredEntry>(entry);
    return {compile_pipeline(s.pos_sentence, s.image, model, lexicon, qmap,
                             store, features),
            compile_pipeline(s.neg_sentence, s.image, model, lexicon, qmap,
                             store, features)};
}

std::array<Sample, 2> entry_samples(const CompiledEntry &e) {
    return {Sample{&e.pos, 1}, Sample{&e.neg, 0}};
}

double score_pair(double p_pos, double p_neg) {
    if (p_pos > p_neg) {
        return 1.0;
    }
    if (p_pos < p_neg) {
        return 0.0;
    }
    return 0.5;
}

double accuracy(std::span<const PairScore> pairs) {
    if (pairs.empty()) {
        throw ConfigError("accuracy of an empty entry set");
    }
    double total = 0.0;
    for (const auto &pr : pairs) {
        total += score_pair(pr.p_pos, pr.p_neg);
    }
    return total / static_cast<double>(pairs.size());
}

std::vector<PairScore> predict(std::span<const CompiledEntry *const> entries,
                               std::span<const double> theta) {
    std::vector<PairScore> out;
    out.reserve(entries.size());
    for (const auto *e : entries) {
        out.push_back({evaluate(e->pos, theta).p_match,
                       evaluate(e->neg, theta).p_match});
    }
    return out;
}

double evaluate_accuracy(std::span<const CompiledEntry *const> entries,
                         std::span<const double> theta) {
    return accuracy(predict(entries, theta));
}

double entries_loss(std::span<const CompiledEntry *const> entries,
                    std::span<const double> theta) {
    std::vector<Prediction> preds;
    preds.reserve(2 * entries.size());
    for (const auto *e : entries) {
        for (const auto &sample : entry_samples(*e)) {
            preds.push_back({evaluate(*sample.circuit, theta).p_match,
                             sample.label});
        }
    }
    return mean_bce(preds);
}

namespace {

EpochMetrics measure(std::size_t epoch,
                     std::span<const CompiledEntry *const> train_set,
                     std::span<const CompiledEntry *const> val_set,
                     std::span<const double> theta) {
    const auto scores = predict(train_set, theta);
    std::vector<Prediction> preds;
    preds.reserve(2 * scores.size());
    for (const auto &s : scores) {
        preds.push_back({s.p_pos, 1});
        preds.push_back({s.p_neg, 0});
    }
    return {epoch, mean_bce(preds), accuracy(scores),
            evaluate_accuracy(val_set, theta)};
}

} // namespace

TrainResult train(std::span<double> theta,
                  std::span<const CompiledEntry *const> train_set,
                  std::span<const CompiledEntry *const> val_set,
                  const SpsaConfig &cfg, Rng &rng) {
    cfg.validate();
    if (train_set.empty() || val_set.empty()) {
        throw ConfigError("training and validation sets must be non-empty");
    }
    TrainResult result;
    result.history.push_back(measure(0, train_set, val_set, theta));
    result.best_theta.assign(theta.begin(), theta.end());

    std::vector<const CompiledEntry *> order(train_set.begin(),
                                             train_set.end());
    std::size_t k = 0;
    double best_val = -1.0;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        for (std::size_t start = 0; start < order.size();
             start += cfg.batch_size) {
            const auto batch = std::span(order).subspan(
                start, std::min(cfg.batch_size, order.size() - start));
            const LossFn loss = [batch](std::span<const double> t) {
                return entries_loss(batch, t);
            };
            (void)spsa_step(theta, k++, loss, cfg, rng);
        }
        const auto m = measure(epoch, train_set, val_set, theta);
        result.history.push_back(m);
        if (m.val_accuracy > best_val) {
            best_val = m.val_accuracy;
            result.best_epoch = epoch;
            result.best_theta.assign(theta.begin(), theta.end());
        }
    }
    return result;
}

} // namespace multiq
