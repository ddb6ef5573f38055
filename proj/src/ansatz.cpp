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
#include "multiq/ansatz.hpp"

#include <array>
#include <map>

#include <fmt/format.h>

#include "multiq/errors.hpp"

namespace multiq {

namespace {

std::vector<Angle> slot_angles(SlotRange r) {
    std::vector<Angle> out;
    out.reserve(r.size);
    for (std::size_t i = 0; i < r.size; ++i) {
        out.emplace_back(r.at(i));
    }
    return out;
}

class Compiler {
  public:
    Compiler(const Diagram &d, const QubitMap &qmap, ParamStore &store,
             const FeatureTable *features)
        : d_(d), qmap_(qmap), store_(store), features_(features) {}

    Circuit run() {
        validate(d_);
        const auto outs = d_.output_ports();
        if (outs.size() != 1) {
            throw ShapeError(fmt::format(
                "compilation needs exactly one output wire, found {}",
                outs.size()));
        }
        for (const auto &w : d_.wires()) {
            incoming_[w.to] = w.from;
        }
        for (const auto b : topological_order(d_)) {
            emit(b);
        }
        const auto &out = wire_qubits_.at(outs.front());
        circuit_.measure = out.front();
        circuit_.n_qubits = next_qubit_;
        return std::move(circuit_);
    }

  private:
    std::vector<Qubit> allocate(std::size_t count) {
        std::vector<Qubit> q(count);
        for (auto &x : q) {
            x = next_qubit_++;
        }
        return q;
    }

    const std::vector<Qubit> &input(std::size_t box, std::size_t index) const {
        return wire_qubits_.at(incoming_.at(Port{box, index}));
    }

    void sim14(std::span<const Qubit> qubits, std::span<const Angle> params) {
        auto gates = sim14_layer(qubits, params, qmap_.layers);
        circuit_.gates.insert(circuit_.gates.end(), gates.begin(), gates.end());
    }

    void postselect(std::span<const Qubit> qubits) {
        circuit_.postselect.insert(circuit_.postselect.end(), qubits.begin(),
                                   qubits.end());
    }

    void emit(std::size_t b) {
        const Box &box = d_.boxes()[b];
        switch (box.kind) {
        case BoxKind::Word: {
            std::vector<Qubit> all;
            for (std::size_t i = 0; i < box.cod.size(); ++i) {
                auto q = allocate(qmap_.count(box.cod[i].atom));
                all.insert(all.end(), q.begin(), q.end());
                wire_qubits_[Port{b, i}] = std::move(q);
            }
            const auto range = store_.symbol(
                box.label, box.cod, sim14_param_count(all.size(), qmap_.layers));
            sim14(all, slot_angles(range));
            break;
        }
        case BoxKind::ImageState: {
            if (features_ == nullptr) {
                throw MissingFeatures(box.label);
            }
            const auto q = allocate(qmap_.count(AtomicType::IMG));
            const auto angles = features_->angles(box.label);
            if (angles.size() != sim14_param_count(q.size(), qmap_.layers)) {
                throw ArityError(fmt::format(
                    "feature vector of '{}' has {} values, the image register "
                    "needs {}",
                    box.label, angles.size(),
                    sim14_param_count(q.size(), qmap_.layers)));
            }
            sim14(q, std::vector<Angle>(angles.begin(), angles.end()));
            wire_qubits_[Port{b, 0}] = q;
            break;
        }
        case BoxKind::Cup: {
            const auto &left = input(b, 0);
            const auto &right = input(b, 1);
            const std::size_t m = left.size();
            // Nested pairing for multi-qubit wires.
            for (std::size_t i = 0; i < m; ++i) {
                const Qubit l = left[i];
                const Qubit r = right[m - 1 - i];
                circuit_.gates.push_back(Gate::cnot(l, r));
                circuit_.gates.push_back(Gate::h(l));
                postselect(std::array{l, r});
            }
            break;
        }
        case BoxKind::Spider: {
            const auto survivor = input(b, 0);
            for (std::size_t j = 1; j < box.dom.size(); ++j) {
                const auto &absorbed = input(b, j);
                for (std::size_t i = 0; i < survivor.size(); ++i) {
                    circuit_.gates.push_back(Gate::cnot(survivor[i], absorbed[i]));
                }
                postselect(absorbed);
            }
            wire_qubits_[Port{b, 0}] = survivor;
            break;
        }
        case BoxKind::Merge: {
            const auto left = input(b, 0);
            const auto right = input(b, 1);
            std::vector<Qubit> all = left;
            all.insert(all.end(), right.begin(), right.end());
            const auto range = store_.symbol(
                box.label, box.dom, sim14_param_count(all.size(), qmap_.layers));
            sim14(all, slot_angles(range));
            postselect(left);
            wire_qubits_[Port{b, 0}] = right;
            break;
        }
        case BoxKind::Comparison: {
            const auto sentence = input(b, 0);
            const auto image = input(b, 1);
            std::vector<Qubit> all = sentence;
            all.insert(all.end(), image.begin(), image.end());
            const auto range = store_.comparison(
                sim14_param_count(all.size(), qmap_.layers));
            sim14(all, slot_angles(range));
            postselect(image);
            wire_qubits_[Port{b, 0}] = sentence;
            break;
        }
        }
    }

    const Diagram &d_;
    const QubitMap &qmap_;
    ParamStore &store_;
    const FeatureTable *features_;
    Circuit circuit_;
    Qubit next_qubit_ = 0;
    std::map<Port, Port> incoming_;
    std::map<Port, std::vector<Qubit>> wire_qubits_;
};

} // namespace

std::uint32_t QubitMap::count(AtomicType t) const {
    switch (t) {
    case AtomicType::N:
        return n;
    case AtomicType::S:
        return s;
    case AtomicType::P:
        return p;
    case AtomicType::IMG:
        return img;
    }
    return 0;
}

std::uint32_t QubitMap::qubits(const PregroupType &t) const {
    std::uint32_t total = 0;
    for (const auto &f : t.factors()) {
        total += count(f.atom);
    }
    return total;
}

void QubitMap::validate() const {
    if (n == 0 || s == 0 || p == 0 || img == 0 || layers == 0) {
        throw ConfigError("qubit counts and layers must be positive");
    }
}

std::vector<Gate> sim14_layer(std::span<const Qubit> qubits,
                              std::span<const Angle> params,
                              std::size_t layers) {
    const std::size_t k = qubits.size();
    if (k == 0 || params.size() != sim14_param_count(k, layers)) {
        throw ArityError(fmt::format(
            "Sim14 over {} qubits x {} layers needs {} parameters, got {}", k,
            layers, sim14_param_count(k, layers), params.size()));
    }
    std::vector<Gate> gates;
    gates.reserve(params.size());
    std::size_t next = 0;
    auto ring_gate = [&](std::size_t control, std::size_t target) {
        if (k == 1) {
            gates.push_back(Gate::rx(qubits[0], params[next++]));
        } else {
            gates.push_back(
                Gate::crx(qubits[control], qubits[target], params[next++]));
        }
    };
    for (std::size_t layer = 0; layer < layers; ++layer) {
        for (std::size_t i = 0; i < k; ++i) {
            gates.push_back(Gate::ry(qubits[i], params[next++]));
        }
        for (std::size_t i = k; i-- > 0;) {
            ring_gate(i, (i + k - 1) % k);
        }
        for (std::size_t i = 0; i < k; ++i) {
            gates.push_back(Gate::ry(qubits[i], params[next++]));
        }
        for (std::size_t i = 0; i < k; ++i) {
            ring_gate(i, (i + 1) % k);
        }
    }
    return gates;
}

Circuit compile(const Diagram &d, const QubitMap &qmap, ParamStore &store,
                const FeatureTable *features) {
    qmap.validate();
    return Compiler(d, qmap, store, features).run();
}

std::size_t parameter_count(ModelKind model, std::string_view sentence,
                            const Lexicon &lexicon, const QubitMap &qmap) {
    constexpr std::string_view kProbe = "__parameter_count_probe__";
    const auto parse = parse_sentence(sentence, lexicon);
    const auto d = attach_comparison(build_diagram(model, parse), kProbe);
    FeatureTable probe(qmap.image_feature_dim());
    probe.insert(std::string(kProbe),
                 std::vector<double>(qmap.image_feature_dim(), 0.0));
    ParamStore store;
    return compile(d, qmap, store, &probe).slots().size();
}

} // namespace multiq
