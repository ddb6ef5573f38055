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
#include "multiq/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "multiq/errors.hpp"

namespace multiq {

namespace {

constexpr std::string_view kComparisonLabel = "COMPARISON";

Box word_box(std::string label, PregroupType cod) {
    return Box{BoxKind::Word, std::move(label), {}, std::move(cod)};
}

Box merge_box(std::string label) {
    return Box{BoxKind::Merge, std::move(label), types::s * types::s,
               types::s};
}

Diagram build_cat(const Parse &parse) {
    Diagram d;
    std::vector<std::size_t> word_boxes;
    // Links grouped by the token holding their right endpoint, so a cup
    // is emitted as soon as both of its words exist.
    std::vector<std::vector<CupLink>> closing(parse.tokens.size());
    for (const auto &link : parse.reductions) {
        closing[parse.locate(link.right).first].push_back(link);
    }
    for (std::size_t t = 0; t < parse.tokens.size(); ++t) {
        word_boxes.push_back(d.add_box(word_box(parse.tokens[t], parse.types[t])));
        auto &links = closing[t];
        std::sort(links.begin(), links.end(),
                  [](const CupLink &a, const CupLink &b) {
                      return a.right < b.right;
                  });
        for (const auto &link : links) {
            const auto [lt, lo] = parse.locate(link.left);
            const auto [rt, ro] = parse.locate(link.right);
            const TypeFactor lf = parse.types[lt][lo];
            const TypeFactor rf = parse.types[rt][ro];
            const auto cup =
                d.add_box(Box{BoxKind::Cup, "CUP", PregroupType{lf, rf}, {}});
            d.connect({word_boxes[lt], lo}, {cup, 0});
            d.connect({word_boxes[rt], ro}, {cup, 1});
        }
    }
    return d;
}

Diagram build_bow(const Parse &parse) {
    Diagram d;
    std::vector<std::string> tokens = parse.tokens;
    std::sort(tokens.begin(), tokens.end());
    std::vector<std::size_t> words;
    for (auto &t : tokens) {
        words.push_back(d.add_box(word_box(std::move(t), types::s)));
    }
    if (words.size() >= 2) {
        PregroupType dom;
        for (std::size_t i = 0; i < words.size(); ++i) {
            dom = dom * types::s;
        }
        const auto spider =
            d.add_box(Box{BoxKind::Spider, "SPIDER", dom, types::s});
        for (std::size_t i = 0; i < words.size(); ++i) {
            d.connect({words[i], 0}, {spider, i});
        }
    }
    return d;
}

// Left-aligned chain ((w1 w2) w3)...; `label_for(i)` names the i-th merge.
template <typename LabelFn>
Diagram build_chain(const Parse &parse, LabelFn label_for) {
    Diagram d;
    Port state{d.add_box(word_box(parse.tokens.front(), types::s)), 0};
    for (std::size_t i = 1; i < parse.tokens.size(); ++i) {
        const Port next{d.add_box(word_box(parse.tokens[i], types::s)), 0};
        const auto m = d.add_box(merge_box(label_for(i)));
        d.connect(state, {m, 0});
        d.connect(next, {m, 1});
        state = {m, 0};
    }
    return d;
}

class CfgBuilder {
  public:
    explicit CfgBuilder(const Parse &parse) : parse_(parse) {}

    Diagram build() {
        namespace ml = merge_labels;
        const Clause clause = analyze_clause(parse_);
        const Port subject = noun_phrase(clause.subject);
        Port vp = word(clause.verb);
        if (clause.object) {
            vp = merge(ml::kVerbPhrase, vp, noun_phrase(*clause.object));
        }
        if (clause.modifier) {
            const Port prep = word(clause.modifier->preposition);
            const Port pp = merge(ml::kPrepPhrase, prep,
                                  noun_phrase(clause.modifier->object));
            vp = merge(ml::kModifiedVerbPhrase, vp, pp);
        }
        merge(ml::kSentence, subject, vp);
        return std::move(d_);
    }

  private:
    Port word(std::size_t token) {
        return {d_.add_box(word_box(parse_.tokens[token], types::s)), 0};
    }

    Port merge(std::string_view label, Port left, Port right) {
        const auto m = d_.add_box(merge_box(std::string(label)));
        d_.connect(left, {m, 0});
        d_.connect(right, {m, 1});
        return {m, 0};
    }

    Port simple(const SimpleNounPhrase &np) {
        std::optional<Port> det;
        if (np.determiner) {
            det = word(*np.determiner);
        }
        Port head;
        if (np.adjective) {
            const Port adj = word(*np.adjective);
            head = merge(merge_labels::kAdjective, adj, word(np.noun));
        } else {
            head = word(np.noun);
        }
        if (det) {
            head = merge(merge_labels::kDeterminer, *det, head);
        }
        return head;
    }

    Port noun_phrase(const NounPhrase &np) {
        Port core = simple(np.core);
        if (!np.possessive) {
            return core;
        }
        const Port marker = word(*np.possessive);
        const Port possessor = merge(merge_labels::kPossessor, core, marker);
        return merge(merge_labels::kPossessed, possessor,
                     simple(*np.possessed));
    }

    const Parse &parse_;
    Diagram d_;
};

std::vector<std::size_t> layers(const Diagram &d) {
    const auto order = topological_order(d);
    std::vector<std::size_t> layer(d.boxes().size(), 0);
    for (const auto b : order) {
        for (const auto &w : d.wires()) {
            if (w.to.box == b) {
                layer[b] = std::max(layer[b], layer[w.from.box] + 1);
            }
        }
    }
    return layer;
}

void check_signature(const Box &b, std::size_t index) {
    auto bad = [&](std::string_view why) {
        throw ShapeError(fmt::format("box {} ({} '{}'): {}", index,
                                     to_string(b.kind), b.label, why));
    };
    switch (b.kind) {
    case BoxKind::Word:
        if (!b.dom.is_unit() || b.cod.is_unit()) {
            bad("word boxes are states with a non-empty codomain");
        }
        break;
    case BoxKind::Cup:
        if (b.dom.size() != 2 || !cancels(b.dom[0], b.dom[1]) ||
            !b.cod.is_unit()) {
            bad("cups take t @ t.r (or t.l @ t) to the unit");
        }
        break;
    case BoxKind::Spider:
        if (b.cod.size() != 1 || b.dom.size() < 2 ||
            std::any_of(b.dom.factors().begin(), b.dom.factors().end(),
                        [&](const TypeFactor &f) { return f != b.cod[0]; })) {
            bad("spiders merge k >= 2 wires of one type into one");
        }
        break;
    case BoxKind::Merge:
        if (b.cod.size() != 1 || b.dom.size() != 2 || b.dom[0] != b.cod[0] ||
            b.dom[1] != b.cod[0]) {
            bad("merge boxes take t @ t to t");
        }
        break;
    case BoxKind::ImageState:
        if (!b.dom.is_unit() || b.cod != types::img) {
            bad("image states have codomain img");
        }
        break;
    case BoxKind::Comparison:
        if (b.dom != types::s * types::img || b.cod != types::s) {
            bad("comparison boxes map s @ img to s");
        }
        break;
    }
}

} // namespace

std::string_view to_string(BoxKind k) {
    switch (k) {
    case BoxKind::Word:
        return "WORD";
    case BoxKind::Cup:
        return "CUP";
    case BoxKind::Spider:
        return "SPIDER";
    case BoxKind::Merge:
        return "MERGE";
    case BoxKind::ImageState:
        return "IMAGE_STATE";
    case BoxKind::Comparison:
        return "COMPARISON";
    }
    return "?";
}

std::string_view to_string(ModelKind m) {
    switch (m) {
    case ModelKind::Cat:
        return "cat";
    case ModelKind::Bow:
        return "bow";
    case ModelKind::Seq:
        return "seq";
    case ModelKind::LTree:
        return "ltree";
    case ModelKind::Cfg:
        return "cfg";
    }
    return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
    for (const auto m : kAllModels) {
        if (to_string(m) == name) {
            return m;
        }
    }
    return std::nullopt;
}

std::size_t Diagram::add_box(Box box) {
    boxes_.push_back(std::move(box));
    return boxes_.size() - 1;
}

void Diagram::connect(Port from, Port to) { wires_.push_back({from, to}); }

std::vector<Port> Diagram::output_ports() const {
    std::vector<Port> used;
    used.reserve(wires_.size());
    for (const auto &w : wires_) {
        used.push_back(w.from);
    }
    std::sort(used.begin(), used.end());
    std::vector<Port> out;
    for (std::size_t b = 0; b < boxes_.size(); ++b) {
        for (std::size_t i = 0; i < boxes_[b].cod.size(); ++i) {
            const Port p{b, i};
            if (!std::binary_search(used.begin(), used.end(), p)) {
                out.push_back(p);
            }
        }
    }
    return out;
}

PregroupType Diagram::outputs() const {
    std::vector<TypeFactor> f;
    for (const auto &p : output_ports()) {
        f.push_back(boxes_[p.box].cod[p.index]);
    }
    return PregroupType(std::move(f));
}

std::size_t Diagram::count(BoxKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(boxes_.begin(), boxes_.end(),
                      [&](const Box &b) { return b.kind == kind; }));
}

Diagram build_diagram(ModelKind model, const Parse &parse) {
    if (parse.tokens.empty()) {
        throw ShapeError("cannot build a diagram for an empty parse");
    }
    switch (model) {
    case ModelKind::Cat:
        if (parse.result != types::s) {
            throw NoReduction("the categorical model needs a parse reducing to s");
        }
        return build_cat(parse);
    case ModelKind::Bow:
        return build_bow(parse);
    case ModelKind::Seq:
        return build_chain(parse, [](std::size_t) {
            return std::string(merge_labels::kStair);
        });
    case ModelKind::LTree:
        return build_chain(parse, [](std::size_t height) {
            return fmt::format("{}{}", merge_labels::kLTreePrefix, height);
        });
    case ModelKind::Cfg:
        return CfgBuilder(parse).build();
    }
    throw ShapeError("unknown model");
}

Diagram attach_comparison(const Diagram &sentence, std::string_view image_id) {
    const auto outs = sentence.output_ports();
    if (outs.size() != 1 || sentence.outputs() != types::s) {
        throw ShapeError(fmt::format(
            "comparison needs a single s output, diagram has '{}'",
            sentence.outputs().to_string()));
    }
    if (sentence.count(BoxKind::ImageState) != 0) {
        throw ShapeError("diagram already carries an image");
    }
    Diagram d = sentence;
    const auto image = d.add_box(
        Box{BoxKind::ImageState, std::string(image_id), {}, types::img});
    const auto cmp =
        d.add_box(Box{BoxKind::Comparison, std::string(kComparisonLabel),
                      types::s * types::img, types::s});
    d.connect(outs.front(), {cmp, 0});
    d.connect({image, 0}, {cmp, 1});
    return d;
}

std::vector<std::size_t> topological_order(const Diagram &d) {
    const std::size_t n = d.boxes().size();
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> succ(n);
    for (const auto &w : d.wires()) {
        if (w.from.box >= n || w.to.box >= n) {
            throw ShapeError("wire references a missing box");
        }
        succ[w.from.box].push_back(w.to.box);
        ++indegree[w.to.box];
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>,
                        std::greater<>>
        ready;
    for (std::size_t b = 0; b < n; ++b) {
        if (indegree[b] == 0) {
            ready.push(b);
        }
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        const auto b = ready.top();
        ready.pop();
        order.push_back(b);
        for (const auto s : succ[b]) {
            if (--indegree[s] == 0) {
                ready.push(s);
            }
        }
    }
    if (order.size() != n) {
        throw ShapeError("diagram contains a cycle");
    }
    return order;
}

Diagram canonical_form(const Diagram &d) {
    const auto layer = layers(d);
    std::vector<std::size_t> perm(d.boxes().size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        const auto &ba = d.boxes()[a];
        const auto &bb = d.boxes()[b];
        return std::tie(ba.kind, ba.label, layer[a]) <
               std::tie(bb.kind, bb.label, layer[b]);
    });
    std::vector<std::size_t> rank(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        rank[perm[i]] = i;
    }
    Diagram out;
    for (const auto old : perm) {
        out.add_box(d.boxes()[old]);
    }
    std::vector<Wire> wires;
    for (const auto &w : d.wires()) {
        wires.push_back({{rank[w.from.box], w.from.index},
                         {rank[w.to.box], w.to.index}});
    }
    std::sort(wires.begin(), wires.end());
    for (const auto &w : wires) {
        out.connect(w.from, w.to);
    }
    return out;
}

void validate(const Diagram &d) {
    const auto &boxes = d.boxes();
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        check_signature(boxes[i], i);
    }
    std::vector<Port> from_ports;
    std::vector<Port> to_ports;
    for (const auto &w : d.wires()) {
        if (w.from.box >= boxes.size() || w.to.box >= boxes.size() ||
            w.from.index >= boxes[w.from.box].cod.size() ||
            w.to.index >= boxes[w.to.box].dom.size()) {
            throw ShapeError("wire references a missing port");
        }
        const auto &src = boxes[w.from.box].cod[w.from.index];
        const auto &dst = boxes[w.to.box].dom[w.to.index];
        if (src != dst) {
            throw ShapeError(fmt::format(
                "wire {}:{} -> {}:{} joins mismatched types", w.from.box,
                w.from.index, w.to.box, w.to.index));
        }
        from_ports.push_back(w.from);
        to_ports.push_back(w.to);
    }
    std::sort(from_ports.begin(), from_ports.end());
    std::sort(to_ports.begin(), to_ports.end());
    if (std::adjacent_find(from_ports.begin(), from_ports.end()) !=
            from_ports.end() ||
        std::adjacent_find(to_ports.begin(), to_ports.end()) !=
            to_ports.end()) {
        throw ShapeError("a port is used more than once");
    }
    std::size_t dom_ports = 0;
    for (const auto &b : boxes) {
        dom_ports += b.dom.size();
    }
    if (to_ports.size() != dom_ports) {
        throw ShapeError("a domain port is left unconnected");
    }
    (void)topological_order(d);
}

nlohmann::json to_json(const Diagram &d) {
    using nlohmann::json;
    json boxes = json::array();
    for (std::size_t i = 0; i < d.boxes().size(); ++i) {
        const auto &b = d.boxes()[i];
        boxes.push_back({{"id", i},
                         {"kind", to_string(b.kind)},
                         {"label", b.label},
                         {"dom", b.dom.to_string()},
                         {"cod", b.cod.to_string()}});
    }
    json wires = json::array();
    for (const auto &w : d.wires()) {
        wires.push_back(
            {{"from", {w.from.box, w.from.index}},
             {"to", {w.to.box, w.to.index}},
             {"type",
              PregroupType{d.boxes()[w.from.box].cod[w.from.index]}.to_string()}});
    }
    return {{"inputs", d.inputs().to_string()},
            {"outputs", d.outputs().to_string()},
            {"boxes", std::move(boxes)},
            {"wires", std::move(wires)}};
}

} // namespace multiq
