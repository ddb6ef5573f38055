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
 * Typed string-diagram IR and the five sentence-model builders.
 *
 * A diagram is a list of boxes plus wires from a producer's codomain port
 * to a consumer's domain port. Boxes are stored in a topological order by
 * the builders; canonical_form() reorders them for structural comparison.
 */
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "multiq/grammar.hpp"

namespace multiq {

enum class BoxKind : std::uint8_t {
    Word,
    Cup,
    Spider,
    Merge,
    ImageState,
    Comparison,
};

[[nodiscard]] std::string_view to_string(BoxKind k);

struct Box {
    BoxKind kind = BoxKind::Word;
    std::string label;
    PregroupType dom;
    PregroupType cod;

    friend bool operator==(const Box &, const Box &) = default;
};

struct Port {
    std::size_t box = 0;
    std::size_t index = 0;
    friend auto operator<=>(const Port &, const Port &) = default;
};

/// `from` is a codomain port of the producer, `to` a domain port of the
/// consumer.
struct Wire {
    Port from;
    Port to;
    friend auto operator<=>(const Wire &, const Wire &) = default;
};

class Diagram {
  public:
    std::size_t add_box(Box box);
    void connect(Port from, Port to);

    [[nodiscard]] const std::vector<Box> &boxes() const { return boxes_; }
    [[nodiscard]] const std::vector<Wire> &wires() const { return wires_; }

    /// Diagrams here are closed states: the domain is always the unit.
    [[nodiscard]] PregroupType inputs() const { return {}; }
    /// Codomain ports with no outgoing wire, in (box, index) order.
    [[nodiscard]] std::vector<Port> output_ports() const;
    [[nodiscard]] PregroupType outputs() const;

    [[nodiscard]] std::size_t count(BoxKind kind) const;

    friend bool operator==(const Diagram &, const Diagram &) = default;

  private:
    std::vector<Box> boxes_;
    std::vector<Wire> wires_;
};

enum class ModelKind : std::uint8_t { Cat, Bow, Seq, LTree, Cfg };

inline constexpr ModelKind kAllModels[] = {ModelKind::Cat, ModelKind::Bow,
                                           ModelKind::Seq, ModelKind::LTree,
                                           ModelKind::Cfg};

[[nodiscard]] std::string_view to_string(ModelKind m);
[[nodiscard]] std::optional<ModelKind> parse_model_kind(std::string_view name);

/// Labels of the trainable merge boxes.
namespace merge_labels {
inline constexpr std::string_view kStair = "STAIR";
inline constexpr std::string_view kLTreePrefix = "LTREE_";
inline constexpr std::string_view kAdjective = "CFG_ADJ";
inline constexpr std::string_view kDeterminer = "CFG_DET";
inline constexpr std::string_view kPossessor = "CFG_POSS";
inline constexpr std::string_view kPossessed = "CFG_POSS_NP";
inline constexpr std::string_view kVerbPhrase = "CFG_VP";
inline constexpr std::string_view kPrepPhrase = "CFG_PP";
inline constexpr std::string_view kModifiedVerbPhrase = "CFG_VP_PP";
inline constexpr std::string_view kSentence = "CFG_S";
} // namespace merge_labels

[[nodiscard]] Diagram build_diagram(ModelKind model, const Parse &parse);

/// Appends an IMAGE_STATE and a COMPARISON box. Throws ShapeError when the
/// diagram does not end in a single `s` or already holds an image.
[[nodiscard]] Diagram attach_comparison(const Diagram &sentence,
                                        std::string_view image_id);

[[nodiscard]] Diagram canonical_form(const Diagram &d);

/// Structural check: wire endpoints exist and carry equal types, every
/// port is used at most once (domain ports exactly once), the graph is
/// acyclic, and each box kind has its required signature. Throws
/// ShapeError.
void validate(const Diagram &d);

/// Box indices in a topological order; ties go to the lower index.
[[nodiscard]] std::vector<std::size_t> topological_order(const Diagram &d);

[[nodiscard]] nlohmann::json to_json(const Diagram &d);

} // namespace multiq
