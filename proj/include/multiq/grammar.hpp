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
 * Pregroup type algebra, the closed SVO-fragment lexicon, and a
 * deterministic parser that reduces a sentence's type sequence to `s`.
 */
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace multiq {

enum class AtomicType : std::uint8_t { N, S, P, IMG };

[[nodiscard]] std::string_view to_string(AtomicType t);

/// One factor of a pregroup type: an atom with an adjoint order.
/// -1 is the left adjoint, +1 the right adjoint, 0 the base type.
struct TypeFactor {
    AtomicType atom = AtomicType::N;
    int adjoint = 0;

    [[nodiscard]] TypeFactor left() const { return {atom, adjoint - 1}; }
    [[nodiscard]] TypeFactor right() const { return {atom, adjoint + 1}; }

    friend auto operator<=>(const TypeFactor &, const TypeFactor &) = default;
};

/// True when `lhs rhs` contracts to the unit (t.tʳ or tˡ.t).
[[nodiscard]] constexpr bool cancels(TypeFactor lhs, TypeFactor rhs) {
    return lhs.atom == rhs.atom && rhs.adjoint == lhs.adjoint + 1;
}

class PregroupType {
  public:
    PregroupType() = default;
    PregroupType(std::initializer_list<TypeFactor> factors)
        : factors_(factors) {}
    explicit PregroupType(std::vector<TypeFactor> factors)
        : factors_(std::move(factors)) {}

    static PregroupType unit() { return {}; }
    static PregroupType atom(AtomicType t) { return {TypeFactor{t, 0}}; }

    [[nodiscard]] std::span<const TypeFactor> factors() const {
        return factors_;
    }
    [[nodiscard]] std::size_t size() const { return factors_.size(); }
    [[nodiscard]] bool is_unit() const { return factors_.empty(); }
    [[nodiscard]] const TypeFactor &operator[](std::size_t i) const {
        return factors_[i];
    }

    /// Monoidal product (juxtaposition).
    [[nodiscard]] PregroupType operator*(const PregroupType &rhs) const;

    /// Rendered as e.g. `n.r @ s @ n.l`; the unit renders as `1`.
    [[nodiscard]] std::string to_string() const;

    friend auto operator<=>(const PregroupType &,
                            const PregroupType &) = default;

  private:
    std::vector<TypeFactor> factors_;
};

namespace types {
inline const PregroupType n = PregroupType::atom(AtomicType::N);
inline const PregroupType s = PregroupType::atom(AtomicType::S);
inline const PregroupType p = PregroupType::atom(AtomicType::P);
inline const PregroupType img = PregroupType::atom(AtomicType::IMG);
} // namespace types

enum class Category : std::uint8_t {
    Noun,
    TransitiveVerb,
    IntransitiveVerb,
    Determiner,
    Adjective,
    Preposition,
    Possessive,
    Auxiliary,
};

[[nodiscard]] std::string_view to_string(Category c);
[[nodiscard]] std::optional<Category> parse_category(std::string_view name);

/// The pregroup type a lexical category is assigned. Auxiliaries are
/// absorbed into the following verb and get the unit.
[[nodiscard]] PregroupType type_of(Category c);

struct LexiconEntry {
    std::string word;
    Category category;
    PregroupType type;
};

class Lexicon {
  public:
    /// Reads `word<TAB>category` lines; `#` starts a comment.
    static Lexicon parse(std::istream &in);
    static Lexicon load(const std::filesystem::path &path);

    void add(std::string word, Category category);
    [[nodiscard]] const LexiconEntry *find(std::string_view word) const;
    [[nodiscard]] std::size_t size() const { return entries_.size(); }

  private:
    std::map<std::string, LexiconEntry, std::less<>> entries_;
};

/// Lowercases, strips punctuation and splits the possessive clitic `'s`
/// into its own token.
[[nodiscard]] std::vector<std::string> tokenize(std::string_view sentence);

/// A cup between two factor positions of the flattened type sequence.
struct CupLink {
    std::size_t left = 0;
    std::size_t right = 0;
    friend auto operator<=>(const CupLink &, const CupLink &) = default;
};

struct Reduction {
    PregroupType result;
    std::vector<CupLink> links;
};

/// Greedy adjacent cancellation (a stack sweep, left to right) to the
/// irreducible remainder.
[[nodiscard]] Reduction reduce(std::span<const PregroupType> types);

struct Parse {
    std::vector<std::string> tokens;
    std::vector<Category> categories;
    std::vector<PregroupType> types;
    std::vector<CupLink> reductions;
    PregroupType result;

    /// Flattened factor index of the first factor of token `i`.
    [[nodiscard]] std::size_t factor_offset(std::size_t token) const;
    /// (token, offset within the token's type) for a flattened index.
    [[nodiscard]] std::pair<std::size_t, std::size_t>
    locate(std::size_t factor) const;
    [[nodiscard]] std::size_t factor_count() const;

    friend bool operator==(const Parse &, const Parse &) = default;
};

/// Tokenizes, fuses auxiliaries with the following verb and finds the
/// leftmost complete non-crossing reduction leaving exactly one `s`.
/// Throws UnknownToken or NoReduction.
[[nodiscard]] Parse parse_sentence(std::string_view sentence,
                                   const Lexicon &lexicon);

/// True when every link joins a type with its adjoint and no two links
/// cross.
[[nodiscard]] bool is_planar_matching(const Parse &parse);

// Phrase structure of the SVO fragment
//   NP  -> Det? Adj? N ('s Adj? N)?
//   S   -> NP V NP? (P NP)?

struct TokenSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    friend bool operator==(const TokenSpan &, const TokenSpan &) = default;
};

struct SimpleNounPhrase {
    std::optional<std::size_t> determiner;
    std::optional<std::size_t> adjective;
    std::size_t noun = 0;
    TokenSpan span;
};

struct NounPhrase {
    /// The whole phrase when there is no possessive; otherwise the
    /// possessor ("the mother" in "the mother 's hand").
    SimpleNounPhrase core;
    std::optional<std::size_t> possessive;
    /// The possessed head ("hand"); never carries a determiner.
    std::optional<SimpleNounPhrase> possessed;
    TokenSpan span;
};

struct PrepositionalPhrase {
    std::size_t preposition = 0;
    NounPhrase object;
};

struct Clause {
    NounPhrase subject;
    std::size_t verb = 0;
    std::optional<NounPhrase> object;
    std::optional<PrepositionalPhrase> modifier;
};

/// Recursive-descent analysis of a parse's category sequence.
/// Throws NoReduction when the sentence lies outside the fragment.
[[nodiscard]] Clause analyze_clause(const Parse &parse);

} // namespace multiq
