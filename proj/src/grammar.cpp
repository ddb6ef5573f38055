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
#include "multiq/grammar.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include <fmt/format.h>

#include "multiq/errors.hpp"

namespace multiq {

namespace {

constexpr std::array<std::pair<Category, std::string_view>, 8> kCategoryNames{{
    {Category::Noun, "NOUN"},
    {Category::TransitiveVerb, "TRANSITIVE_VERB"},
    {Category::IntransitiveVerb, "INTRANSITIVE_VERB"},
    {Category::Determiner, "DETERMINER"},
    {Category::Adjective, "ADJECTIVE"},
    {Category::Preposition, "PREPOSITION"},
    {Category::Possessive, "POSSESSIVE"},
    {Category::Auxiliary, "AUXILIARY"},
}};

std::string_view trim(std::string_view s) {
    const auto *ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

bool is_verb(Category c) {
    return c == Category::TransitiveVerb || c == Category::IntransitiveVerb;
}

bool is_sentence_atom(const TypeFactor &f) {
    return f.atom == AtomicType::S && f.adjoint == 0;
}

// Interval table over the flattened factor sequence. partner[i][j] is the
// smallest m in (i, j) such that [i, j) reduces to the unit with i linked
// to m, or npos when [i, j) does not reduce.
class ReductionTable {
  public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    explicit ReductionTable(std::span<const TypeFactor> f)
        : n_(f.size()), partner_((n_ + 1) * (n_ + 1), npos),
          ok_((n_ + 1) * (n_ + 1), false) {
        for (std::size_t i = 0; i <= n_; ++i) {
            ok_[index(i, i)] = true;
        }
        for (std::size_t len = 2; len <= n_; len += 2) {
            for (std::size_t i = 0; i + len <= n_; ++i) {
                const std::size_t j = i + len;
                for (std::size_t m = i + 1; m < j; m += 2) {
                    if (cancels(f[i], f[m]) && ok_[index(i + 1, m)] &&
                        ok_[index(m + 1, j)]) {
                        ok_[index(i, j)] = true;
                        partner_[index(i, j)] = m;
                        break;
                    }
                }
            }
        }
    }

    [[nodiscard]] bool reducible(std::size_t i, std::size_t j) const {
        return ok_[index(i, j)];
    }

    void links(std::size_t i, std::size_t j, std::vector<CupLink> &out) const {
        while (i < j) {
            const std::size_t m = partner_[index(i, j)];
            out.push_back({i, m});
            links(i + 1, m, out);
            i = m + 1;
        }
    }

  private:
    [[nodiscard]] std::size_t index(std::size_t i, std::size_t j) const {
        return i * (n_ + 1) + j;
    }

    std::size_t n_;
    std::vector<std::size_t> partner_;
    std::vector<bool> ok_;
};

} // namespace

std::string_view to_string(AtomicType t) {
    switch (t) {
    case AtomicType::N:
        return "n";
    case AtomicType::S:
        return "s";
    case AtomicType::P:
        return "p";
    case AtomicType::IMG:
        return "img";
    }
    return "?";
}

PregroupType PregroupType::operator*(const PregroupType &rhs) const {
    std::vector<TypeFactor> out = factors_;
    out.insert(out.end(), rhs.factors_.begin(), rhs.factors_.end());
    return PregroupType(std::move(out));
}

std::string PregroupType::to_string() const {
    if (factors_.empty()) {
        return "1";
    }
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i > 0) {
            out += " @ ";
        }
        out += multiq::to_string(factors_[i].atom);
        const int z = factors_[i].adjoint;
        const char *suffix = z < 0 ? ".l" : ".r";
        for (int k = 0; k < std::abs(z); ++k) {
            out += suffix;
        }
    }
    return out;
}

std::string_view to_string(Category c) {
    for (const auto &[cat, name] : kCategoryNames) {
        if (cat == c) {
            return name;
        }
    }
    return "?";
}

std::optional<Category> parse_category(std::string_view name) {
    for (const auto &[cat, cat_name] : kCategoryNames) {
        if (cat_name == name) {
            return cat;
        }
    }
    return std::nullopt;
}

PregroupType type_of(Category c) {
    using enum AtomicType;
    switch (c) {
    case Category::Noun:
        return {{N, 0}};
    case Category::TransitiveVerb:
        return {{N, 1}, {S, 0}, {N, -1}};
    case Category::IntransitiveVerb:
        return {{N, 1}, {S, 0}};
    case Category::Determiner:
    case Category::Adjective:
        return {{N, 0}, {N, -1}};
    case Category::Preposition:
        return {{S, 1}, {S, 0}, {N, -1}};
    case Category::Possessive:
        return {{N, 1}, {N, 0}, {N, -1}};
    case Category::Auxiliary:
        return {};
    }
    return {};
}

Lexicon Lexicon::parse(std::istream &in) {
    Lexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) {
            continue;
        }
        const auto tab = view.find('\t');
        if (tab == std::string_view::npos) {
            throw SchemaError(line_no, "expected word<TAB>category");
        }
        const auto word = trim(view.substr(0, tab));
        const auto cat_name = trim(view.substr(tab + 1));
        const auto cat = parse_category(cat_name);
        if (!cat || word.empty()) {
            throw SchemaError(line_no, fmt::format("bad lexicon entry '{}'",
                                                   std::string(view)));
        }
        lex.add(std::string(word), *cat);
    }
    return lex;
}

Lexicon Lexicon::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot open lexicon {}", path.string()));
    }
    return parse(in);
}

void Lexicon::add(std::string word, Category category) {
    std::string key = word;
    entries_.insert_or_assign(std::move(key),
                              LexiconEntry{std::move(word), category,
                                           type_of(category)});
}

const LexiconEntry *Lexicon::find(std::string_view word) const {
    const auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> tokenize(std::string_view sentence) {
    // Normalize the typographic apostrophe first.
    std::string text;
    text.reserve(sentence.size());
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (sentence.substr(i, 3) == "\xE2\x80\x99") {
            text += '\'';
            i += 2;
        } else {
            text += static_cast<char>(
                std::tolower(static_cast<unsigned char>(sentence[i])));
        }
    }

    std::vector<std::string> tokens;
    std::istringstream words(text);
    std::string raw;
    while (words >> raw) {
        std::string word;
        for (const char ch : raw) {
            const auto u = static_cast<unsigned char>(ch);
            if (std::isalnum(u) || ch == '\'' || ch == '-' || ch == '_') {
                word += ch;
            }
        }
        while (!word.empty() && (word.front() == '\'' || word.front() == '-')) {
            word.erase(word.begin());
        }
        while (!word.empty() && (word.back() == '-')) {
            word.pop_back();
        }
        if (word.size() > 2 && word.ends_with("'s")) {
            tokens.push_back(word.substr(0, word.size() - 2));
            tokens.emplace_back("'s");
            continue;
        }
        while (!word.empty() && word.back() == '\'') {
            word.pop_back();
        }
        if (!word.empty()) {
            tokens.push_back(std::move(word));
        }
    }
    return tokens;
}

Reduction reduce(std::span<const PregroupType> types) {
    std::vector<std::pair<TypeFactor, std::size_t>> stack;
    Reduction out;
    std::size_t pos = 0;
    for (const auto &t : types) {
        for (const auto &f : t.factors()) {
            if (!stack.empty() && cancels(stack.back().first, f)) {
                out.links.push_back({stack.back().second, pos});
                stack.pop_back();
            } else {
                stack.emplace_back(f, pos);
            }
            ++pos;
        }
    }
    std::vector<TypeFactor> rest;
    rest.reserve(stack.size());
    for (const auto &[f, idx] : stack) {
        rest.push_back(f);
    }
    out.result = PregroupType(std::move(rest));
    return out;
}

std::size_t Parse::factor_offset(std::size_t token) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < token; ++i) {
        off += types.at(i).size();
    }
    return off;
}

std::size_t Parse::factor_count() const { return factor_offset(types.size()); }

std::pair<std::size_t, std::size_t> Parse::locate(std::size_t factor) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < types.size(); ++i) {
        if (factor < off + types[i].size()) {
            return {i, factor - off};
        }
        off += types[i].size();
    }
    throw IndexError(fmt::format("factor {} out of range", factor));
}

Parse parse_sentence(std::string_view sentence, const Lexicon &lexicon) {
    const auto raw = tokenize(sentence);
    if (raw.empty()) {
        throw NoReduction("empty sentence");
    }

    Parse parse;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto *entry = lexicon.find(raw[i]);
        if (entry == nullptr) {
            throw UnknownToken(raw[i]);
        }
        if (entry->category != Category::Auxiliary) {
            parse.tokens.push_back(raw[i]);
            parse.categories.push_back(entry->category);
            parse.types.push_back(entry->type);
            continue;
        }
        // Auxiliary absorption: "is sitting" -> is_sitting.
        if (i + 1 == raw.size()) {
            throw NoReduction(fmt::format("dangling auxiliary '{}'", raw[i]));
        }
        const std::string fused = raw[i] + "_" + raw[i + 1];
        const auto *verb = lexicon.find(fused);
        if (verb == nullptr) {
            verb = lexicon.find(raw[i + 1]);
            if (verb == nullptr) {
                throw UnknownToken(raw[i + 1]);
            }
        }
        if (!is_verb(verb->category)) {
            throw NoReduction(fmt::format(
                "auxiliary '{}' is not followed by a verb", raw[i]));
        }
        parse.tokens.push_back(fused);
        parse.categories.push_back(verb->category);
        parse.types.push_back(type_of(verb->category));
        ++i;
    }

    std::vector<TypeFactor> flat;
    for (const auto &t : parse.types) {
        flat.insert(flat.end(), t.factors().begin(), t.factors().end());
    }
    const ReductionTable table(flat);
    for (std::size_t k = 0; k < flat.size(); ++k) {
        if (is_sentence_atom(flat[k]) && table.reducible(0, k) &&
            table.reducible(k + 1, flat.size())) {
            table.links(0, k, parse.reductions);
            table.links(k + 1, flat.size(), parse.reductions);
            std::sort(parse.reductions.begin(), parse.reductions.end());
            parse.result = types::s;
            return parse;
        }
    }
    throw NoReduction(fmt::format("type sequence does not reduce to s: {}",
                                  PregroupType(flat).to_string()));
}

bool is_planar_matching(const Parse &parse) {
    std::vector<TypeFactor> flat;
    for (const auto &t : parse.types) {
        flat.insert(flat.end(), t.factors().begin(), t.factors().end());
    }
    for (const auto &l : parse.reductions) {
        if (l.left >= l.right || l.right >= flat.size() ||
            !cancels(flat[l.left], flat[l.right])) {
            return false;
        }
    }
    for (const auto &a : parse.reductions) {
        for (const auto &b : parse.reductions) {
            // a.left < b.left < a.right < b.right is a crossing.
            if (a.left < b.left && b.left < a.right && a.right < b.right) {
                return false;
            }
        }
    }
    return true;
}

namespace {

class ClauseReader {
  public:
    explicit ClauseReader(const Parse &parse) : parse_(parse) {}

    Clause read() {
        Clause clause;
        clause.subject = noun_phrase();
        if (!at_verb()) {
            fail("expected a verb");
        }
        clause.verb = pos_;
        const bool transitive =
            parse_.categories[pos_] == Category::TransitiveVerb;
        ++pos_;
        if (transitive) {
            clause.object = noun_phrase();
        }
        if (peek() == Category::Preposition) {
            PrepositionalPhrase pp;
            pp.preposition = pos_++;
            pp.object = noun_phrase();
            clause.modifier = pp;
        }
        if (pos_ != parse_.tokens.size()) {
            fail("trailing tokens");
        }
        return clause;
    }

  private:
    std::optional<Category> peek() const {
        if (pos_ >= parse_.categories.size()) {
            return std::nullopt;
        }
        return parse_.categories[pos_];
    }

    bool at_verb() const {
        const auto c = peek();
        return c && is_verb(*c);
    }

    SimpleNounPhrase simple(bool allow_determiner) {
        SimpleNounPhrase np;
        np.span.begin = pos_;
        if (allow_determiner && peek() == Category::Determiner) {
            np.determiner = pos_++;
        }
        if (peek() == Category::Adjective) {
            np.adjective = pos_++;
        }
        if (peek() != Category::Noun) {
            fail("expected a noun");
        }
        np.noun = pos_++;
        np.span.end = pos_;
        return np;
    }

    NounPhrase noun_phrase() {
        NounPhrase np;
        np.core = simple(true);
        np.span = np.core.span;
        if (peek() == Category::Possessive) {
            np.possessive = pos_++;
            np.possessed = simple(false);
            np.span.end = pos_;
        }
        return np;
    }

    [[noreturn]] void fail(std::string_view why) const {
        throw NoReduction(fmt::format("outside the SVO fragment at token {}: {}",
                                      pos_, why));
    }

    const Parse &parse_;
    std::size_t pos_ = 0;
};

} // namespace

Clause analyze_clause(const Parse &parse) { return ClauseReader(parse).read(); }

} // namespace multiq
