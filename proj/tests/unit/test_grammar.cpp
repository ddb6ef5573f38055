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
#include <optional>
#include <random>
#include <sstream>

#include <catch_amalgamated.hpp>

#include "multiq/errors.hpp"
#include "multiq/grammar.hpp"
#include "unit/support.hpp"

using namespace multiq;

namespace {

const TypeFactor n0{AtomicType::N, 0};
const TypeFactor s0{AtomicType::S, 0};

std::vector<TypeFactor> flatten(const Parse &p) {
    std::vector<TypeFactor> out;
    for (const auto &t : p.types) {
        out.insert(out.end(), t.factors().begin(), t.factors().end());
    }
    return out;
}

/// Counts non-crossing matchings of `f` leaving exactly one uncovered,
/// unmatched `s` (the output wire must not sit under a cup).
std::size_t count_reductions(const std::vector<TypeFactor> &f) {
    // ways(i, j): perfect non-crossing matchings of f[i, j).
    const std::size_t n = f.size();
    std::vector<std::vector<std::size_t>> ways(n + 1,
                                               std::vector<std::size_t>(n + 1));
    for (std::size_t i = 0; i <= n; ++i) {
        ways[i][i] = 1;
    }
    for (std::size_t len = 2; len <= n; len += 2) {
        for (std::size_t i = 0; i + len <= n; ++i) {
            const std::size_t j = i + len;
            std::size_t total = 0;
            for (std::size_t m = i + 1; m < j; m += 2) {
                if (cancels(f[i], f[m])) {
                    total += ways[i + 1][m] * ways[m + 1][j];
                }
            }
            ways[i][j] = total;
        }
    }
    std::size_t total = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (f[k] == s0) {
            total += ways[0][k] * ways[k + 1][n];
        }
    }
    return total;
}

/// Independent check: links pair adjoint factors, are pairwise
/// non-crossing, cover all but one `s`, and leave it uncovered.
bool valid_links(const std::vector<TypeFactor> &f,
                 const std::vector<CupLink> &links) {
    std::vector<int> used(f.size(), 0);
    for (const auto &l : links) {
        if (l.left >= l.right || l.right >= f.size()) {
            return false;
        }
        if (!cancels(f[l.left], f[l.right])) {
            return false;
        }
        ++used[l.left];
        ++used[l.right];
    }
    for (const auto &a : links) {
        for (const auto &b : links) {
            if (a.left < b.left && b.left < a.right && a.right < b.right) {
                return false;
            }
        }
    }
    std::optional<std::size_t> free;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (used[i] > 1) {
            return false;
        }
        if (used[i] == 0) {
            if (free || !(f[i] == s0)) {
                return false;
            }
            free = i;
        }
    }
    if (!free) {
        return false;
    }
    for (const auto &l : links) {
        if (l.left < *free && *free < l.right) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("Adjoint cancellation", "[grammar]") {
    REQUIRE(cancels(n0, n0.right()));
    REQUIRE(cancels(n0.left(), n0));
    REQUIRE_FALSE(cancels(n0.right(), n0));
    REQUIRE_FALSE(cancels(n0, n0.left()));
    REQUIRE_FALSE(cancels(n0, TypeFactor{AtomicType::S, 1}));
    REQUIRE(n0.left().right() == n0);
}

TEST_CASE("Category types render", "[grammar]") {
    CHECK(type_of(Category::Noun).to_string() == "n");
    CHECK(type_of(Category::TransitiveVerb).to_string() == "n.r @ s @ n.l");
    CHECK(type_of(Category::IntransitiveVerb).to_string() == "n.r @ s");
    CHECK(type_of(Category::Determiner).to_string() == "n @ n.l");
    CHECK(type_of(Category::Adjective).to_string() == "n @ n.l");
    CHECK(type_of(Category::Preposition).to_string() == "s.r @ s @ n.l");
    CHECK(type_of(Category::Possessive).to_string() == "n.r @ n @ n.l");
    CHECK(type_of(Category::Auxiliary).is_unit());
    CHECK(PregroupType::unit().to_string() == "1");
}

TEST_CASE("Category names round-trip", "[grammar]") {
    for (const auto c :
         {Category::Noun, Category::TransitiveVerb, Category::IntransitiveVerb,
          Category::Determiner, Category::Adjective, Category::Preposition,
          Category::Possessive, Category::Auxiliary}) {
        REQUIRE(parse_category(to_string(c)) == c);
    }
    REQUIRE_FALSE(parse_category("ADVERB"));
}

TEST_CASE("Lexicon parsing", "[grammar]") {
    std::istringstream good("# comment\ndog\tNOUN\n\nchase\tTRANSITIVE_VERB\n");
    const auto lex = Lexicon::parse(good);
    REQUIRE(lex.size() == 2);
    REQUIRE(lex.find("dog")->category == Category::Noun);
    REQUIRE(lex.find("cat") == nullptr);

    std::istringstream bad("dog\tNOUN\ncat\tANIMAL\n");
    try {
        (void)Lexicon::parse(bad);
        FAIL("expected SchemaError");
    } catch (const SchemaError &e) {
        REQUIRE(e.line() == 2);
    }
}

TEST_CASE("Tokenization", "[grammar]") {
    CHECK(tokenize("Dogs chase cats.") ==
          std::vector<std::string>{"dogs", "chase", "cats"});
    CHECK(tokenize("A child holds the mother's hand") ==
          std::vector<std::string>{"a", "child", "holds", "the", "mother",
                                   "'s", "hand"});
    CHECK(tokenize("the mother\xE2\x80\x99s hand") ==
          std::vector<std::string>{"the", "mother", "'s", "hand"});
}

TEST_CASE("Dogs chase cats reduces to s with two cups", "[grammar]") {
    const auto p = parse_sentence("Dogs chase cats", testing::lexicon());
    REQUIRE(p.result == types::s);
    REQUIRE(p.reductions.size() == 2);
    REQUIRE(p.reductions[0] == CupLink{0, 1});
    REQUIRE(p.reductions[1] == CupLink{3, 4});
    REQUIRE(is_planar_matching(p));
    REQUIRE(count_reductions(flatten(p)) == 1);
}

TEST_CASE("Greedy reduction of the SVO type sequence", "[grammar]") {
    const std::vector<PregroupType> seq{
        types::n, type_of(Category::TransitiveVerb), types::n};
    const auto r = reduce(seq);
    REQUIRE(r.result == types::s);
    REQUIRE(r.links.size() == 2);

    const std::vector<PregroupType> bad{types::n, types::n};
    REQUIRE(reduce(bad).result.size() == 2);
}

TEST_CASE("Possessive objects parse", "[grammar]") {
    const auto p =
        parse_sentence("A child holds the mother's hand", testing::lexicon());
    REQUIRE(p.result == types::s);
    REQUIRE(p.tokens.size() == 7);
    REQUIRE(p.categories[5] == Category::Possessive);
    REQUIRE(valid_links(flatten(p), p.reductions));
}

TEST_CASE("Auxiliaries fuse with the following verb", "[grammar]") {
    const auto p =
        parse_sentence("A dog is sitting on the road", testing::lexicon());
    REQUIRE(p.result == types::s);
    REQUIRE(std::find(p.tokens.begin(), p.tokens.end(), "is_sitting") !=
            p.tokens.end());
    REQUIRE(valid_links(flatten(p), p.reductions));
}

TEST_CASE("Parse errors", "[grammar]") {
    REQUIRE_THROWS_AS(parse_sentence("Dogs chase zebras", testing::lexicon()),
                      UnknownToken);
    REQUIRE_THROWS_AS(parse_sentence("Dogs cats", testing::lexicon()),
                      NoReduction);
    REQUIRE_THROWS_AS(parse_sentence("chase", testing::lexicon()),
                      NoReduction);
    REQUIRE_THROWS_AS(parse_sentence("", testing::lexicon()), NoReduction);
}

TEST_CASE("Every shipped sentence parses to a valid planar reduction",
          "[grammar]") {
    for (const auto &sentence : testing::all_sentences()) {
        INFO(sentence);
        const auto p = parse_sentence(sentence, testing::lexicon());
        REQUIRE(p.result == types::s);
        REQUIRE(is_planar_matching(p));
        REQUIRE(valid_links(flatten(p), p.reductions));
        REQUIRE(count_reductions(flatten(p)) >= 1);
        REQUIRE_NOTHROW(analyze_clause(p));
    }
}

TEST_CASE("Parser agrees with brute-force enumeration on random sequences",
          "[grammar]") {
    // Word sequences drawn from a small lexicon; grammatical or not.
    Lexicon lex;
    lex.add("dog", Category::Noun);
    lex.add("chases", Category::TransitiveVerb);
    lex.add("sleeps", Category::IntransitiveVerb);
    lex.add("the", Category::Determiner);
    lex.add("big", Category::Adjective);
    lex.add("on", Category::Preposition);
    lex.add("'s", Category::Possessive);
    const std::vector<std::string> words{"dog",  "chases", "sleeps", "the",
                                         "big",  "on",     "'s"};
    std::mt19937 gen(11);
    std::size_t parsed = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        const std::size_t len = 1 + gen() % 7;
        std::string sentence;
        std::vector<TypeFactor> flat;
        bool host = false;
        for (std::size_t i = 0; i < len; ++i) {
            // A clitic needs a host word to its left.
            const auto &w = words[gen() % (host ? words.size() : words.size() - 1)];
            host = w != "'s";
            sentence += (w == "'s" ? "" : " ") + w;
            const auto t = lex.find(w)->type;
            flat.insert(flat.end(), t.factors().begin(), t.factors().end());
        }
        INFO(sentence);
        const std::size_t expected = count_reductions(flat);
        try {
            const auto p = parse_sentence(sentence, lex);
            REQUIRE(expected > 0);
            REQUIRE(valid_links(flatten(p), p.reductions));
            ++parsed;
        } catch (const NoReduction &) {
            REQUIRE(expected == 0);
        }
    }
    REQUIRE(parsed > 20);
}

TEST_CASE("Clause analysis", "[grammar]") {
    const auto p =
        parse_sentence("A child holds the mother's hand", testing::lexicon());
    const auto c = analyze_clause(p);
    REQUIRE(c.subject.core.span == TokenSpan{0, 2});
    REQUIRE(c.verb == 2);
    REQUIRE(c.object);
    REQUIRE(c.object->core.span == TokenSpan{3, 5});
    REQUIRE(c.object->possessive == 5u);
    REQUIRE(c.object->possessed->noun == 6u);
    REQUIRE_FALSE(c.modifier);

    const auto q =
        analyze_clause(parse_sentence("A dog is sitting on the road",
                                      testing::lexicon()));
    REQUIRE_FALSE(q.object);
    REQUIRE(q.modifier);
    REQUIRE(q.modifier->object.core.span == TokenSpan{4, 6});
}
