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
#include "multiq/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "multiq/errors.hpp"

namespace multiq {

namespace {

std::string field(const nlohmann::json &obj, const char *name,
                  std::size_t line) {
    const auto it = obj.find(name);
    if (it == obj.end()) {
        throw SchemaError(line, fmt::format("missing field '{}'", name));
    }
    if (!it->is_string() || it->get_ref<const std::string &>().empty()) {
        throw SchemaError(line,
                          fmt::format("field '{}' must be a non-empty string",
                                      name));
    }
    return it->get<std::string>();
}

/// Parses and analyzes, rethrowing grammar failures as ParseError.
std::pair<Parse, Clause> analyze(std::string_view sentence,
                                 const Lexicon &lexicon) {
    try {
        auto parse = parse_sentence(sentence, lexicon);
        auto clause = analyze_clause(parse);
        return {std::move(parse), std::move(clause)};
    } catch (const UnknownToken &e) {
        throw ParseError(std::string(sentence), e.what());
    } catch (const NoReduction &e) {
        throw ParseError(std::string(sentence), e.what());
    }
}

std::vector<std::string> slice(const std::vector<std::string> &tokens,
                               TokenSpan span) {
    return {tokens.begin() + static_cast<std::ptrdiff_t>(span.begin),
            tokens.begin() + static_cast<std::ptrdiff_t>(span.end)};
}

} // namespace

std::string_view to_string(Task t) {
    return t == Task::Unstructured ? "unstructured" : "structured";
}

std::optional<Task> parse_task(std::string_view name) {
    if (name == "unstructured") {
        return Task::Unstructured;
    }
    if (name == "structured") {
        return Task::Structured;
    }
    return std::nullopt;
}

std::string detokenize(std::span<const std::string> tokens) {
    std::string out;
    for (const auto &tok : tokens) {
        if (!out.empty() && tok != "'s") {
            out += ' ';
        }
        for (const char ch : tok) {
            out += ch == '_' ? ' ' : ch;
        }
    }
    if (!out.empty()) {
        out[0] = static_cast<char>(
            std::toupper(static_cast<unsigned char>(out[0])));
    }
    return out;
}

std::string swap_subject_object(std::string_view sentence,
                                const Lexicon &lexicon) {
    const auto [parse, clause] = analyze(sentence, lexicon);
    if (!clause.object) {
        throw ParseError(std::string(sentence), "sentence has no object");
    }
    const TokenSpan subj = clause.subject.core.span;
    const TokenSpan obj = clause.object->core.span;
    const auto subj_tokens = slice(parse.tokens, subj);
    const auto obj_tokens = slice(parse.tokens, obj);
    if (subj_tokens == obj_tokens) {
        throw DegenerateSwap(fmt::format(
            "subject and object of '{}' are identical", sentence));
    }
    std::vector<std::string> out(parse.tokens.begin(),
                                 parse.tokens.begin() +
                                     static_cast<std::ptrdiff_t>(subj.begin));
    out.insert(out.end(), obj_tokens.begin(), obj_tokens.end());
    out.insert(out.end(),
               parse.tokens.begin() + static_cast<std::ptrdiff_t>(subj.end),
               parse.tokens.begin() + static_cast<std::ptrdiff_t>(obj.begin));
    out.insert(out.end(), subj_tokens.begin(), subj_tokens.end());
    out.insert(out.end(),
               parse.tokens.begin() + static_cast<std::ptrdiff_t>(obj.end),
               parse.tokens.end());
    return detokenize(out);
}

std::vector<DatasetEntry> parse_dataset(std::istream &in, Task task,
                                        const Lexicon &lexicon) {
    std::vector<DatasetEntry> entries;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (std::all_of(text.begin(), text.end(), [](unsigned char c) {
                return std::isspace(c) != 0;
            })) {
            continue;
        }
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error &e) {
            throw SchemaError(line, e.what());
        }
        if (!obj.is_object()) {
            throw SchemaError(line, "entry must be a JSON object");
        }
        if (task == Task::Unstructured) {
            UnstructuredEntry e{field(obj, "sentence", line),
                                field(obj, "pos_image", line),
                                field(obj, "neg_image", line)};
            if (e.pos_image == e.neg_image) {
                throw SchemaError(line, "pos_image equals neg_image");
            }
            (void)analyze(e.sentence, lexicon);
            if (!seen.emplace(e.sentence, e.pos_image, e.neg_image).second) {
                throw DuplicateEntry(
                    fmt::format("line {}: duplicate entry", line));
            }
            entries.emplace_back(std::move(e));
        } else {
            StructuredEntry e{field(obj, "pos_sentence", line),
                              field(obj, "neg_sentence", line),
                              field(obj, "image", line)};
            (void)analyze(e.neg_sentence, lexicon);
            const auto expected = swap_subject_object(e.pos_sentence, lexicon);
            if (tokenize(expected) != tokenize(e.neg_sentence)) {
                throw SchemaError(
                    line, fmt::format("neg_sentence '{}' is not the subject/"
                                      "object swap of '{}' (expected '{}')",
                                      e.neg_sentence, e.pos_sentence,
                                      expected));
            }
            if (!seen.emplace(e.pos_sentence, e.neg_sentence, e.image)
                     .second) {
                throw DuplicateEntry(
                    fmt::format("line {}: duplicate entry", line));
            }
            entries.emplace_back(std::move(e));
        }
    }
    return entries;
}

std::vector<DatasetEntry> load_dataset(const std::filesystem::path &path,
                                       Task task, const Lexicon &lexicon) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(
            fmt::format("cannot open dataset '{}'", path.string()));
    }
    return parse_dataset(in, task, lexicon);
}

std::vector<std::string> image_ids(std::span<const DatasetEntry> entries) {
    std::vector<std::string> ids;
    std::set<std::string, std::less<>> seen;
    auto add = [&](const std::string &id) {
        if (seen.insert(id).second) {
            ids.push_back(id);
        }
    };
    for (const auto &entry : entries) {
        if (const auto *u = std::get_if<UnstructuredEntry>(&entry)) {
            add(u->pos_image);
            add(u->neg_image);
        } else {
            add(std::get<StructuredEntry>(entry).image);
        }
    }
    return ids;
}

} // namespace multiq
