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
 * Dataset schemas and JSON-lines loaders for the two image-text tasks.
 *
 * Unstructured lines carry {"sentence", "pos_image", "neg_image"};
 * structured lines carry {"pos_sentence", "neg_sentence", "image"}, where
 * the negative sentence is the positive one with subject and object noun
 * phrases exchanged.
 */
#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "multiq/grammar.hpp"

namespace multiq {

enum class Task : std::uint8_t { Unstructured, Structured };

[[nodiscard]] std::string_view to_string(Task t);
[[nodiscard]] std::optional<Task> parse_task(std::string_view name);

struct UnstructuredEntry {
    std::string sentence;
    std::string pos_image;
    std::string neg_image;
    friend bool operator==(const UnstructuredEntry &,
                           const UnstructuredEntry &) = default;
};

struct StructuredEntry {
    std::string pos_sentence;
    std::string neg_sentence;
    std::string image;
    friend bool operator==(const StructuredEntry &,
                           const StructuredEntry &) = default;
};

using DatasetEntry = std::variant<UnstructuredEntry, StructuredEntry>;

/// Reads JSON-lines entries. Blank lines are skipped. Every sentence must
/// parse to s and fall inside the clause fragment.
/// Throws SchemaError(line), ParseError or DuplicateEntry.
[[nodiscard]] std::vector<DatasetEntry>
parse_dataset(std::istream &in, Task task, const Lexicon &lexicon);
[[nodiscard]] std::vector<DatasetEntry>
load_dataset(const std::filesystem::path &path, Task task,
             const Lexicon &lexicon);

/// Joins tokens back into a sentence: capitalized first letter, "'s"
/// attached to the preceding token, fused auxiliaries split on '_'.
[[nodiscard]] std::string detokenize(std::span<const std::string> tokens);

/// Exchanges the subject noun phrase with the object's possessor phrase
/// (or the whole object when it has no possessive). Throws ParseError
/// when the sentence has no object, DegenerateSwap when both phrases are
/// token-wise equal.
[[nodiscard]] std::string swap_subject_object(std::string_view sentence,
                                              const Lexicon &lexicon);

/// Distinct image ids in first-seen order.
[[nodiscard]] std::vector<std::string>
image_ids(std::span<const DatasetEntry> entries);

} // namespace multiq
