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
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "multiq/dataset.hpp"
#include "multiq/grammar.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return MULTIQ_DATA_DIR; }

inline const multiq::Lexicon &lexicon() {
    static const multiq::Lexicon lex =
        multiq::Lexicon::load(data_dir() / "lexicon.tsv");
    return lex;
}

inline const std::vector<multiq::DatasetEntry> &structured() {
    static const auto entries = multiq::load_dataset(
        data_dir() / "structured.jsonl", multiq::Task::Structured, lexicon());
    return entries;
}

inline const std::vector<multiq::DatasetEntry> &unstructured() {
    static const auto entries =
        multiq::load_dataset(data_dir() / "unstructured.jsonl",
                             multiq::Task::Unstructured, lexicon());
    return entries;
}

/// Every sentence appearing in the shipped datasets.
inline std::vector<std::string> all_sentences() {
    std::vector<std::string> out;
    for (const auto &e : structured()) {
        const auto &s = std::get<multiq::StructuredEntry>(e);
        out.push_back(s.pos_sentence);
        out.push_back(s.neg_sentence);
    }
    for (const auto &e : unstructured()) {
        out.push_back(std::get<multiq::UnstructuredEntry>(e).sentence);
    }
    return out;
}

} // namespace testing
