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
#include "multiq/errors.hpp"

#include <fmt/format.h>

#include <utility>

namespace multiq {

UnknownToken::UnknownToken(std::string word)
    : Error(fmt::format("unknown token '{}'", word)), word_(std::move(word)) {}

MissingFeatures::MissingFeatures(std::string image_id)
    : Error(fmt::format("no feature vector bound for image '{}'", image_id)),
      image_id_(std::move(image_id)) {}

UnboundSlot::UnboundSlot(std::size_t slot)
    : Error(fmt::format("parameter slot {} has no binding", slot)),
      slot_(slot) {}

SchemaError::SchemaError(std::size_t line, const std::string &what)
    : Error(fmt::format("line {}: {}", line, what)), line_(line) {}

ParseError::ParseError(std::string sentence, const std::string &why)
    : Error(fmt::format("cannot parse \"{}\": {}", sentence, why)),
      sentence_(std::move(sentence)) {}

DimMismatch::DimMismatch(std::size_t row, std::size_t expected,
                         std::size_t got)
    : Error(fmt::format("row {}: expected {} feature values, got {}", row,
                        expected, got)),
      row_(row) {}

} // namespace multiq
