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
 * Exception hierarchy shared by every module. All errors derive from
 * multiq::Error so callers can catch one type at the orchestration layer.
 */
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace multiq {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// grammar
class UnknownToken : public Error {
  public:
    explicit UnknownToken(std::string word);
    [[nodiscard]] const std::string &word() const noexcept { return word_; }

  private:
    std::string word_;
};

class NoReduction : public Error {
  public:
    using Error::Error;
};

// diagram / ansatz
class ShapeError : public Error {
  public:
    using Error::Error;
};

class ArityError : public Error {
  public:
    using Error::Error;
};

class MissingFeatures : public Error {
  public:
    explicit MissingFeatures(std::string image_id);
    [[nodiscard]] const std::string &image_id() const noexcept {
        return image_id_;
    }

  private:
    std::string image_id_;
};

// simulator
class UnboundSlot : public Error {
  public:
    explicit UnboundSlot(std::size_t slot);
    [[nodiscard]] std::size_t slot() const noexcept { return slot_; }

  private:
    std::size_t slot_;
};

class QubitCapExceeded : public Error {
  public:
    using Error::Error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

// data
class SchemaError : public Error {
  public:
    SchemaError(std::size_t line, const std::string &what);
    /// 1-based line (or row) number in the offending file.
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class ParseError : public Error {
  public:
    ParseError(std::string sentence, const std::string &why);
    [[nodiscard]] const std::string &sentence() const noexcept {
        return sentence_;
    }

  private:
    std::string sentence_;
};

class DuplicateEntry : public Error {
  public:
    using Error::Error;
};

class DegenerateSwap : public Error {
  public:
    using Error::Error;
};

class DimMismatch : public Error {
  public:
    DimMismatch(std::size_t row, std::size_t expected, std::size_t got);
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

  private:
    std::size_t row_;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace multiq
