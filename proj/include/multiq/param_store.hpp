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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "multiq/circuit.hpp"
#include "multiq/grammar.hpp"

namespace multiq {

struct SlotRange {
    std::uint32_t begin = 0;
    std::uint32_t size = 0;

    [[nodiscard]] SlotId at(std::size_t i) const {
        return SlotId{begin + static_cast<std::uint32_t>(i)};
    }
    friend bool operator==(const SlotRange &, const SlotRange &) = default;
};

/// Trainable parameter vector plus the symbol table mapping
/// (label, type) to slot ranges. Word boxes and merge boxes are keyed by
/// their label and type; the comparison box has one range shared by
/// every circuit.
class ParamStore {
  public:
    using Key = std::pair<std::string, PregroupType>;

    /// Returns the range bound to `key`, allocating `count` slots on first
    /// use. Throws ArityError when an existing range has another size.
    SlotRange symbol(const std::string &label, const PregroupType &type,
                     std::size_t count);
    [[nodiscard]] std::optional<SlotRange>
    find(const std::string &label, const PregroupType &type) const;

    SlotRange comparison(std::size_t count);
    [[nodiscard]] std::optional<SlotRange> comparison_slots() const {
        return comparison_;
    }

    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

    /// Draws every slot uniformly from [0, 1) turns.
    void initialize(std::uint64_t seed);
    [[nodiscard]] std::optional<std::uint64_t> seed() const { return seed_; }

    [[nodiscard]] const std::map<Key, SlotRange> &symbols() const {
        return symbols_;
    }

  private:
    SlotRange allocate(std::size_t count);

    std::vector<double> values_;
    std::map<Key, SlotRange> symbols_;
    std::optional<SlotRange> comparison_;
    std::optional<std::uint64_t> seed_;
};

[[nodiscard]] nlohmann::json to_json(const ParamStore &store);

} // namespace multiq
