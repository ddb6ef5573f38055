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
#include "multiq/param_store.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "multiq/errors.hpp"
#include "multiq/random.hpp"

namespace multiq {

SlotRange ParamStore::allocate(std::size_t count) {
    const SlotRange r{static_cast<std::uint32_t>(values_.size()),
                      static_cast<std::uint32_t>(count)};
    values_.resize(values_.size() + count, 0.0);
    return r;
}

SlotRange ParamStore::symbol(const std::string &label,
                             const PregroupType &type, std::size_t count) {
    Key key{label, type};
    if (const auto it = symbols_.find(key); it != symbols_.end()) {
        if (it->second.size != count) {
            throw ArityError(fmt::format(
                "symbol {}:{} holds {} slots, {} requested", label,
                type.to_string(), it->second.size, count));
        }
        return it->second;
    }
    const auto r = allocate(count);
    symbols_.emplace(std::move(key), r);
    return r;
}

std::optional<SlotRange> ParamStore::find(const std::string &label,
                                          const PregroupType &type) const {
    const auto it = symbols_.find(Key{label, type});
    if (it == symbols_.end()) {
        return std::nullopt;
    }
    return it->second;
}

SlotRange ParamStore::comparison(std::size_t count) {
    if (comparison_) {
        if (comparison_->size != count) {
            throw ArityError("comparison box slot count changed");
        }
        return *comparison_;
    }
    comparison_ = allocate(count);
    return *comparison_;
}

void ParamStore::initialize(std::uint64_t seed) {
    Rng rng(seed);
    for (auto &v : values_) {
        v = rng.uniform();
    }
    seed_ = seed;
}

nlohmann::json to_json(const ParamStore &store) {
    using nlohmann::json;
    json symbols = json::array();
    for (const auto &[key, range] : store.symbols()) {
        symbols.push_back({{"label", key.first},
                           {"type", key.second.to_string()},
                           {"begin", range.begin},
                           {"size", range.size}});
    }
    json out = {{"n_slots", store.size()}, {"symbols", std::move(symbols)}};
    if (const auto cmp = store.comparison_slots()) {
        out["comparison"] = {{"begin", cmp->begin}, {"size", cmp->size}};
    }
    return out;
}

} // namespace multiq
