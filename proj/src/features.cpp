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
#include "multiq/features.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "multiq/errors.hpp"

namespace multiq {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

FeatureTable::FeatureTable(std::size_t dim)
    : dim_(dim), mean_(dim, 0.0), std_(dim, 0.0) {}

void FeatureTable::insert(std::string image_id, std::vector<double> values) {
    if (values.size() != dim_) {
        throw DimMismatch(0, dim_, values.size());
    }
    rows_.insert_or_assign(std::move(image_id), std::move(values));
}

void FeatureTable::fit_standardization() {
    std::fill(mean_.begin(), mean_.end(), 0.0);
    std::fill(std_.begin(), std_.end(), 0.0);
    if (rows_.empty()) {
        return;
    }
    const auto n = static_cast<double>(rows_.size());
    for (const auto &[id, v] : rows_) {
        for (std::size_t d = 0; d < dim_; ++d) {
            mean_[d] += v[d];
        }
    }
    for (auto &m : mean_) {
        m /= n;
    }
    for (const auto &[id, v] : rows_) {
        for (std::size_t d = 0; d < dim_; ++d) {
            const double dev = v[d] - mean_[d];
            std_[d] += dev * dev;
        }
    }
    for (auto &s : std_) {
        s = std::sqrt(s / n);
    }
}

bool FeatureTable::contains(std::string_view image_id) const {
    return rows_.find(image_id) != rows_.end();
}

const std::vector<double> &FeatureTable::raw(std::string_view image_id) const {
    const auto it = rows_.find(image_id);
    if (it == rows_.end()) {
        throw MissingFeatures(std::string(image_id));
    }
    return it->second;
}

std::vector<double> FeatureTable::angles(std::string_view image_id) const {
    const auto &v = raw(image_id);
    std::vector<double> out(dim_, 0.0);
    for (std::size_t d = 0; d < dim_; ++d) {
        if (std_[d] < kMinFeatureStd) {
            continue;
        }
        out[d] = std::numbers::pi * std::tanh((v[d] - mean_[d]) / std_[d]);
    }
    return out;
}

FeatureTable parse_features(std::istream &in, std::size_t expected_dim) {
    FeatureTable table(expected_dim);
    std::string line;
    std::size_t line_no = 0;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = strip(line);
        if (view.empty() || view.front() == '#') {
            continue;
        }
        const auto cells = split_csv(view);
        if (!header_seen) {
            header_seen = true;
            if (cells.empty() || strip(cells[0]) != "image_id") {
                throw SchemaError(line_no, "header must start with image_id");
            }
            if (cells.size() - 1 != expected_dim) {
                throw DimMismatch(0, expected_dim, cells.size() - 1);
            }
            for (std::size_t d = 0; d < expected_dim; ++d) {
                if (strip(cells[d + 1]) != fmt::format("f{}", d)) {
                    throw SchemaError(line_no,
                                      fmt::format("expected column f{}", d));
                }
            }
            continue;
        }
        ++row;
        if (cells.size() - 1 != expected_dim) {
            throw DimMismatch(row, expected_dim, cells.size() - 1);
        }
        const auto id = strip(cells[0]);
        if (id.empty()) {
            throw SchemaError(line_no, "empty image_id");
        }
        std::vector<double> values(expected_dim);
        for (std::size_t d = 0; d < expected_dim; ++d) {
            const auto cell = strip(cells[d + 1]);
            const auto *first = cell.data();
            const auto *last = cell.data() + cell.size();
            if (!cell.empty() && *first == '+') {
                ++first;
            }
            const auto [ptr, ec] = std::from_chars(first, last, values[d]);
            if (ec != std::errc{} || ptr != last || !std::isfinite(values[d])) {
                throw SchemaError(line_no,
                                  fmt::format("bad value '{}'", cell));
            }
        }
        if (table.contains(id)) {
            throw SchemaError(line_no,
                              fmt::format("duplicate image_id '{}'", id));
        }
        table.insert(std::string(id), std::move(values));
    }
    if (!header_seen) {
        throw SchemaError(line_no, "missing header");
    }
    table.fit_standardization();
    return table;
}

FeatureTable load_features(const std::filesystem::path &path,
                           std::size_t expected_dim) {
    std::ifstream in(path);
    if (!in) {
        throw Error(fmt::format("cannot open feature file {}", path.string()));
    }
    return parse_features(in, expected_dim);
}

void write_features(const FeatureTable &table, std::ostream &out,
                    std::string_view comment) {
    if (!comment.empty()) {
        out << "# " << comment << '\n';
    }
    out << "image_id";
    for (std::size_t d = 0; d < table.dim(); ++d) {
        out << ",f" << d;
    }
    out << '\n';
    for (const auto &[id, v] : table.rows()) {
        out << id;
        for (const double x : v) {
            out << ',' << fmt::format("{:.17g}", x);
        }
        out << '\n';
    }
}

FeatureTable synthetic_features(std::span<const std::string> ids,
                                std::size_t dim, std::uint64_t seed) {
    constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    FeatureTable table(dim);
    for (const auto &id : ids) {
        const std::uint64_t key = splitmix64(seed ^ fnv1a64(id));
        std::vector<double> v(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const std::uint64_t u = splitmix64(key + (d + 1) * kGolden);
            v[d] = 2.0 * static_cast<double>(u >> 11) * 0x1.0p-53 - 1.0;
        }
        table.insert(id, std::move(v));
    }
    table.fit_standardization();
    return table;
}

} // namespace multiq
