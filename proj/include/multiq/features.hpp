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
 * Image feature tables: CSV ingestion, per-dimension standardization and
 * the feature-to-angle map, plus a seeded synthetic generator.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace multiq {

/// Standard deviations below this drop the dimension to angle 0.
inline constexpr double kMinFeatureStd = 1e-12;

class FeatureTable {
  public:
    explicit FeatureTable(std::size_t dim);

    /// Throws DimMismatch (row 0) when the vector length differs from dim.
    void insert(std::string image_id, std::vector<double> values);

    /// Fits per-dimension mean and population std over all rows.
    void fit_standardization();

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t size() const { return rows_.size(); }
    [[nodiscard]] bool contains(std::string_view image_id) const;
    /// Throws MissingFeatures.
    [[nodiscard]] const std::vector<double> &raw(std::string_view image_id) const;
    [[nodiscard]] std::span<const double> mean() const { return mean_; }
    [[nodiscard]] std::span<const double> stddev() const { return std_; }

    /// angle_d = pi * tanh((x_d - mean_d) / std_d), or 0 when std_d
    /// vanishes. Throws MissingFeatures.
    [[nodiscard]] std::vector<double> angles(std::string_view image_id) const;

    [[nodiscard]] const std::map<std::string, std::vector<double>, std::less<>> &
    rows() const {
        return rows_;
    }

  private:
    std::size_t dim_;
    std::map<std::string, std::vector<double>, std::less<>> rows_;
    std::vector<double> mean_;
    std::vector<double> std_;
};

/// CSV with header `image_id,f0,...,f{dim-1}`; lines starting with `#` are
/// comments. Throws DimMismatch (with the 1-based data row) or SchemaError.
[[nodiscard]] FeatureTable parse_features(std::istream &in,
                                          std::size_t expected_dim);
[[nodiscard]] FeatureTable load_features(const std::filesystem::path &path,
                                         std::size_t expected_dim);

void write_features(const FeatureTable &table, std::ostream &out,
                    std::string_view comment = {});

/// Deterministic vectors in [-1, 1): every coordinate is
///   u = splitmix64(splitmix64(seed ^ fnv1a64(id)) + (d + 1) * golden)
/// mapped to 2 * (u >> 11) * 2^-53 - 1. The table is standardized.
[[nodiscard]] FeatureTable synthetic_features(std::span<const std::string> ids,
                                              std::size_t dim,
                                              std::uint64_t seed);

[[nodiscard]] std::uint64_t fnv1a64(std::string_view text);
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x);

} // namespace multiq
