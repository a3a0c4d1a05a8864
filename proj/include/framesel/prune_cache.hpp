// Copyright 2026 The framesel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "framesel/feature_provider.hpp"
#include "framesel/importance.hpp"
#include "framesel/progress_prior.hpp"
#include "framesel/pruner.hpp"
#include "framesel/trajectory.hpp"

namespace framesel {

/// Two ratios name the same view when they differ by at most this much.
inline constexpr double kRatioMatchTolerance = 1e-9;

struct CacheConfig {
  ImportanceConfig importance;
  PruneConfig prune;
  std::vector<double> ratios{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 1.0};
  std::optional<GmmPrior> prior;

  /// Throws ConfigError; also checks ratios are sorted, unique, in (0, 1]
  /// and that gmm mode carries a prior.
  void validate() const;
  bool operator==(const CacheConfig&) const = default;
};

nlohmann::json config_to_json(const CacheConfig& config);

/// Fields missing from `j` keep their defaults; unknown keys are rejected.
/// Ratios are optional here so a config file can leave them to the caller.
CacheConfig config_from_json(const nlohmann::json& j);

/// Sorted keys, no whitespace, shortest round-trip numbers.
std::string canonical_config(const CacheConfig& config);

/// SHA-256 of canonical_config, lowercase hex.
std::string config_hash(const CacheConfig& config);

std::string sha256_hex(std::string_view bytes);

struct CacheEntry {
  FrameScores scores;
  std::vector<int> forced;
  std::vector<PrunedView> views;  // one per configured ratio, ascending

  /// nullptr when no view for r exists.
  const PrunedView* find_view(double r) const noexcept;
  bool operator==(const CacheEntry&) const = default;
};

struct PruneCache {
  std::string config_hash;
  CacheConfig config;
  std::map<std::string, CacheEntry> entries;
  std::map<std::string, std::vector<std::string>> flags;

  const CacheEntry& entry(const std::string& trajectory_id) const;

  /// Throws DataError("ratio not precomputed ...") when r was not cached.
  const PrunedView& view(const std::string& trajectory_id, double r) const;

  bool has_ratio(double r) const noexcept;

  /// Checks that a run's training ratios are a subset of the cached ones.
  void require_ratios(std::span<const double> training_ratios) const;

  bool operator==(const PruneCache&) const = default;
};

/// Scores and prunes every trajectory at every configured ratio.
/// `jobs` > 1 spreads trajectories over worker threads; the result does not
/// depend on it.
PruneCache build_cache(const Dataset& dataset, const CacheConfig& config, const FeatureProvider* provider = nullptr,
                       unsigned jobs = 1);

void save_cache(const PruneCache& cache, std::ostream& out);

/// Validates the envelope, the stored hash against the embedded config, and
/// every view. With `expected`, throws ConfigError("incompatible cache
/// configuration ...") unless its hash matches.
PruneCache load_cache(std::istream& in, const CacheConfig* expected = nullptr);

void save_cache_file(const PruneCache& cache, const std::filesystem::path& path);
PruneCache load_cache_file(const std::filesystem::path& path, const CacheConfig* expected = nullptr);

}  // namespace framesel
