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

#include "framesel/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "framesel/error.hpp"
#include "framesel/numeric.hpp"

namespace framesel {
namespace {

void require_ratio(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw ConfigError("retention ratio must be in (0, 1], got " + format_double(r));
}

// Highest-importance frame strictly between u and w (1-based), ties toward earlier t.
int best_between(std::span<const double> scores, int u, int w) {
  int best = u + 1;
  for (int t = u + 2; t < w; ++t) {
    if (scores[t - 1] > scores[best - 1]) best = t;
  }
  return best;
}

}  // namespace

void PruneConfig::validate() const {
  if (k_min < 1) throw ConfigError("prune config: k_min must be a positive integer");
  if (!(gap_factor > 0.0) || !std::isfinite(gap_factor)) throw ConfigError("prune config: gap_factor must be positive");
  if (!(top_decile > 0.0 && top_decile <= 1.0)) throw ConfigError("prune config: top_decile must be in (0, 1]");
}

std::vector<std::string> check_view(const PrunedView& view, std::size_t T) {
  std::vector<std::string> out;
  if (!(view.target_ratio > 0.0 && view.target_ratio <= 1.0)) out.push_back("target_ratio outside (0, 1]");
  if (view.retained.empty()) out.push_back("retained is empty");
  for (std::size_t i = 0; i < view.retained.size(); ++i) {
    const int t = view.retained[i];
    if (t < 1 || static_cast<std::size_t>(t) > T) {
      out.push_back("retained frame " + std::to_string(t) + " outside [1, " + std::to_string(T) + "]");
    }
    if (i > 0 && t <= view.retained[i - 1]) out.push_back("retained frames not strictly increasing");
  }
  const double expected = T == 0 ? 0.0 : static_cast<double>(view.retained.size()) / static_cast<double>(T);
  if (std::abs(view.actual_ratio - expected) > 1e-12) out.push_back("actual_ratio inconsistent with |retained| / T");
  if (view.target_ratio == 1.0 && view.retained.size() != T) out.push_back("identity view does not retain every frame");
  return out;
}

double quantile_threshold(std::span<const double> scores, double r) {
  if (scores.empty()) throw DataError("quantile of empty scores");
  require_ratio(r);
  const auto T = static_cast<std::int64_t>(scores.size());
  const std::int64_t rank = std::clamp<std::int64_t>(ceil_count((1.0 - r) * static_cast<double>(T)), 1, T);
  std::vector<double> sorted(scores.begin(), scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  return sorted[rank - 1];
}

std::size_t target_count(std::size_t T, double r, int k_min) {
  const std::int64_t floor_rt = floor_count(r * static_cast<double>(T));
  const std::int64_t k = std::max<std::int64_t>(k_min, floor_rt);
  return static_cast<std::size_t>(std::min<std::int64_t>(k, static_cast<std::int64_t>(T)));
}

int max_gap(double r, double gap_factor) {
  require_ratio(r);
  return static_cast<int>(std::max<std::int64_t>(1, ceil_count(gap_factor / r)));
}

std::vector<int> forced_keep_set(const Trajectory& traj, const FrameScores& scores, const PruneConfig& config) {
  if (!config.preserve_transitions) return {};
  const std::size_t T = traj.length();
  const std::vector<double> d = action_change(traj.actions);

  std::vector<int> order(T - 1);
  std::iota(order.begin(), order.end(), 2);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a - 1] > d[b - 1]; });
  const auto decile =
      std::min<std::size_t>(static_cast<std::size_t>(ceil_count(config.top_decile * static_cast<double>(T))), T - 1);

  std::vector<int> forced{1, static_cast<int>(T)};
  forced.insert(forced.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(decile));
  for (int t : scores.gripper_transitions) {
    if (t >= 1 && static_cast<std::size_t>(t) <= T) forced.push_back(t);
  }
  std::sort(forced.begin(), forced.end());
  forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
  return forced;
}

PrunedView prune(std::span<const double> scores, double r, std::span<const int> forced, const PruneConfig& config,
                 std::string trajectory_id) {
  require_ratio(r);
  const std::size_t T = scores.size();
  if (T < 2) throw DataError("prune needs at least 2 frames");

  std::vector<char> is_forced(T, 0);
  std::size_t n_forced = 0;
  for (int t : forced) {
    if (t < 1 || static_cast<std::size_t>(t) > T) {
      throw DataError("forced frame " + std::to_string(t) + " outside [1, " + std::to_string(T) + "]");
    }
    if (!is_forced[t - 1]) {
      is_forced[t - 1] = 1;
      ++n_forced;
    }
  }

  const std::size_t k = target_count(T, r, config.k_min);
  const double theta = quantile_threshold(scores, r);

  std::vector<char> keep(T, 0);
  std::size_t count = 0;
  for (std::size_t i = 0; i < T; ++i) {
    if (scores[i] >= theta || is_forced[i]) {
      keep[i] = 1;
      ++count;
    }
  }

  const std::size_t limit = std::max(k, n_forced);
  if (count > limit) {
    // Drop the least important non-forced candidates; among ties, later frames go first.
    std::vector<int> removable;
    for (std::size_t i = 0; i < T; ++i) {
      if (keep[i] && !is_forced[i]) removable.push_back(static_cast<int>(i));
    }
    std::sort(removable.begin(), removable.end(), [&](int a, int b) {
      if (scores[a] != scores[b]) return scores[a] < scores[b];
      return a > b;
    });
    for (std::size_t j = 0; j < count - limit; ++j) keep[removable[j]] = 0;
    count = limit;
  } else if (count < k) {
    // Add the most important remaining frames; among ties, earlier frames first.
    std::vector<int> addable;
    for (std::size_t i = 0; i < T; ++i) {
      if (!keep[i]) addable.push_back(static_cast<int>(i));
    }
    std::sort(addable.begin(), addable.end(), [&](int a, int b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return a < b;
    });
    for (std::size_t j = 0; j < k - count; ++j) keep[addable[j]] = 1;
    count = k;
  }

  if (config.gap_fill) {
    const int g = max_gap(r, config.gap_factor);
    std::vector<int> kept;
    for (std::size_t i = 0; i < T; ++i) {
      if (keep[i]) kept.push_back(static_cast<int>(i + 1));
    }
    std::vector<std::pair<int, int>> pending;
    for (std::size_t i = 1; i < kept.size(); ++i) pending.emplace_back(kept[i - 1], kept[i]);
    while (!pending.empty()) {
      auto [u, w] = pending.back();
      pending.pop_back();
      if (w - u <= g) continue;
      const int m = best_between(scores, u, w);
      keep[m - 1] = 1;
      pending.emplace_back(m, w);
      pending.emplace_back(u, m);
    }
  }

  PrunedView view;
  view.trajectory_id = std::move(trajectory_id);
  view.target_ratio = r;
  for (std::size_t i = 0; i < T; ++i) {
    if (keep[i]) view.retained.push_back(static_cast<int>(i + 1));
  }
  view.actual_ratio = static_cast<double>(view.retained.size()) / static_cast<double>(T);
  return view;
}

}  // namespace framesel
