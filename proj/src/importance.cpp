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

#include "framesel/importance.hpp"

#include <algorithm>
#include <cmath>

#include "framesel/error.hpp"
#include "framesel/kernels.hpp"
#include "framesel/numeric.hpp"

namespace framesel {
namespace {

constexpr double kUniformScore = 0.5;
constexpr double kTransitionFloor = 1e-6;

double l2_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

void require_length(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw DataError(std::string(what) + ": length " + std::to_string(v.size()) + " does not match " +
                    std::to_string(n));
  }
}

}  // namespace

const char* to_string(TpiMode mode) noexcept {
  switch (mode) {
    case TpiMode::gmm:
      return "gmm";
    case TpiMode::gaussian:
      return "gaussian";
    case TpiMode::none:
      return "none";
  }
  return "none";
}

TpiMode tpi_mode_from_string(const std::string& s) {
  if (s == "gmm") return TpiMode::gmm;
  if (s == "gaussian") return TpiMode::gaussian;
  if (s == "none") return TpiMode::none;
  throw ConfigError("tpi_mode: unknown value '" + s + "' (expected gmm, gaussian or none)");
}

void ImportanceConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("importance config: " + m); };
  if (k < 1) fail("k must be a positive integer");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be nonnegative");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) fail("epsilon must be positive");
  for (double w : {alpha, beta, gamma, gripper_weight}) {
    if (!(w >= 0.0) || !std::isfinite(w)) fail("alpha, beta, gamma and gripper_weight must be nonnegative");
  }
  if (!(alpha + beta + gamma > 0.0)) fail("alpha + beta + gamma must be positive");
  if (!(vac_clip_percentile > 0.0 && vac_clip_percentile <= 100.0)) fail("vac_clip_percentile must be in (0, 100]");
  if (vac_max_samples < 1) fail("vac_max_samples must be a positive integer");
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) fail("sigma_sq must be positive");
}

std::vector<double> action_change(const ActionMatrix& actions) {
  if (actions.frames() < 2) throw DataError("action change needs at least 2 frames");
  const ActionColumns cols(actions);
  std::vector<double> d(actions.frames());
  kernels::active_kernels().diff_norms(std::span(cols.data(), actions.frames() * actions.dims()), cols.frames(),
                                       cols.dims(), d);
  return d;
}

std::vector<double> compute_avi(const ActionMatrix& actions, int k, double lambda) {
  if (actions.frames() < 2) throw DataError("AVI needs at least 2 frames, got " + std::to_string(actions.frames()));
  if (k < 1) throw ConfigError("AVI look-ahead k must be positive");
  const ActionColumns cols(actions);
  const std::size_t T = cols.frames();
  const std::span<const double> data(cols.data(), T * cols.dims());
  const auto& kt = kernels::active_kernels();

  std::vector<double> avi(T);
  std::vector<double> mv(T);
  kt.diff_norms(data, T, cols.dims(), avi);
  kt.lookahead_meanvar(data, T, cols.dims(), static_cast<std::size_t>(k), mv);
  for (std::size_t i = 0; i < T; ++i) avi[i] += lambda * mv[i];
  return avi;
}

std::vector<int> uniform_sample_frames(std::size_t T, std::size_t n) {
  n = std::min(n, T);
  if (n == 0) return {};
  if (n == 1) return {1};
  std::vector<int> frames(n);
  for (std::size_t i = 0; i < n; ++i) {
    // round(i * (T-1) / (n-1)) in integer arithmetic
    frames[i] = 1 + static_cast<int>((2 * i * (T - 1) + (n - 1)) / (2 * (n - 1)));
  }
  return frames;
}

VacResult compute_vac(const Trajectory& traj, const ImportanceConfig& config, const FeatureProvider* provider) {
  const std::size_t T = traj.length();
  VacResult result;
  result.interpolated.assign(T, 0.0);
  result.clipped.assign(T, 0.0);

  std::vector<int> frames;
  std::vector<std::vector<double>> feats;
  if (traj.visual_features) {
    for (const auto& f : *traj.visual_features) {
      frames.push_back(f.frame);
      feats.push_back(f.vec);
    }
  } else if (provider != nullptr) {
    std::size_t width = 0;
    for (int t : uniform_sample_frames(T, static_cast<std::size_t>(config.vac_max_samples))) {
      std::vector<double> v;
      try {
        v = provider->features(traj, t);
      } catch (const std::exception& e) {
        result.warning = "frame extraction failed at frame " + std::to_string(t) + ": " + e.what();
        return result;
      }
      const bool finite = std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
      if (v.empty() || !finite || (width != 0 && v.size() != width)) {
        result.warning = "frame extraction failed at frame " + std::to_string(t) + ": unusable feature vector";
        return result;
      }
      width = v.size();
      frames.push_back(t);
      feats.push_back(std::move(v));
    }
  }

  if (frames.size() < 2) {
    result.warning = "no usable visual features (" + std::to_string(frames.size()) + " sampled frame(s))";
    return result;
  }

  const std::size_t n = frames.size();
  result.sample_frames = frames;
  result.knot_values.resize(n);
  for (std::size_t i = 1; i < n; ++i) {
    const double dv = l2_distance(feats[i], feats[i - 1]);
    const double da = l2_distance(traj.actions.row(static_cast<std::size_t>(frames[i] - 1)),
                                  traj.actions.row(static_cast<std::size_t>(frames[i - 1] - 1)));
    result.knot_values[i] = dv / (da + config.epsilon);
  }
  result.knot_values[0] = result.knot_values[1];

  // Piecewise-linear through the knots, flat beyond the first and last.
  std::size_t seg = 0;
  for (std::size_t t = 1; t <= T; ++t) {
    double v;
    if (static_cast<int>(t) <= frames.front()) {
      v = result.knot_values.front();
    } else if (static_cast<int>(t) >= frames.back()) {
      v = result.knot_values.back();
    } else {
      while (frames[seg + 1] < static_cast<int>(t)) ++seg;
      const double span = frames[seg + 1] - frames[seg];
      const double w = (static_cast<double>(t) - frames[seg]) / span;
      v = static_cast<int>(t) == frames[seg + 1] ? result.knot_values[seg + 1]
                                                 : result.knot_values[seg] +
                                                       w * (result.knot_values[seg + 1] - result.knot_values[seg]);
    }
    result.interpolated[t - 1] = v;
  }

  const double cap = percentile_linear(result.interpolated, config.vac_clip_percentile);
  for (std::size_t i = 0; i < T; ++i) result.clipped[i] = std::min(result.interpolated[i], cap);
  return result;
}

std::vector<double> compute_tpi_gaussian(std::size_t T, double sigma_sq) {
  if (T < 2) throw DataError("TPI needs at least 2 frames");
  if (!(sigma_sq > 0.0)) throw ConfigError("sigma_sq must be positive");
  std::vector<double> out(T);
  const double denom = static_cast<double>(T - 1);
  for (std::size_t i = 0; i < T; ++i) {
    const double p = static_cast<double>(i) / denom;
    const double d = p - 0.5;
    out[i] = std::exp(-(d * d) / sigma_sq);
  }
  return out;
}

std::vector<double> minmax_normalize(std::span<const double> scores) {
  if (scores.empty()) throw DataError("cannot normalize an empty score vector");
  for (double v : scores) {
    if (!std::isfinite(v)) throw DataError("cannot normalize non-finite scores");
  }
  std::vector<double> out(scores.size(), kUniformScore);
  const auto& kt = kernels::active_kernels();
  const auto mm = kt.min_max(scores);
  if (mm.max > mm.min) kt.affine_normalize(scores, mm.min, mm.max - mm.min, out);
  return out;
}

GripperSignal gripper_signal(const ActionMatrix& actions, std::span<const int> gripper_dims,
                             std::span<const double> avi_norm) {
  const std::size_t T = actions.frames();
  if (gripper_dims.empty()) {
    return {std::vector<double>(avi_norm.begin(), avi_norm.end()), {}};
  }
  for (int g : gripper_dims) {
    if (g < 0 || static_cast<std::size_t>(g) >= actions.dims()) {
      throw DataError("gripper_dims: index " + std::to_string(g) + " out of range");
    }
  }

  const ActionColumns cols(actions);
  std::vector<double> raw(T);
  kernels::active_kernels().abs_diff_max(std::span(cols.data(), T * cols.dims()), T, gripper_dims, raw);

  double widest = 0.0;
  for (int g : gripper_dims) {
    const auto c = cols.column(static_cast<std::size_t>(g));
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    widest = std::max(widest, *hi - *lo);
  }
  const double threshold = std::max(0.5 * widest, kTransitionFloor);

  GripperSignal out;
  for (std::size_t i = 1; i < T; ++i) {
    if (raw[i] > threshold) out.transitions.push_back(static_cast<int>(i + 1));
  }
  out.signal = minmax_normalize(raw);
  return out;
}

std::vector<double> combine_importance(std::span<const double> avi_norm, std::span<const double> vac_norm,
                                       std::span<const double> tpi_norm, std::span<const double> gripper_signal_norm,
                                       const ImportanceConfig& config) {
  const std::size_t T = avi_norm.size();
  require_length(vac_norm, T, "vac_norm");
  require_length(tpi_norm, T, "tpi_norm");
  require_length(gripper_signal_norm, T, "gripper_signal_norm");
  std::vector<double> out(T);
  kernels::active_kernels().combine(avi_norm, vac_norm, tpi_norm, gripper_signal_norm,
                                    {config.alpha, config.beta, config.gamma, config.gripper_weight}, out);
  return out;
}

FrameScores score_trajectory(const Trajectory& traj, const ImportanceConfig& config, const GmmPrior* prior,
                             const FeatureProvider* provider) {
  if (config.tpi_mode == TpiMode::gmm && prior == nullptr) {
    throw ConfigError("missing prior in gmm mode (trajectory '" + traj.id + "')");
  }
  const std::size_t T = traj.length();

  FrameScores s;
  s.trajectory_id = traj.id;
  s.avi_raw = compute_avi(traj.actions, config.k, config.lambda);
  s.avi_norm = minmax_normalize(s.avi_raw);

  VacResult vac = compute_vac(traj, config, provider);
  if (vac.warning) s.warnings.push_back(*vac.warning);
  s.vac_raw = std::move(vac.clipped);
  s.vac_norm = minmax_normalize(s.vac_raw);

  switch (config.tpi_mode) {
    case TpiMode::gmm:
      s.tpi_norm = minmax_normalize(compute_tpi_gmm(T, *prior));
      break;
    case TpiMode::gaussian:
      s.tpi_norm = minmax_normalize(compute_tpi_gaussian(T, config.sigma_sq));
      break;
    case TpiMode::none:
      s.tpi_norm.assign(T, kUniformScore);
      break;
  }

  GripperSignal g = gripper_signal(traj.actions, traj.gripper_dims, s.avi_norm);
  s.gripper_signal_norm = std::move(g.signal);
  s.gripper_transitions = std::move(g.transitions);
  s.combined = combine_importance(s.avi_norm, s.vac_norm, s.tpi_norm, s.gripper_signal_norm, config);
  return s;
}

}  // namespace framesel
