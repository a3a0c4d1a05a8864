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

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

namespace framesel {

/// One-dimensional Gaussian mixture over normalized task progress.
struct GmmPrior {
  static constexpr double kVarianceFloor = 1e-6;

  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> variances;
  double fit_log_likelihood = 0.0;

  std::size_t components() const noexcept { return weights.size(); }

  /// Throws ConfigError unless sizes agree, weights sum to 1 (1e-9),
  /// and every variance respects the floor.
  void validate() const;
  bool operator==(const GmmPrior&) const = default;
};

struct GmmFitOptions {
  int components = 3;
  double tol = 1e-8;
  int max_iter = 200;
  std::uint64_t seed = 0;  // reserved: initialization is quantile-based and does not draw
};

/// EM fit. Means start at the (i + 0.5)/M sample quantiles, weights uniform,
/// variances at the pooled sample variance. Stops once the log-likelihood gain
/// drops below tol or after max_iter iterations. If `ll_trace` is given it
/// receives the log-likelihood of the initial model and after every M-step.
GmmPrior fit_gmm_1d(std::span<const double> samples, const GmmFitOptions& options,
                    std::vector<double>* ll_trace = nullptr);

double gmm_log_likelihood(const GmmPrior& prior, std::span<const double> samples);

/// Mixture density q(p); not truncated to [0, 1].
double evaluate_prior(const GmmPrior& prior, double p);

/// q(p_t) / max_s q(p_s) over p_t = (t-1)/(T-1).
std::vector<double> compute_tpi_gmm(std::size_t T, const GmmPrior& prior);

nlohmann::json prior_to_json(const GmmPrior& prior);
GmmPrior prior_from_json(const nlohmann::json& j);

}  // namespace framesel
