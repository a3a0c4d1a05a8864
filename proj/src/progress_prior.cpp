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

#include "framesel/progress_prior.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "framesel/error.hpp"
#include "framesel/numeric.hpp"

namespace framesel {
namespace {

double log_normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return -0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
}

double log_sum_exp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double safe_log(double w) { return w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity(); }

}  // namespace

void GmmPrior::validate() const {
  const std::size_t M = weights.size();
  if (M == 0) throw ConfigError("prior: needs at least one component");
  if (means.size() != M || variances.size() != M) {
    throw ConfigError("prior: weights, means and variances must have the same length");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("prior: weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("prior: weights must sum to 1");
  for (double m : means) {
    if (!std::isfinite(m)) throw ConfigError("prior: means must be finite");
  }
  for (double v : variances) {
    if (!(v >= kVarianceFloor) || !std::isfinite(v)) throw ConfigError("prior: variance below floor 1e-6");
  }
}

double gmm_log_likelihood(const GmmPrior& prior, std::span<const double> samples) {
  const std::size_t M = prior.components();
  std::vector<double> terms(M);
  double ll = 0.0;
  for (double x : samples) {
    for (std::size_t m = 0; m < M; ++m) {
      terms[m] = safe_log(prior.weights[m]) + log_normal_pdf(x, prior.means[m], prior.variances[m]);
    }
    ll += log_sum_exp(terms);
  }
  return ll;
}

GmmPrior fit_gmm_1d(std::span<const double> samples, const GmmFitOptions& options, std::vector<double>* ll_trace) {
  const int M = options.components;
  if (M < 1) throw ConfigError("GMM component count must be at least 1");
  if (samples.empty()) throw DataError("cannot fit a GMM to an empty sample");
  if (samples.size() < static_cast<std::size_t>(M)) {
    throw DataError("GMM fit needs at least " + std::to_string(M) + " samples, got " +
                    std::to_string(samples.size()));
  }
  for (double x : samples) {
    if (!std::isfinite(x)) throw DataError("GMM samples must be finite");
  }

  const std::size_t N = samples.size();
  const double n = static_cast<double>(N);
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var = std::max(var / n, GmmPrior::kVarianceFloor);

  GmmPrior g;
  g.weights.assign(M, 1.0 / M);
  g.variances.assign(M, var);
  for (int m = 0; m < M; ++m) {
    g.means.push_back(percentile_linear(samples, 100.0 * (m + 0.5) / M));
  }

  std::vector<double> resp(N * M);
  std::vector<double> terms(M);
  double ll = gmm_log_likelihood(g, samples);
  if (ll_trace) {
    ll_trace->clear();
    ll_trace->push_back(ll);
  }

  for (int iter = 0; iter < options.max_iter; ++iter) {
    // E-step
    for (std::size_t i = 0; i < N; ++i) {
      for (int m = 0; m < M; ++m) {
        terms[m] = safe_log(g.weights[m]) + log_normal_pdf(samples[i], g.means[m], g.variances[m]);
      }
      const double lse = log_sum_exp(terms);
      for (int m = 0; m < M; ++m) resp[i * M + m] = std::exp(terms[m] - lse);
    }
    // M-step; a component that lost all responsibility keeps its mean and variance.
    for (int m = 0; m < M; ++m) {
      double nk = 0.0;
      double sx = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        nk += resp[i * M + m];
        sx += resp[i * M + m] * samples[i];
      }
      g.weights[m] = nk / n;
      if (nk <= 0.0) continue;
      const double mu = sx / nk;
      double sv = 0.0;
      for (std::size_t i = 0; i < N; ++i) sv += resp[i * M + m] * (samples[i] - mu) * (samples[i] - mu);
      g.means[m] = mu;
      g.variances[m] = std::max(sv / nk, GmmPrior::kVarianceFloor);
    }
    double total = 0.0;
    for (double w : g.weights) total += w;
    for (double& w : g.weights) w /= total;

    const double next = gmm_log_likelihood(g, samples);
    if (ll_trace) ll_trace->push_back(next);
    const double gain = next - ll;
    ll = next;
    if (gain < options.tol) break;
  }

  g.fit_log_likelihood = ll;
  return g;
}

double evaluate_prior(const GmmPrior& prior, double p) {
  double q = 0.0;
  for (std::size_t m = 0; m < prior.components(); ++m) {
    q += prior.weights[m] * std::exp(log_normal_pdf(p, prior.means[m], prior.variances[m]));
  }
  return q;
}

std::vector<double> compute_tpi_gmm(std::size_t T, const GmmPrior& prior) {
  if (T < 2) throw DataError("TPI needs at least 2 frames");
  std::vector<double> q(T);
  const double denom = static_cast<double>(T - 1);
  for (std::size_t i = 0; i < T; ++i) q[i] = evaluate_prior(prior, static_cast<double>(i) / denom);
  const double peak = *std::max_element(q.begin(), q.end());
  if (!(peak > 0.0)) throw DataError("progress prior density vanishes on the frame grid");
  for (double& v : q) v /= peak;
  return q;
}

nlohmann::json prior_to_json(const GmmPrior& prior) {
  return {
      {"M", prior.components()},
      {"weights", prior.weights},
      {"means", prior.means},
      {"variances", prior.variances},
      {"fit_log_likelihood", prior.fit_log_likelihood},
  };
}

GmmPrior prior_from_json(const nlohmann::json& j) {
  GmmPrior g;
  try {
    const auto M = j.at("M").get<std::size_t>();
    g.weights = j.at("weights").get<std::vector<double>>();
    g.means = j.at("means").get<std::vector<double>>();
    g.variances = j.at("variances").get<std::vector<double>>();
    g.fit_log_likelihood = j.at("fit_log_likelihood").get<double>();
    if (g.weights.size() != M) throw ConfigError("prior: M does not match the number of weights");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("prior: ") + e.what());
  }
  g.validate();
  return g;
}

}  // namespace framesel
