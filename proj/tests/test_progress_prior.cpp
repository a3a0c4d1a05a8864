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

#include <doctest.h>

#include <numeric>

#include "framesel/error.hpp"
#include "framesel/progress_prior.hpp"
#include "oracles.hpp"

using namespace framesel;
using doctest::Approx;

namespace {

std::vector<double> planted_samples(std::uint64_t seed, std::size_t per_component) {
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  for (double mu : {0.2, 0.5, 0.85}) {
    std::normal_distribution<double> n(mu, 0.03);
    for (std::size_t i = 0; i < per_component; ++i) out.push_back(n(rng));
  }
  return out;
}

GmmPrior single(double mu, double var) { return GmmPrior{{1.0}, {mu}, {var}, 0.0}; }

}  // namespace

TEST_CASE("M=1 fit is the sample mean and population variance") {
  const std::vector<double> x{0.1, 0.4, 0.4, 0.9};
  GmmFitOptions opt;
  opt.components = 1;
  const auto g = fit_gmm_1d(x, opt);
  CHECK(g.weights == std::vector<double>{1.0});
  CHECK(g.means[0] == Approx(0.45).epsilon(1e-12));
  CHECK(g.variances[0] == Approx(0.0825).epsilon(1e-12));

  const std::vector<double> dup{0.3, 0.3, 0.3};
  const auto d = fit_gmm_1d(dup, opt);
  CHECK(d.variances[0] == GmmPrior::kVarianceFloor);
}

TEST_CASE("three planted stages are recovered") {
  const auto x = planted_samples(42, 100);
  const auto g = fit_gmm_1d(x, GmmFitOptions{});
  auto means = g.means;
  std::sort(means.begin(), means.end());
  CHECK(std::abs(means[0] - 0.2) < 0.05);
  CHECK(std::abs(means[1] - 0.5) < 0.05);
  CHECK(std::abs(means[2] - 0.85) < 0.05);
  CHECK(std::accumulate(g.weights.begin(), g.weights.end(), 0.0) == Approx(1.0).epsilon(1e-12));
  CHECK(g.fit_log_likelihood == Approx(gmm_log_likelihood(g, x)).epsilon(1e-12));
}

TEST_CASE("EM log-likelihood never decreases") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(10, 200), comps(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int set = 0; set < 50; ++set) {
    std::vector<double> x(size(rng));
    for (auto& v : x) v = u(rng) < 0.5 ? u(rng) * 0.3 : 0.5 + u(rng) * 0.5;
    GmmFitOptions opt;
    opt.components = comps(rng);
    std::vector<double> trace;
    const auto g = fit_gmm_1d(x, opt, &trace);
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-9);
    CHECK(std::abs(std::accumulate(g.weights.begin(), g.weights.end(), 0.0) - 1.0) <= 1e-9);
    for (double v : g.variances) CHECK(v >= GmmPrior::kVarianceFloor);
    CHECK_NOTHROW(g.validate());
  }
}

TEST_CASE("fitting is deterministic") {
  const auto x = planted_samples(9, 40);
  const auto a = fit_gmm_1d(x, GmmFitOptions{});
  const auto b = fit_gmm_1d(x, GmmFitOptions{});
  CHECK(a == b);
}

TEST_CASE("fit errors") {
  GmmFitOptions opt;
  CHECK_THROWS_AS(fit_gmm_1d(std::vector<double>{}, opt), DataError);
  CHECK_THROWS_AS(fit_gmm_1d(std::vector<double>{0.1, 0.2}, opt), DataError);
  opt.components = 0;
  CHECK_THROWS_AS(fit_gmm_1d(std::vector<double>{0.1, 0.2}, opt), ConfigError);
}

TEST_CASE("density evaluation") {
  CHECK(evaluate_prior(single(0.5, 0.2), 0.5) == Approx(0.8920620580763855).epsilon(1e-14));
  const GmmPrior sym{{0.5, 0.5}, {0.3, 0.7}, {0.01, 0.01}, 0.0};
  CHECK(evaluate_prior(sym, 0.3) == Approx(evaluate_prior(sym, 0.7)).epsilon(1e-14));
  for (double p = 0.0; p <= 1.0; p += 0.05) CHECK(evaluate_prior(sym, p) > 0.0);
}

TEST_CASE("GMM TPI") {
  const auto tpi = compute_tpi_gmm(5, single(0.0, 0.1));
  const std::vector<double> want{1.0, 0.7316156289466418, 0.2865047968601901, 0.060054667895307945,
                                 0.006737946999085467};
  for (std::size_t i = 0; i < 5; ++i) CHECK(tpi[i] == Approx(want[i]).epsilon(1e-12));
  CHECK(tpi[0] == 1.0);

  const auto mid = compute_tpi_gmm(11, single(0.5, 0.05));
  CHECK(*std::max_element(mid.begin(), mid.end()) == 1.0);
  CHECK(mid[5] == 1.0);
  for (std::size_t i = 1; i <= 5; ++i) CHECK(mid[i] > mid[i - 1]);
}

TEST_CASE("GMM TPI is invariant to rescaling the weights") {
  const auto x = planted_samples(3, 30);
  const auto g = fit_gmm_1d(x, GmmFitOptions{});
  const auto ref = compute_tpi_gmm(64, g);
  for (double c : {0.25, 3.0, 1000.0}) {
    GmmPrior scaled = g;
    for (auto& w : scaled.weights) w *= c;
    const auto got = compute_tpi_gmm(64, scaled);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(got[i] == Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("prior validation and JSON") {
  CHECK_NOTHROW(single(0.5, 0.2).validate());
  CHECK_THROWS_AS(single(0.5, 1e-9).validate(), ConfigError);
  CHECK_THROWS_AS((GmmPrior{{0.6, 0.6}, {0.1, 0.2}, {0.1, 0.1}, 0}.validate()), ConfigError);
  CHECK_THROWS_AS((GmmPrior{{1.0}, {0.1, 0.2}, {0.1}, 0}.validate()), ConfigError);

  const auto g = fit_gmm_1d(planted_samples(5, 20), GmmFitOptions{});
  CHECK(prior_from_json(prior_to_json(g)) == g);
  CHECK(prior_from_json(nlohmann::json::parse(prior_to_json(g).dump())) == g);
  auto bad = prior_to_json(g);
  bad["M"] = 2;
  CHECK_THROWS_AS(prior_from_json(bad), ConfigError);
  bad.erase("M");
  CHECK_THROWS_AS(prior_from_json(bad), ConfigError);
}
