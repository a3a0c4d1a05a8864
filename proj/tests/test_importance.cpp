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
#include <stdexcept>

#include "framesel/error.hpp"
#include "framesel/importance.hpp"
#include "framesel/numeric.hpp"
#include "framesel/synthetic.hpp"
#include "oracles.hpp"

using namespace framesel;
using doctest::Approx;

namespace {

bool in_unit(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
}

std::vector<int> rank_order(const std::vector<double>& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  return idx;
}

class ThrowingProvider final : public FeatureProvider {
 public:
  std::vector<double> features(const Trajectory&, int frame) const override {
    if (frame > 3) throw std::runtime_error("decoder error");
    return {static_cast<double>(frame)};
  }
};

class RampProvider final : public FeatureProvider {
 public:
  mutable std::vector<int> requested;
  std::vector<double> features(const Trajectory&, int frame) const override {
    requested.push_back(frame);
    return {static_cast<double>(frame), 0.0};
  }
};

}  // namespace

TEST_CASE("AVI worked example") {
  const auto m = ActionMatrix::from_rows({{0}, {1}, {3}, {3}, {3}, {3}});
  const auto avi = compute_avi(m, 3, 0.1);
  const std::vector<double> expected{1.0888888888888888, 1.0, 2.0, 0.0, 0.0, 0.0};
  REQUIRE(avi.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(avi[i] == Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("AVI of constant actions is zero") {
  const auto m = ActionMatrix::from_rows(oracle::Rows(9, {1.5, -2.0, 3.0}));
  for (double v : compute_avi(m, 3, 0.1)) CHECK(v == 0.0);
}

TEST_CASE("AVI matches brute force on random trajectories") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(2, 50), dim(1, 8);
  std::uniform_int_distribution<int> kk(1, 6);
  for (int seed = 0; seed < 200; ++seed) {
    const auto rows = oracle::random_rows(rng, len(rng), dim(rng));
    const int k = kk(rng);
    const auto got = compute_avi(ActionMatrix::from_rows(rows), k, 0.1);
    const auto want = oracle::avi(rows, k, 0.1);
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-9);
  }
}

TEST_CASE("AVI errors") {
  CHECK_THROWS_AS(compute_avi(ActionMatrix::from_rows({{1.0}}), 3, 0.1), DataError);
  CHECK_THROWS_AS(compute_avi(ActionMatrix::from_rows({{1.0}, {2.0}}), 0, 0.1), ConfigError);
}

TEST_CASE("uniform sampling includes both ends") {
  CHECK(uniform_sample_frames(100, 16).front() == 1);
  CHECK(uniform_sample_frames(100, 16).back() == 100);
  CHECK(uniform_sample_frames(100, 16).size() == 16);
  CHECK(uniform_sample_frames(5, 5) == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(uniform_sample_frames(10, 3) == std::vector<int>{1, 6, 10});
}

TEST_CASE("VAC two-sample arithmetic") {
  auto t = oracle::make_traj("v", {{0.0}, {2.0}});
  t.visual_features = std::vector<VisualFeature>{{1, {0.0, 0.0}}, {2, {3.0, 4.0}}};
  const auto vac = compute_vac(t, ImportanceConfig{}, nullptr);
  REQUIRE(vac.usable());
  CHECK(vac.knot_values[1] == Approx(2.499998750000625).epsilon(1e-14));
  CHECK(vac.knot_values[0] == vac.knot_values[1]);
}

TEST_CASE("VAC is zero for identical features") {
  std::mt19937_64 rng(1);
  auto t = oracle::make_traj("v", oracle::random_rows(rng, 30, 3));
  std::vector<VisualFeature> f;
  for (int s : {1, 8, 15, 30}) f.push_back({s, {0.25, 0.5}});
  t.visual_features = f;
  for (double v : compute_vac(t, ImportanceConfig{}, nullptr).clipped) CHECK(v == 0.0);
}

TEST_CASE("VAC clips at the 95th percentile") {
  // 100 frames, each sampled; one transition is 10x the rest.
  oracle::Rows rows(100, {0.0});
  std::vector<VisualFeature> feats;
  double acc = 0;
  for (int t = 1; t <= 100; ++t) {
    rows[t - 1][0] = t;
    acc += t == 50 ? 10.0 : 1.0;
    feats.push_back({t, {acc}});
  }
  auto tr = oracle::make_traj("c", rows);
  tr.visual_features = feats;
  const auto vac = compute_vac(tr, ImportanceConfig{}, nullptr);
  const double p95 = percentile_linear(vac.interpolated, 95.0);
  CHECK(*std::max_element(vac.interpolated.begin(), vac.interpolated.end()) == Approx(10.0).epsilon(1e-5));
  CHECK(*std::max_element(vac.clipped.begin(), vac.clipped.end()) == p95);
  CHECK(p95 == Approx(1.0).epsilon(1e-5));
}

TEST_CASE("VAC interpolation preserves knots") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t T = 20 + trial;
    auto t = oracle::make_traj("k", oracle::random_rows(rng, T, 4));
    std::vector<VisualFeature> feats;
    std::normal_distribution<double> n;
    for (int s : uniform_sample_frames(T, 7)) feats.push_back({s, {n(rng), n(rng), n(rng)}});
    t.visual_features = feats;
    const auto vac = compute_vac(t, ImportanceConfig{}, nullptr);
    REQUIRE(vac.usable());
    for (std::size_t i = 0; i < vac.sample_frames.size(); ++i)
      CHECK(vac.interpolated[vac.sample_frames[i] - 1] == vac.knot_values[i]);
  }
}

TEST_CASE("VAC without usable features is flagged, not fatal") {
  std::mt19937_64 rng(2);
  auto t = oracle::make_traj("f", oracle::random_rows(rng, 20, 2));

  SUBCASE("no features and no provider") {
    const auto vac = compute_vac(t, ImportanceConfig{}, nullptr);
    CHECK_FALSE(vac.usable());
    for (double v : vac.clipped) CHECK(v == 0.0);
  }
  SUBCASE("a single feature") {
    t.visual_features = std::vector<VisualFeature>{{3, {1.0}}};
    CHECK_FALSE(compute_vac(t, ImportanceConfig{}, nullptr).usable());
  }
  SUBCASE("provider failure") {
    ThrowingProvider p;
    const auto s = score_trajectory(t, ImportanceConfig{}, nullptr, &p);
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0].find("frame extraction failed") != std::string::npos);
    CHECK(s.warnings[0].find("decoder error") != std::string::npos);
    for (double v : s.vac_norm) CHECK(v == 0.5);
  }
}

TEST_CASE("provider is sampled uniformly when features are absent") {
  std::mt19937_64 rng(3);
  auto t = oracle::make_traj("p", oracle::random_rows(rng, 40, 2));
  RampProvider p;
  const auto vac = compute_vac(t, ImportanceConfig{}, &p);
  CHECK(vac.usable());
  CHECK(p.requested == uniform_sample_frames(40, 16));

  RampProvider short_p;
  auto s = oracle::make_traj("s", oracle::random_rows(rng, 5, 2));
  compute_vac(s, ImportanceConfig{}, &short_p);
  CHECK(short_p.requested == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("downsample provider") {
  GrayImage img{16, 16, std::vector<double>(256)};
  for (std::size_t y = 0; y < 16; ++y)
    for (std::size_t x = 0; x < 16; ++x) img.pixels[y * 16 + x] = static_cast<double>(x / 2 + 8 * (y / 2));
  const auto f = downsample_8x8(img);
  REQUIRE(f.size() == 64);
  for (std::size_t i = 0; i < 64; ++i) CHECK(f[i] == static_cast<double>(i));

  DownsampleProvider p([](const Trajectory&, int frame) {
    return GrayImage{8, 8, std::vector<double>(64, static_cast<double>(frame))};
  });
  const auto t = oracle::make_traj("d", {{0}, {1}});
  CHECK(p.features(t, 2) == std::vector<double>(64, 2.0));
}

TEST_CASE("Gaussian TPI") {
  const auto tpi = compute_tpi_gaussian(5, 0.2);
  CHECK(tpi[2] == 1.0);
  CHECK(tpi[0] == Approx(0.2865047968601901).epsilon(1e-14));
  CHECK(tpi[4] == tpi[0]);
  CHECK_THROWS(compute_tpi_gaussian(1, 0.2));
}

TEST_CASE("minmax normalization") {
  CHECK(minmax_normalize(std::vector<double>{2, 4, 6}) == std::vector<double>{0, 0.5, 1});
  CHECK(minmax_normalize(std::vector<double>{3, 3, 3}) == std::vector<double>{0.5, 0.5, 0.5});
  CHECK_THROWS_AS(minmax_normalize(std::vector<double>{1, NAN}), DataError);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    auto v = oracle::random_rows(rng, 1, 30)[0];
    const auto n = minmax_normalize(v);
    CHECK(*std::min_element(n.begin(), n.end()) == 0.0);
    CHECK(*std::max_element(n.begin(), n.end()) == 1.0);
  }
}

TEST_CASE("gripper signal") {
  const std::vector<double> avi_norm{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  SUBCASE("constant gripper") {
    const auto m = ActionMatrix::from_rows(oracle::Rows(6, {0.0, 1.0}));
    const std::vector<int> g{1};
    const auto s = gripper_signal(m, g, avi_norm);
    CHECK(s.signal == std::vector<double>(6, 0.5));
    CHECK(s.transitions.empty());
  }
  SUBCASE("step at t=4") {
    const auto m = ActionMatrix::from_rows({{0, 0}, {1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 1}});
    const std::vector<int> g{1};
    const auto s = gripper_signal(m, g, avi_norm);
    CHECK(s.transitions == std::vector<int>{4});
    CHECK(s.signal[3] == 1.0);
  }
  SUBCASE("no gripper dims") {
    const auto m = ActionMatrix::from_rows(oracle::Rows(6, {0.0}));
    const auto s = gripper_signal(m, {}, avi_norm);
    CHECK(s.signal == avi_norm);
    CHECK(s.transitions.empty());
  }
}

TEST_CASE("combine importance") {
  ImportanceConfig cfg;
  cfg.gripper_weight = 0.0;
  const auto i = combine_importance(std::vector<double>{1, 0}, std::vector<double>{0, 1}, std::vector<double>{0.5, 0.5},
                                    std::vector<double>{0.3, 0.9}, cfg);
  CHECK(i[0] == Approx(0.7).epsilon(1e-15));
  CHECK(i[1] == Approx(0.3).epsilon(1e-15));

  const std::vector<double> half(4, 0.5);
  for (double v : combine_importance(half, half, half, half, ImportanceConfig{})) CHECK(v == Approx(0.75).epsilon(1e-15));

  CHECK_THROWS_AS(combine_importance(half, std::vector<double>{0.5}, half, half, cfg), DataError);
}

TEST_CASE("score_trajectory") {
  SUBCASE("constant actions, no features, mode none give constant importance") {
    ImportanceConfig cfg;
    cfg.tpi_mode = TpiMode::none;
    const auto s = score_trajectory(oracle::make_traj("c", oracle::Rows(12, {1.0, 2.0})), cfg, nullptr, nullptr);
    CHECK(s.tpi_norm == std::vector<double>(12, 0.5));
    for (double v : s.combined) CHECK(v == s.combined[0]);
    CHECK(s.warnings.size() == 1);
  }
  SUBCASE("gmm mode requires a prior") {
    ImportanceConfig cfg;
    cfg.tpi_mode = TpiMode::gmm;
    CHECK_THROWS_AS(score_trajectory(oracle::make_traj("c", {{0}, {1}}), cfg, nullptr, nullptr), ConfigError);
  }
  SUBCASE("planted transition is the argmax for seed 11") {
    GeneratorSpec spec;
    spec.seed = 11;
    spec.num_trajectories = 1;
    spec.t_min = spec.t_max = 100;
    const auto ds = generate(spec);
    const auto s = score_trajectory(ds.trajectories[0], ImportanceConfig{}, nullptr, nullptr);
    const auto it = std::max_element(s.combined.begin(), s.combined.end());
    CHECK(it - s.combined.begin() + 1 == 60);
  }
  SUBCASE("tpi_mode strings") {
    CHECK(tpi_mode_from_string("gmm") == TpiMode::gmm);
    CHECK(std::string(to_string(TpiMode::gaussian)) == "gaussian");
    CHECK_THROWS_AS(tpi_mode_from_string("uniform"), ConfigError);
  }
}

TEST_CASE("scoring invariants over a generator corpus") {
  GeneratorSpec spec;
  spec.seed = 21;
  spec.num_trajectories = 12;
  const auto ds = generate(spec);
  const ImportanceConfig cfg;

  std::vector<FrameScores> fwd;
  for (const auto& t : ds.trajectories) fwd.push_back(score_trajectory(t, cfg, nullptr, nullptr));

  // Permutation invariance.
  std::vector<std::size_t> order(ds.trajectories.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), std::mt19937_64(5));
  for (std::size_t i : order) CHECK(score_trajectory(ds.trajectories[i], cfg, nullptr, nullptr) == fwd[i]);

  for (const auto& s : fwd) {
    CHECK(in_unit(s.avi_norm));
    CHECK(in_unit(s.vac_norm));
    CHECK(in_unit(s.tpi_norm));
    CHECK(in_unit(s.gripper_signal_norm));
  }

  // With only AVI contributing, importance ranks like raw AVI.
  ImportanceConfig avi_only;
  avi_only.beta = avi_only.gamma = avi_only.gripper_weight = 0.0;
  for (const auto& t : ds.trajectories) {
    const auto s = score_trajectory(t, avi_only, nullptr, nullptr);
    CHECK(rank_order(s.combined) == rank_order(s.avi_raw));
  }
}

TEST_CASE("config validation") {
  ImportanceConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.k = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.alpha = cfg.beta = cfg.gamma = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.vac_clip_percentile = 120;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
