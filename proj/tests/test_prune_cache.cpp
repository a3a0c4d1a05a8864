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
#include <sstream>

#include "framesel/error.hpp"
#include "framesel/prune_cache.hpp"
#include "framesel/synthetic.hpp"
#include "oracles.hpp"

using namespace framesel;

namespace {

Dataset corpus(std::uint64_t seed, int n) {
  GeneratorSpec spec;
  spec.seed = seed;
  spec.num_trajectories = n;
  return generate(spec);
}

PruneCache round_trip(const PruneCache& c, const CacheConfig* expected = nullptr) {
  std::stringstream buf;
  save_cache(c, buf);
  return load_cache(buf, expected);
}

std::string load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    load_cache(in);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config hash") {
  const CacheConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 64);

  CacheConfig c;
  c.importance.lambda = 0.2;
  CHECK(config_hash(c) != config_hash(a));

  CHECK(canonical_config(a) ==
        R"({"importance":{"alpha":0.6,"beta":0.2,"epsilon":1e-06,"gamma":0.2,"gripper_weight":1.0,"k":3,)"
        R"("lambda":0.1,"sigma_sq":0.2,"tpi_mode":"gaussian","vac_clip_percentile":95.0,"vac_max_samples":16},)"
        R"("prune":{"gap_factor":2.0,"gap_fill":true,"k_min":8,"preserve_transitions":true,"top_decile":0.1},)"
        R"("ratios":[0.1,0.2,0.3,0.4,0.5,0.6,1.0]})");
  CHECK(config_hash(a) == "5b855f1a84fd23ef266a5683e9985753fec4980573598e193d64285e3eb4d929");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config JSON") {
  CacheConfig c;
  c.importance.tpi_mode = TpiMode::gmm;
  c.prior = GmmPrior{{0.5, 0.5}, {0.3, 0.7}, {0.01, 0.02}, -1.5};
  c.ratios = {0.2, 1.0};
  CHECK(config_from_json(config_to_json(c)) == c);
  CHECK(config_hash(config_from_json(nlohmann::json::parse(canonical_config(c)))) == config_hash(c));

  CHECK(config_from_json(nlohmann::json::parse(R"({"importance":{"k":5}})")).importance.k == 5);
  CHECK(config_from_json(nlohmann::json::object()) == CacheConfig{});
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"importance":{"kk":5}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"prune":{"gap_fill":1}})")), ConfigError);

  CacheConfig bad;
  bad.ratios = {0.3, 0.2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad.ratios = {0.0, 0.2};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = {};
  bad.importance.tpi_mode = TpiMode::gmm;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("single trajectory at ratio 1 is the identity view") {
  Dataset ds;
  std::mt19937_64 rng(0);
  ds.trajectories.push_back(oracle::make_traj("one", oracle::random_rows(rng, 12, 2)));
  CacheConfig cfg;
  cfg.ratios = {1.0};
  const auto cache = build_cache(ds, cfg);
  const auto& e = cache.entry("one");
  REQUIRE(e.views.size() == 1);
  std::vector<int> all(12);
  std::iota(all.begin(), all.end(), 1);
  CHECK(e.views[0].retained == all);
  CHECK(e.views[0].actual_ratio == 1.0);
}

TEST_CASE("100 generator trajectories at two ratios") {
  const auto ds = corpus(3, 100);
  CacheConfig cfg;
  cfg.ratios = {0.2, 1.0};
  const auto cache = build_cache(ds, cfg);
  CHECK(cache.entries.size() == 100);
  CHECK(cache.config_hash == config_hash(cfg));
  for (const auto& t : ds.trajectories) {
    const auto& e = cache.entry(t.id);
    REQUIRE(e.views.size() == 2);
    for (const auto& v : e.views) {
      CHECK(v.trajectory_id == t.id);
      CHECK(check_view(v, t.length()).empty());
    }
    const auto score = score_trajectory(t, cfg.importance, nullptr, nullptr);
    CHECK(e.scores == score);
    CHECK(e.forced == forced_keep_set(t, score, cfg.prune));
    CHECK(*e.find_view(0.2) == prune(score.combined, 0.2, e.forced, cfg.prune, t.id));
  }
  CHECK(cache.flags.empty());
}

TEST_CASE("save and load") {
  const auto ds = corpus(4, 8);
  CacheConfig cfg;
  cfg.ratios = {0.2, 0.5, 1.0};
  const auto cache = build_cache(ds, cfg);
  CHECK(round_trip(cache) == cache);
  CHECK(round_trip(cache, &cfg) == cache);

  CacheConfig other = cfg;
  other.prune.k_min = 4;
  try {
    round_trip(cache, &other);
    FAIL("expected a configuration mismatch");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("incompatible cache configuration") != std::string::npos);
  }

  const auto dir = oracle::temp_dir("cache");
  save_cache_file(cache, dir / "c.json");
  CHECK(load_cache_file(dir / "c.json") == cache);
  CHECK_THROWS_AS(load_cache_file(dir / "missing.json"), DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("corrupt cache files are rejected") {
  const auto ds = corpus(5, 2);
  CacheConfig cfg;
  cfg.ratios = {0.2, 1.0};
  const auto cache = build_cache(ds, cfg);
  std::stringstream buf;
  save_cache(cache, buf);
  const auto good = nlohmann::json::parse(buf.str());

  CHECK(load_error("[1, 2").find("corrupt cache file") != std::string::npos);

  auto j = good;
  j.erase("entries");
  CHECK(load_error(j.dump()).find("missing \"entries\"") != std::string::npos);

  j = good;
  j["config"]["importance"]["lambda"] = 0.3;
  CHECK(load_error(j.dump()).find("config_hash does not match") != std::string::npos);

  j = good;
  j["entries"]["syn-0"]["views"][0]["retained"] = {3, 2};
  CHECK(load_error(j.dump()).find("corrupt cache file") != std::string::npos);

  j = good;
  j["entries"]["syn-0"]["views"].erase(1);
  CHECK(load_error(j.dump()).find("lacks a view for ratio 1") != std::string::npos);
}

TEST_CASE("lookups") {
  const auto ds = corpus(6, 3);
  CacheConfig cfg;
  cfg.ratios = {0.1, 0.2, 0.3, 1.0};
  const auto cache = build_cache(ds, cfg);
  CHECK(cache.view("syn-1", 0.2).target_ratio == 0.2);
  CHECK(cache.view("syn-1", 0.1 + 0.2).target_ratio == 0.3);
  CHECK_THROWS_WITH_AS(cache.view("syn-1", 0.25), "ratio not precomputed: 0.25", DataError);
  CHECK_THROWS_WITH_AS(cache.entry("nope"), "unknown trajectory 'nope'", DataError);
}

TEST_CASE("a ratio subset reuses an existing cache") {
  const auto ds = corpus(8, 5);
  const CacheConfig full;
  const auto cache = build_cache(ds, full);
  const std::vector<double> training{0.2, 1.0};
  CHECK_NOTHROW(cache.require_ratios(training));
  const std::vector<double> extra{0.2, 0.25};
  CHECK_THROWS_AS(cache.require_ratios(extra), DataError);

  CacheConfig narrow = full;
  narrow.ratios = training;
  const auto fresh = build_cache(ds, narrow);
  for (const auto& [id, e] : fresh.entries) {
    CHECK(cache.view(id, 0.2) == e.views[0]);
    CHECK(cache.view(id, 1.0) == e.views[1]);
  }
}

TEST_CASE("result does not depend on dataset order or job count") {
  auto ds = corpus(9, 24);
  CacheConfig cfg;
  cfg.ratios = {0.2, 1.0};
  const auto ref = build_cache(ds, cfg, nullptr, 1);
  CHECK(build_cache(ds, cfg, nullptr, 4) == ref);
  std::reverse(ds.trajectories.begin(), ds.trajectories.end());
  CHECK(build_cache(ds, cfg, nullptr, 3) == ref);

  Dataset dup;
  dup.trajectories = {ds.trajectories[0], ds.trajectories[0]};
  CHECK_THROWS_AS(build_cache(dup, cfg), DataError);
}

TEST_CASE("trajectories without usable features are flagged") {
  auto ds = corpus(10, 3);
  ds.trajectories[1].visual_features.reset();
  CacheConfig cfg;
  cfg.ratios = {0.5, 1.0};
  const auto cache = build_cache(ds, cfg);
  REQUIRE(cache.flags.size() == 1);
  CHECK(cache.flags.count("syn-1") == 1);
  CHECK(round_trip(cache).flags == cache.flags);
  CHECK(cache.entry("syn-1").views.size() == 2);
}
