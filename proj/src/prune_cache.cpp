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

#include "framesel/prune_cache.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

#include "framesel/atomic_file.hpp"
#include "framesel/error.hpp"
#include "framesel/numeric.hpp"

namespace framesel {
namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& dst, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj[key];
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(where + "." + key + ": expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  } else {
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  }
  dst = v.get<T>();
}

json importance_to_json(const ImportanceConfig& c) {
  return {
      {"k", c.k},
      {"lambda", c.lambda},
      {"epsilon", c.epsilon},
      {"alpha", c.alpha},
      {"beta", c.beta},
      {"gamma", c.gamma},
      {"gripper_weight", c.gripper_weight},
      {"vac_clip_percentile", c.vac_clip_percentile},
      {"vac_max_samples", c.vac_max_samples},
      {"tpi_mode", to_string(c.tpi_mode)},
      {"sigma_sq", c.sigma_sq},
  };
}

ImportanceConfig importance_from_json(const json& j) {
  const std::string where = "importance";
  reject_unknown_keys(j,
                      {"k", "lambda", "epsilon", "alpha", "beta", "gamma", "gripper_weight", "vac_clip_percentile",
                       "vac_max_samples", "tpi_mode", "sigma_sq"},
                      where);
  ImportanceConfig c;
  read_field(j, "k", c.k, where);
  read_field(j, "lambda", c.lambda, where);
  read_field(j, "epsilon", c.epsilon, where);
  read_field(j, "alpha", c.alpha, where);
  read_field(j, "beta", c.beta, where);
  read_field(j, "gamma", c.gamma, where);
  read_field(j, "gripper_weight", c.gripper_weight, where);
  read_field(j, "vac_clip_percentile", c.vac_clip_percentile, where);
  read_field(j, "vac_max_samples", c.vac_max_samples, where);
  read_field(j, "sigma_sq", c.sigma_sq, where);
  if (j.contains("tpi_mode")) {
    if (!j["tpi_mode"].is_string()) throw ConfigError("importance.tpi_mode: expected a string");
    c.tpi_mode = tpi_mode_from_string(j["tpi_mode"].get<std::string>());
  }
  return c;
}

json prune_to_json(const PruneConfig& c) {
  return {
      {"k_min", c.k_min},
      {"preserve_transitions", c.preserve_transitions},
      {"gap_fill", c.gap_fill},
      {"gap_factor", c.gap_factor},
      {"top_decile", c.top_decile},
  };
}

PruneConfig prune_from_json(const json& j) {
  const std::string where = "prune";
  reject_unknown_keys(j, {"k_min", "preserve_transitions", "gap_fill", "gap_factor", "top_decile"}, where);
  PruneConfig c;
  read_field(j, "k_min", c.k_min, where);
  read_field(j, "preserve_transitions", c.preserve_transitions, where);
  read_field(j, "gap_fill", c.gap_fill, where);
  read_field(j, "gap_factor", c.gap_factor, where);
  read_field(j, "top_decile", c.top_decile, where);
  return c;
}

json scores_to_json(const FrameScores& s) {
  return {
      {"avi_raw", s.avi_raw},
      {"avi_norm", s.avi_norm},
      {"vac_raw", s.vac_raw},
      {"vac_norm", s.vac_norm},
      {"tpi_norm", s.tpi_norm},
      {"gripper_signal_norm", s.gripper_signal_norm},
      {"gripper_transitions", s.gripper_transitions},
      {"combined", s.combined},
  };
}

FrameScores scores_from_json(const json& j, const std::string& id) {
  FrameScores s;
  s.trajectory_id = id;
  s.avi_raw = j.at("avi_raw").get<std::vector<double>>();
  s.avi_norm = j.at("avi_norm").get<std::vector<double>>();
  s.vac_raw = j.at("vac_raw").get<std::vector<double>>();
  s.vac_norm = j.at("vac_norm").get<std::vector<double>>();
  s.tpi_norm = j.at("tpi_norm").get<std::vector<double>>();
  s.gripper_signal_norm = j.at("gripper_signal_norm").get<std::vector<double>>();
  s.gripper_transitions = j.at("gripper_transitions").get<std::vector<int>>();
  s.combined = j.at("combined").get<std::vector<double>>();
  const std::size_t T = s.combined.size();
  for (const auto* v : {&s.avi_raw, &s.avi_norm, &s.vac_raw, &s.vac_norm, &s.tpi_norm, &s.gripper_signal_norm}) {
    if (v->size() != T) throw DataError("score vectors of '" + id + "' have inconsistent lengths");
  }
  return s;
}

bool same_ratio(double a, double b) { return std::abs(a - b) <= kRatioMatchTolerance; }

struct Built {
  CacheEntry entry;
  std::exception_ptr error;
};

Built build_one(const Trajectory& traj, const CacheConfig& config, const FeatureProvider* provider) {
  Built out;
  try {
    require_valid(traj);
    CacheEntry& e = out.entry;
    e.scores = score_trajectory(traj, config.importance, config.prior ? &*config.prior : nullptr, provider);
    e.forced = forced_keep_set(traj, e.scores, config.prune);
    for (double r : config.ratios) e.views.push_back(prune(e.scores.combined, r, e.forced, config.prune, traj.id));
  } catch (...) {
    out.error = std::current_exception();
  }
  return out;
}

}  // namespace

void CacheConfig::validate() const {
  importance.validate();
  prune.validate();
  if (ratios.empty()) throw ConfigError("ratios must not be empty");
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (!(ratios[i] > 0.0 && ratios[i] <= 1.0)) {
      throw ConfigError("ratio " + format_double(ratios[i]) + " outside (0, 1]");
    }
    if (i > 0 && !(ratios[i] > ratios[i - 1])) throw ConfigError("ratios must be sorted and unique");
  }
  if (importance.tpi_mode == TpiMode::gmm && !prior) throw ConfigError("missing prior in gmm mode");
  if (prior) prior->validate();
}

json config_to_json(const CacheConfig& config) {
  json j = {
      {"importance", importance_to_json(config.importance)},
      {"prune", prune_to_json(config.prune)},
      {"ratios", config.ratios},
  };
  if (config.prior) j["prior"] = prior_to_json(*config.prior);
  return j;
}

CacheConfig config_from_json(const json& j) {
  reject_unknown_keys(j, {"importance", "prune", "ratios", "prior"}, "config");
  CacheConfig c;
  try {
    if (j.contains("importance")) c.importance = importance_from_json(j["importance"]);
    if (j.contains("prune")) c.prune = prune_from_json(j["prune"]);
    if (j.contains("ratios")) c.ratios = j["ratios"].get<std::vector<double>>();
    if (j.contains("prior") && !j["prior"].is_null()) c.prior = prior_from_json(j["prior"]);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

std::string canonical_config(const CacheConfig& config) { return config_to_json(config).dump(); }

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string config_hash(const CacheConfig& config) { return sha256_hex(canonical_config(config)); }

const PrunedView* CacheEntry::find_view(double r) const noexcept {
  for (const auto& v : views) {
    if (same_ratio(v.target_ratio, r)) return &v;
  }
  return nullptr;
}

const CacheEntry& PruneCache::entry(const std::string& trajectory_id) const {
  auto it = entries.find(trajectory_id);
  if (it == entries.end()) throw DataError("unknown trajectory '" + trajectory_id + "'");
  return it->second;
}

const PrunedView& PruneCache::view(const std::string& trajectory_id, double r) const {
  const PrunedView* v = entry(trajectory_id).find_view(r);
  if (v == nullptr) throw DataError("ratio not precomputed: " + format_double(r));
  return *v;
}

bool PruneCache::has_ratio(double r) const noexcept {
  return std::any_of(config.ratios.begin(), config.ratios.end(), [r](double c) { return same_ratio(c, r); });
}

void PruneCache::require_ratios(std::span<const double> training_ratios) const {
  for (double r : training_ratios) {
    if (!has_ratio(r)) throw DataError("ratio not precomputed: " + format_double(r));
  }
}

PruneCache build_cache(const Dataset& dataset, const CacheConfig& config, const FeatureProvider* provider,
                       unsigned jobs) {
  config.validate();
  std::set<std::string> ids;
  for (const auto& t : dataset.trajectories) {
    if (!ids.insert(t.id).second) throw DataError("duplicate trajectory id '" + t.id + "'");
  }

  const std::size_t n = dataset.trajectories.size();
  std::vector<Built> results(n);
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = build_one(dataset.trajectories[i], config, provider);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          results[i] = build_one(dataset.trajectories[i], config, provider);
        }
      });
    }
  }

  PruneCache cache;
  cache.config = config;
  cache.config_hash = config_hash(config);
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i].error) std::rethrow_exception(results[i].error);
    const auto& id = dataset.trajectories[i].id;
    if (!results[i].entry.scores.warnings.empty()) cache.flags[id] = results[i].entry.scores.warnings;
    cache.entries.emplace(id, std::move(results[i].entry));
  }
  return cache;
}

void save_cache(const PruneCache& cache, std::ostream& out) {
  json entries = json::object();
  for (const auto& [id, e] : cache.entries) {
    json views = json::array();
    for (const auto& v : e.views) {
      views.push_back({{"target_ratio", v.target_ratio}, {"actual_ratio", v.actual_ratio}, {"retained", v.retained}});
    }
    entries[id] = {{"scores", scores_to_json(e.scores)}, {"forced", e.forced}, {"views", std::move(views)}};
  }
  json flags = json::object();
  for (const auto& [id, f] : cache.flags) flags[id] = f;
  const json doc = {
      {"config_hash", cache.config_hash},
      {"config", config_to_json(cache.config)},
      {"entries", std::move(entries)},
      {"flags", std::move(flags)},
  };
  out << doc.dump() << '\n';
}

PruneCache load_cache(std::istream& in, const CacheConfig* expected) {
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw DataError("corrupt cache file: not a JSON object");

  PruneCache cache;
  try {
    for (const char* key : {"config_hash", "config", "entries", "flags"}) {
      if (!doc.contains(key)) throw DataError(std::string("corrupt cache file: missing \"") + key + "\"");
    }
    cache.config_hash = doc["config_hash"].get<std::string>();
    cache.config = config_from_json(doc["config"]);
    cache.config.validate();
    if (config_hash(cache.config) != cache.config_hash) {
      throw DataError("corrupt cache file: stored config_hash does not match the embedded config");
    }
    if (expected != nullptr) {
      const std::string want = config_hash(*expected);
      if (want != cache.config_hash) {
        throw ConfigError("incompatible cache configuration: cache " + cache.config_hash.substr(0, 12) +
                          " vs requested " + want.substr(0, 12));
      }
    }

    for (const auto& [id, ej] : doc["entries"].items()) {
      CacheEntry e;
      e.scores = scores_from_json(ej.at("scores"), id);
      e.forced = ej.at("forced").get<std::vector<int>>();
      const std::size_t T = e.scores.length();
      for (const auto& vj : ej.at("views")) {
        PrunedView v;
        v.trajectory_id = id;
        v.target_ratio = vj.at("target_ratio").get<double>();
        v.actual_ratio = vj.at("actual_ratio").get<double>();
        v.retained = vj.at("retained").get<std::vector<int>>();
        if (auto bad = check_view(v, T); !bad.empty()) {
          throw DataError("corrupt cache file: view " + format_double(v.target_ratio) + " of '" + id +
                          "': " + bad.front());
        }
        e.views.push_back(std::move(v));
      }
      for (double r : cache.config.ratios) {
        if (e.find_view(r) == nullptr) {
          throw DataError("corrupt cache file: '" + id + "' lacks a view for ratio " + format_double(r));
        }
      }
      cache.entries.emplace(id, std::move(e));
    }
    for (const auto& [id, fj] : doc["flags"].items()) {
      auto warnings = fj.get<std::vector<std::string>>();
      auto it = cache.entries.find(id);
      if (it == cache.entries.end()) throw DataError("corrupt cache file: flags for unknown trajectory '" + id + "'");
      it->second.scores.warnings = warnings;
      cache.flags[id] = std::move(warnings);
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("corrupt cache file: ") + e.what());
  }
  return cache;
}

void save_cache_file(const PruneCache& cache, const std::filesystem::path& path) {
  write_file_atomic(path, [&](std::ostream& out) { save_cache(cache, out); });
}

PruneCache load_cache_file(const std::filesystem::path& path, const CacheConfig* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open cache " + path.string());
  return load_cache(in, expected);
}

}  // namespace framesel
