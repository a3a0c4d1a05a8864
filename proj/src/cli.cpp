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

#include "framesel/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "framesel/atomic_file.hpp"
#include "framesel/error.hpp"
#include "framesel/fst_io.hpp"
#include "framesel/numeric.hpp"
#include "framesel/prune_cache.hpp"
#include "framesel/schedule.hpp"
#include "framesel/synthetic.hpp"

namespace framesel::cli {
namespace {

using nlohmann::json;

std::string fmt(double x) { return format_double(x); }

std::vector<double> parse_ratio_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    const char* b = item.data();
    const char* e = b + item.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e) throw ConfigError("--ratios: cannot parse '" + item + "'");
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw ConfigError("--ratios: duplicate ratio");
  return out;
}

CacheConfig read_config(const std::string& path) {
  if (path.empty()) return CacheConfig{};
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config " + path + " is not valid JSON");
  return config_from_json(j);
}

void write_output(const std::string& path, std::ostream& stdout_stream,
                  const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(stdout_stream);
  } else {
    write_file_atomic(path, body);
  }
}

std::string record_line(const SampleRecord& r) {
  return "trajectory_id=" + r.trajectory_id + " active_ratio=" + fmt(r.active_ratio) +
         " original_t=" + std::to_string(r.original_t) + " remapped_t=" + std::to_string(r.remapped_t);
}

struct Options {
  // gen
  std::uint64_t seed = 0;
  int n = 0;
  // shared
  std::string input, out, config, cache, traj, csv;
  // fit-prior
  double subset_fraction = 0.05;
  int components = 3;
  // build-cache
  std::string ratios;
  unsigned jobs = 1;
  // inspect / remap / prune
  double ratio = 0.2;
  int t = 1;
  // schedule
  std::int64_t warmup = 5000;
  std::int64_t cycle = 5;
  std::int64_t steps = 12;
};

void cmd_gen(const Options& o) {
  GeneratorSpec spec;
  spec.seed = o.seed;
  spec.num_trajectories = o.n;
  const Dataset ds = generate(spec);
  write_file_atomic(o.out, [&](std::ostream& s) { write_trajectory_stream(ds, s); });
}

void cmd_fit_prior(const Options& o) {
  if (!(o.subset_fraction > 0.0 && o.subset_fraction <= 1.0)) {
    throw ConfigError("--subset-fraction must be in (0, 1]");
  }
  const Dataset ds = read_trajectory_file(o.input);
  const auto take = std::min<std::size_t>(
      static_cast<std::size_t>(ceil_count(o.subset_fraction * static_cast<double>(ds.trajectories.size()))),
      ds.trajectories.size());
  std::vector<double> centers;
  for (std::size_t i = 0; i < take; ++i) {
    const auto& sc = ds.trajectories[i].stage_centers;
    if (sc) centers.insert(centers.end(), sc->begin(), sc->end());
  }
  GmmFitOptions opts;
  opts.components = o.components;
  const GmmPrior prior = fit_gmm_1d(centers, opts);
  write_file_atomic(o.out, [&](std::ostream& s) { s << prior_to_json(prior).dump() << '\n'; });
}

void cmd_build_cache(const Options& o) {
  CacheConfig config = read_config(o.config);
  if (!o.ratios.empty()) config.ratios = parse_ratio_list(o.ratios);
  const Dataset ds = read_trajectory_file(o.input);
  const PruneCache cache = build_cache(ds, config, nullptr, o.jobs);
  save_cache_file(cache, o.out);
}

void cmd_inspect(const Options& o, std::ostream& out) {
  const PruneCache cache = load_cache_file(o.cache);
  const CacheEntry& e = cache.entry(o.traj);
  const PrunedView& v = cache.view(o.traj, o.ratio);
  std::vector<char> kept(e.scores.length(), 0);
  for (int t : v.retained) kept[t - 1] = 1;
  write_output(o.csv, out, [&](std::ostream& s) {
    s << "t,avi_norm,vac_norm,tpi_norm,gripper_signal,combined,retained\n";
    const auto& f = e.scores;
    for (std::size_t i = 0; i < f.length(); ++i) {
      s << (i + 1) << ',' << fmt(f.avi_norm[i]) << ',' << fmt(f.vac_norm[i]) << ',' << fmt(f.tpi_norm[i]) << ','
        << fmt(f.gripper_signal_norm[i]) << ',' << fmt(f.combined[i]) << ',' << int(kept[i]) << '\n';
    }
  });
}

void cmd_remap(const Options& o, std::ostream& out) {
  const PruneCache cache = load_cache_file(o.cache);
  out << record_line(serve_at_ratio(cache, o.ratio, o.traj, o.t)) << '\n';
}

void cmd_schedule(const Options& o, std::ostream& out) {
  const Schedule s{o.warmup, o.ratio, o.cycle};
  s.validate();
  for (std::int64_t step = 1; step <= o.steps; ++step) out << step << ' ' << fmt(active_ratio(step, s)) << '\n';
}

void cmd_stats(const Options& o, std::ostream& out) {
  const PruneCache cache = load_cache_file(o.cache);
  out << "config_hash=" << cache.config_hash << '\n';
  out << "trajectories=" << cache.entries.size() << " flagged=" << cache.flags.size() << '\n';
  out << "ratio,mean_actual_ratio,min_actual_ratio,max_actual_ratio,mean_forced,min_forced,max_forced\n";
  for (double r : cache.config.ratios) {
    double sum = 0.0, lo = 1.0, hi = 0.0;
    double fsum = 0.0;
    std::size_t flo = SIZE_MAX, fhi = 0;
    for (const auto& [id, e] : cache.entries) {
      const double a = e.find_view(r)->actual_ratio;
      sum += a;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
      fsum += static_cast<double>(e.forced.size());
      flo = std::min(flo, e.forced.size());
      fhi = std::max(fhi, e.forced.size());
    }
    const double n = static_cast<double>(cache.entries.size());
    if (cache.entries.empty()) {
      out << fmt(r) << ",,,,,,\n";
      continue;
    }
    out << fmt(r) << ',' << fmt(sum / n) << ',' << fmt(lo) << ',' << fmt(hi) << ',' << fmt(fsum / n) << ',' << flo
        << ',' << fhi << '\n';
  }
}

void cmd_score(const Options& o, std::ostream& out) {
  const CacheConfig config = read_config(o.config);
  config.importance.validate();
  const Dataset ds = read_trajectory_file(o.input);
  const GmmPrior* prior = config.prior ? &*config.prior : nullptr;
  std::vector<FrameScores> all;
  for (const auto& traj : ds.trajectories) all.push_back(score_trajectory(traj, config.importance, prior, nullptr));
  write_output(o.out, out, [&](std::ostream& s) {
    s << "trajectory_id,t,avi_raw,avi_norm,vac_raw,vac_norm,tpi_norm,gripper_signal,combined\n";
    for (const auto& f : all) {
      for (std::size_t i = 0; i < f.length(); ++i) {
        s << f.trajectory_id << ',' << (i + 1) << ',' << fmt(f.avi_raw[i]) << ',' << fmt(f.avi_norm[i]) << ','
          << fmt(f.vac_raw[i]) << ',' << fmt(f.vac_norm[i]) << ',' << fmt(f.tpi_norm[i]) << ','
          << fmt(f.gripper_signal_norm[i]) << ',' << fmt(f.combined[i]) << '\n';
      }
    }
  });
}

void cmd_prune(const Options& o, std::ostream& out) {
  CacheConfig config = read_config(o.config);
  config.ratios = {o.ratio};
  const Dataset ds = read_trajectory_file(o.input);
  const PruneCache cache = build_cache(ds, config, nullptr, 1);
  write_output(o.out, out, [&](std::ostream& s) {
    s << "trajectory_id,target_ratio,actual_ratio,retained\n";
    for (const auto& traj : ds.trajectories) {
      const PrunedView& v = cache.view(traj.id, o.ratio);
      s << traj.id << ',' << fmt(v.target_ratio) << ',' << fmt(v.actual_ratio) << ',';
      for (std::size_t i = 0; i < v.retained.size(); ++i) s << (i ? " " : "") << v.retained[i];
      s << '\n';
    }
  });
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frame importance scoring, ratio-aware pruning and index remapping for demonstration datasets",
               "framesel"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", FRAMESEL_VERSION);
  Options o;

  auto* gen = app.add_subcommand("gen", "Write a synthetic trajectory corpus");
  gen->add_option("--seed", o.seed, "Generator seed")->required();
  gen->add_option("--n", o.n, "Number of trajectories")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("--out", o.out, "Output FST file")->required();

  auto* fit = app.add_subcommand("fit-prior", "Fit the progress prior on stage centers of a leading subset");
  fit->add_option("--input", o.input, "Input FST file")->required();
  fit->add_option("--subset-fraction", o.subset_fraction, "Fraction of leading trajectories used")->capture_default_str();
  fit->add_option("--M", o.components, "Mixture components")->capture_default_str();
  fit->add_option("--out", o.out, "Output prior JSON")->required();

  auto* build = app.add_subcommand("build-cache", "Score and prune a dataset at every ratio and save the cache");
  build->add_option("--input", o.input, "Input FST file")->required();
  build->add_option("--config", o.config, "Config JSON (defaults when omitted)");
  build->add_option("--ratios", o.ratios, "Comma-separated retention ratios");
  build->add_option("--out", o.out, "Output cache file")->required();
  build->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  auto* inspect = app.add_subcommand("inspect", "Per-frame score curves and retention for one trajectory as CSV");
  inspect->add_option("--cache", o.cache, "Cache file")->required();
  inspect->add_option("--traj", o.traj, "Trajectory id")->required();
  inspect->add_option("--ratio", o.ratio, "Retention ratio")->required();
  inspect->add_option("--csv", o.csv, "Output CSV (stdout when omitted)");

  auto* rm = app.add_subcommand("remap", "Map a requested timestep to its retained frame");
  rm->add_option("--cache", o.cache, "Cache file")->required();
  rm->add_option("--traj", o.traj, "Trajectory id")->required();
  rm->add_option("--ratio", o.ratio, "Retention ratio")->required();
  rm->add_option("--t", o.t, "1-based timestep")->required();

  auto* sched = app.add_subcommand("schedule", "Print the active ratio for each training step");
  sched->add_option("--warmup", o.warmup, "Full-frame warmup steps")->capture_default_str();
  sched->add_option("--ratio", o.ratio, "Pruned-view retention ratio")->capture_default_str();
  sched->add_option("--cycle", o.cycle, "Pruned steps per full-frame anchor step")->capture_default_str();
  sched->add_option("--steps", o.steps, "Number of steps to print")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Retention statistics per cached ratio");
  stats->add_option("--cache", o.cache, "Cache file")->required();

  auto* score = app.add_subcommand("score", "Per-frame importance components for every trajectory as CSV");
  score->add_option("--input", o.input, "Input FST file")->required();
  score->add_option("--config", o.config, "Config JSON (defaults when omitted)");
  score->add_option("--out", o.out, "Output CSV (stdout when omitted)");

  auto* prn = app.add_subcommand("prune", "Retained frames of every trajectory at one ratio as CSV");
  prn->add_option("--input", o.input, "Input FST file")->required();
  prn->add_option("--config", o.config, "Config JSON (defaults when omitted)");
  prn->add_option("--ratio", o.ratio, "Retention ratio")->required();
  prn->add_option("--out", o.out, "Output CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << FRAMESEL_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "framesel: usage error: " << msg << '\n';
    return kUsage;
  }

  try {
    if (gen->parsed()) cmd_gen(o);
    else if (fit->parsed()) cmd_fit_prior(o);
    else if (build->parsed()) cmd_build_cache(o);
    else if (inspect->parsed()) cmd_inspect(o, out);
    else if (rm->parsed()) cmd_remap(o, out);
    else if (sched->parsed()) cmd_schedule(o, out);
    else if (stats->parsed()) cmd_stats(o, out);
    else if (score->parsed()) cmd_score(o, out);
    else if (prn->parsed()) cmd_prune(o, out);
  } catch (const ConfigError& e) {
    err << "framesel: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "framesel: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"framesel"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace framesel::cli
