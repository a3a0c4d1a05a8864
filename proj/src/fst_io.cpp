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

#include "framesel/fst_io.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "framesel/error.hpp"

namespace framesel {
namespace {

using nlohmann::json;

constexpr const char* kNonFiniteMarker = "\x01non-finite";

// Rewrites bare NaN / Infinity / -Infinity tokens and overflowing number
// literals outside string literals into a marker string so the record still
// parses.
std::string mark_nonfinite_tokens(const std::string& line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out.push_back(c);
      if (c == '\\' && i + 1 < line.size()) {
        out.push_back(line[++i]);
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out.push_back(c);
      continue;
    }
    std::size_t matched = 0;
    for (std::string_view tok : {"-Infinity", "Infinity", "NaN"}) {
      if (line.compare(i, tok.size(), tok) == 0) {
        matched = tok.size();
        break;
      }
    }
    if (matched == 0 && (c == '-' || std::isdigit(static_cast<unsigned char>(c)))) {
      // Literals such as 1e999 overflow to infinity.
      const std::size_t end = line.find_first_not_of("0123456789+-.eE", i);
      const std::string literal = line.substr(i, end == std::string::npos ? std::string::npos : end - i);
      if (!std::isfinite(std::strtod(literal.c_str(), nullptr))) matched = literal.size();
      if (matched == 0) {
        out += literal;
        i += literal.size() - 1;
        continue;
      }
    }
    if (matched == 0) {
      out.push_back(c);
      continue;
    }
    out += "\"\\u0001non-finite\"";
    i += matched - 1;
  }
  return out;
}

double number_at(const json& v, const char* field) {
  if (v.is_string() && v.get_ref<const std::string&>() == kNonFiniteMarker) {
    throw DataError(std::string("non-finite ") + field);
  }
  if (!v.is_number()) {
    throw DataError(std::string(field) + ": expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw DataError(std::string("non-finite ") + field);
  }
  return x;
}

const json& array_field(const json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_array()) throw DataError(std::string(key) + ": expected an array");
  return v;
}

}  // namespace

Trajectory trajectory_from_json(const json& record) {
  static const std::unordered_set<std::string> kAllowed = {"id",           "instruction",     "actions",
                                                           "gripper_dims", "visual_features", "stage_centers"};
  if (!record.is_object()) throw DataError("record is not an object");
  for (const auto& [key, _] : record.items()) {
    if (!kAllowed.contains(key)) throw DataError("unknown key \"" + key + "\"");
  }
  for (const char* key : {"id", "instruction", "actions", "gripper_dims"}) {
    if (!record.contains(key)) throw DataError(std::string("missing key \"") + key + "\"");
  }

  Trajectory traj;
  if (!record["id"].is_string()) throw DataError("id: expected a string");
  if (!record["instruction"].is_string()) throw DataError("instruction: expected a string");
  traj.id = record["id"].get<std::string>();
  traj.instruction = record["instruction"].get<std::string>();

  const auto& rows = array_field(record, "actions");
  const std::size_t T = rows.size();
  const std::size_t D = T == 0 || !rows[0].is_array() ? 0 : rows[0].size();
  std::vector<double> values;
  values.reserve(T * D);
  for (std::size_t t = 0; t < T; ++t) {
    if (!rows[t].is_array() || rows[t].size() != D) {
      throw DataError("actions: row " + std::to_string(t + 1) + " is not an array of " + std::to_string(D) +
                      " numbers");
    }
    for (const auto& v : rows[t]) values.push_back(number_at(v, "action"));
  }
  traj.actions = ActionMatrix(T, D, std::move(values));

  for (const auto& g : array_field(record, "gripper_dims")) {
    if (!g.is_number_integer()) throw DataError("gripper_dims: expected integers");
    traj.gripper_dims.push_back(g.get<int>());
  }

  if (record.contains("visual_features")) {
    std::vector<VisualFeature> feats;
    for (const auto& f : array_field(record, "visual_features")) {
      if (!f.is_object() || f.size() != 2 || !f.contains("frame") || !f.contains("vec")) {
        throw DataError("visual_features: entries must be {\"frame\", \"vec\"} objects");
      }
      if (!f["frame"].is_number_integer()) throw DataError("visual_features: frame must be an integer");
      VisualFeature vf;
      vf.frame = f["frame"].get<int>();
      for (const auto& v : array_field(f, "vec")) vf.vec.push_back(number_at(v, "visual feature"));
      feats.push_back(std::move(vf));
    }
    traj.visual_features = std::move(feats);
  }

  if (record.contains("stage_centers")) {
    std::vector<double> centers;
    for (const auto& v : array_field(record, "stage_centers")) centers.push_back(number_at(v, "stage center"));
    traj.stage_centers = std::move(centers);
  }
  return traj;
}

json trajectory_to_json(const Trajectory& traj) {
  json rows = json::array();
  for (std::size_t t = 0; t < traj.actions.frames(); ++t) {
    auto r = traj.actions.row(t);
    rows.push_back(json(std::vector<double>(r.begin(), r.end())));
  }
  json record = {
      {"id", traj.id},
      {"instruction", traj.instruction},
      {"actions", std::move(rows)},
      {"gripper_dims", traj.gripper_dims},
  };
  if (traj.visual_features) {
    json feats = json::array();
    for (const auto& f : *traj.visual_features) feats.push_back({{"frame", f.frame}, {"vec", f.vec}});
    record["visual_features"] = std::move(feats);
  }
  if (traj.stage_centers) record["stage_centers"] = *traj.stage_centers;
  return record;
}

Dataset parse_trajectory_stream(std::istream& in, std::string name) {
  Dataset dataset;
  dataset.name = std::move(name);
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded()) {
      record = json::parse(mark_nonfinite_tokens(line), nullptr, false);
      if (record.is_discarded()) throw ParseError(lineno, "malformed record");
    }

    Trajectory traj;
    try {
      traj = trajectory_from_json(record);
    } catch (const DataError& e) {
      throw ParseError(lineno, e.what());
    }
    auto violations = validate_trajectory(traj);
    if (!violations.empty()) {
      throw ParseError(lineno, "trajectory '" + traj.id + "': " + violations.front());
    }
    if (!ids.insert(traj.id).second) {
      throw ParseError(lineno, "duplicate trajectory id '" + traj.id + "'");
    }
    dataset.trajectories.push_back(std::move(traj));
  }
  return dataset;
}

Dataset read_trajectory_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return parse_trajectory_stream(in, path.stem().string());
}

void write_trajectory_stream(const Dataset& dataset, std::ostream& out) {
  for (const auto& traj : dataset.trajectories) {
    out << trajectory_to_json(traj).dump() << '\n';
  }
}

}  // namespace framesel
