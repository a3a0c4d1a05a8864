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

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "framesel/trajectory.hpp"

namespace framesel {

// FST: UTF-8 text, one JSON object per line with keys
//   "id", "instruction", "actions", "gripper_dims"
// and optionally "visual_features" ([{"frame", "vec"}]) and "stage_centers".
// Unknown keys are rejected. Bare NaN / Infinity tokens (as emitted by
// Python's json module) are recognised so they can be reported as
// non-finite values instead of generic syntax errors.

/// Parses every record, validating each trajectory and id uniqueness.
/// Throws ParseError carrying the 1-based line number.
Dataset parse_trajectory_stream(std::istream& in, std::string name = {});
Dataset read_trajectory_file(const std::filesystem::path& path);

void write_trajectory_stream(const Dataset& dataset, std::ostream& out);

nlohmann::json trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const nlohmann::json& record);

}  // namespace framesel
