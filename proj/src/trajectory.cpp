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

#include "framesel/trajectory.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include "framesel/error.hpp"

namespace framesel {

ActionMatrix::ActionMatrix(std::size_t frames, std::size_t dims)
    : frames_(frames), dims_(dims), values_(frames * dims, 0.0) {}

ActionMatrix::ActionMatrix(std::size_t frames, std::size_t dims, std::vector<double> values)
    : frames_(frames), dims_(dims), values_(std::move(values)) {
  if (values_.size() != frames_ * dims_) {
    throw DataError("actions: value count does not match frames x dims");
  }
}

ActionMatrix ActionMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t dims = rows.empty() ? 0 : rows.front().size();
  ActionMatrix m(rows.size(), dims);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dims) {
      throw DataError("actions: ragged rows (row " + std::to_string(r + 1) + " has " +
                      std::to_string(rows[r].size()) + " entries, expected " + std::to_string(dims) + ")");
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

ActionColumns::ActionColumns(const ActionMatrix& actions)
    : frames_(actions.frames()), dims_(actions.dims()), values_(frames_ * dims_) {
  for (std::size_t t = 0; t < frames_; ++t) {
    for (std::size_t j = 0; j < dims_; ++j) {
      values_[j * frames_ + t] = actions(t, j);
    }
  }
}

const Trajectory* Dataset::find(const std::string& id) const {
  for (const auto& t : trajectories) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

std::vector<std::string> validate_trajectory(const Trajectory& traj) {
  std::vector<std::string> out;
  const std::size_t T = traj.actions.frames();
  const std::size_t D = traj.actions.dims();

  if (T < 2) out.push_back("actions: need at least 2 frames, got " + std::to_string(T));
  if (D < 1) out.push_back("actions: need at least 1 dimension");
  for (double v : traj.actions.values()) {
    if (!std::isfinite(v)) {
      out.push_back("actions: non-finite action");
      break;
    }
  }

  std::set<int> seen;
  for (int g : traj.gripper_dims) {
    if (g < 0 || static_cast<std::size_t>(g) >= D) {
      out.push_back("gripper_dims: index " + std::to_string(g) + " outside [0, " + std::to_string(D) + ")");
    } else if (!seen.insert(g).second) {
      out.push_back("gripper_dims: duplicate index " + std::to_string(g));
    }
  }

  if (traj.visual_features) {
    const auto& feats = *traj.visual_features;
    std::size_t width = feats.empty() ? 0 : feats.front().vec.size();
    if (!feats.empty() && width == 0) out.push_back("visual_features: empty feature vector");
    int prev = 0;
    for (const auto& f : feats) {
      if (f.frame < 1 || static_cast<std::size_t>(f.frame) > T) {
        out.push_back("visual_features: frame " + std::to_string(f.frame) + " outside [1, " + std::to_string(T) +
                      "]");
      }
      if (f.frame <= prev) {
        out.push_back("visual_features: frame indices not strictly increasing at frame " + std::to_string(f.frame));
      }
      prev = f.frame;
      if (f.vec.size() != width) {
        out.push_back("visual_features: vector length " + std::to_string(f.vec.size()) + " at frame " +
                      std::to_string(f.frame) + " differs from " + std::to_string(width));
      }
      for (double v : f.vec) {
        if (!std::isfinite(v)) {
          out.push_back("visual_features: non-finite value at frame " + std::to_string(f.frame));
          break;
        }
      }
    }
  }

  if (traj.stage_centers) {
    for (double c : *traj.stage_centers) {
      if (!(c >= 0.0 && c <= 1.0)) {
        out.push_back("stage_centers: value " + std::to_string(c) + " outside range [0, 1]");
      }
    }
  }
  return out;
}

void require_valid(const Trajectory& traj) {
  auto violations = validate_trajectory(traj);
  if (!violations.empty()) {
    throw DataError("trajectory '" + traj.id + "': " + violations.front());
  }
}

void require_valid(const Dataset& dataset) {
  std::unordered_set<std::string> ids;
  for (const auto& t : dataset.trajectories) {
    require_valid(t);
    if (!ids.insert(t.id).second) {
      throw DataError("duplicate trajectory id '" + t.id + "'");
    }
  }
}

}  // namespace framesel
