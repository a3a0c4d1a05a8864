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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace framesel {

/// Dense T x D action matrix, row-major, one row per frame.
///
/// Rows are addressed by 0-based storage position; everything that names a
/// frame (retained sets, transitions, feature frames) uses 1-based t instead.
class ActionMatrix {
 public:
  ActionMatrix() = default;
  ActionMatrix(std::size_t frames, std::size_t dims);
  ActionMatrix(std::size_t frames, std::size_t dims, std::vector<double> values);
  static ActionMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t frames() const noexcept { return frames_; }
  std::size_t dims() const noexcept { return dims_; }

  double& operator()(std::size_t row, std::size_t col) { return values_[row * dims_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * dims_ + col]; }

  std::span<const double> row(std::size_t r) const { return {values_.data() + r * dims_, dims_}; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * dims_, dims_}; }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const ActionMatrix&) const = default;

 private:
  std::size_t frames_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> values_;
};

/// Column-major copy of an ActionMatrix: column j holds dimension j over time.
/// This is the layout the scoring kernels stream through.
class ActionColumns {
 public:
  explicit ActionColumns(const ActionMatrix& actions);

  std::size_t frames() const noexcept { return frames_; }
  std::size_t dims() const noexcept { return dims_; }
  const double* data() const noexcept { return values_.data(); }
  std::span<const double> column(std::size_t j) const { return {values_.data() + j * frames_, frames_}; }

 private:
  std::size_t frames_;
  std::size_t dims_;
  std::vector<double> values_;
};

struct VisualFeature {
  int frame = 0;  // 1-based
  std::vector<double> vec;

  bool operator==(const VisualFeature&) const = default;
};

struct Trajectory {
  std::string id;
  std::string instruction;
  ActionMatrix actions;
  std::vector<int> gripper_dims;
  std::optional<std::vector<VisualFeature>> visual_features;
  std::optional<std::vector<double>> stage_centers;

  std::size_t length() const noexcept { return actions.frames(); }
  bool operator==(const Trajectory&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<Trajectory> trajectories;

  const Trajectory* find(const std::string& id) const;
  bool operator==(const Dataset&) const = default;
};

/// Returns one human-readable line per violated invariant, each starting with
/// the offending field name. Empty means valid.
std::vector<std::string> validate_trajectory(const Trajectory& traj);

/// Throws DataError naming the trajectory id and the first violation.
void require_valid(const Trajectory& traj);

/// Validates every trajectory and id uniqueness.
void require_valid(const Dataset& dataset);

}  // namespace framesel
