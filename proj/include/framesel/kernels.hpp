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
#include <span>
#include <vector>

// Data-parallel inner loops of frame scoring.
//
// Every kernel has a scalar reference implementation and, where the build and
// the CPU allow it, a SIMD variant. Variants vectorise across frames and keep
// the reference's per-element operation order, so results are bit-identical
// to the scalar path (the test suite checks this). The active table is picked
// once at startup from CPU features and can be overridden with select_isa().

namespace framesel::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa) noexcept;

struct MinMax {
  double min;
  double max;
};

struct CombineWeights {
  double alpha;
  double beta;
  double gamma;
  double gripper;
};

struct KernelTable {
  Isa isa;

  // Column-major action data, `frames` rows per column. out has `frames` slots.
  // out[i] = ||a_i - a_{i-1}||_2 for i >= 1; out[0] = out[1].
  void (*diff_norms)(std::span<const double> columns, std::size_t frames, std::size_t dims, std::span<double> out);

  // out[i] = mean over dims of the population variance of rows i+1 .. min(i+k, frames-1);
  // 0 when that window is empty.
  void (*lookahead_meanvar)(std::span<const double> columns, std::size_t frames, std::size_t dims, std::size_t k,
                            std::span<double> out);

  // out[i] = max over selected columns of |c[i] - c[i-1]|; out[0] = 0.
  void (*abs_diff_max)(std::span<const double> columns, std::size_t frames, std::span<const int> selected,
                       std::span<double> out);

  MinMax (*min_max)(std::span<const double> x);

  // out = (x - lo) / range
  void (*affine_normalize)(std::span<const double> x, double lo, double range, std::span<double> out);

  // out = (alpha*avi + beta*vac + gamma*tpi) * (1 + gripper*signal)
  void (*combine)(std::span<const double> avi, std::span<const double> vac, std::span<const double> tpi,
                  std::span<const double> signal, CombineWeights w, std::span<double> out);
};

const KernelTable& scalar_kernels() noexcept;

/// Table for `isa`, or nullptr when it was not compiled in or the CPU lacks it.
const KernelTable* kernels_for(Isa isa) noexcept;

/// ISAs usable on this machine, scalar first.
std::vector<Isa> available_isas();

const KernelTable& active_kernels() noexcept;

/// Overrides the runtime choice. Throws std::invalid_argument if unavailable.
void select_isa(Isa isa);

}  // namespace framesel::kernels
