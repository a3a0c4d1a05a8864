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

#include <algorithm>
#include <cmath>

#include "kernel_impls.hpp"

namespace framesel::kernels::scalar {

double diff_norm_at(const double* columns, std::size_t frames, std::size_t dims, std::size_t i) {
  double acc = 0.0;
  for (std::size_t j = 0; j < dims; ++j) {
    const double* c = columns + j * frames;
    const double d = c[i] - c[i - 1];
    acc = acc + d * d;
  }
  return std::sqrt(acc);
}

void diff_norms(std::span<const double> columns, std::size_t frames, std::size_t dims, std::span<double> out) {
  for (std::size_t i = 1; i < frames; ++i) out[i] = diff_norm_at(columns.data(), frames, dims, i);
  if (frames >= 2) out[0] = out[1];
}

double lookahead_meanvar_at(const double* columns, std::size_t frames, std::size_t dims, std::size_t k,
                            std::size_t i) {
  const std::size_t last = std::min(i + k, frames - 1);
  if (last <= i) return 0.0;
  const double n = static_cast<double>(last - i);
  double acc = 0.0;
  for (std::size_t j = 0; j < dims; ++j) {
    const double* c = columns + j * frames;
    double s = 0.0;
    for (std::size_t m = i + 1; m <= last; ++m) s = s + c[m];
    const double mean = s / n;
    double v = 0.0;
    for (std::size_t m = i + 1; m <= last; ++m) {
      const double d = c[m] - mean;
      v = v + d * d;
    }
    acc = acc + v / n;
  }
  return acc / static_cast<double>(dims);
}

void lookahead_meanvar(std::span<const double> columns, std::size_t frames, std::size_t dims, std::size_t k,
                       std::span<double> out) {
  for (std::size_t i = 0; i < frames; ++i) out[i] = lookahead_meanvar_at(columns.data(), frames, dims, k, i);
}

double abs_diff_max_at(const double* columns, std::size_t frames, std::span<const int> selected, std::size_t i) {
  double m = 0.0;
  for (int g : selected) {
    const double* c = columns + static_cast<std::size_t>(g) * frames;
    m = std::max(m, std::abs(c[i] - c[i - 1]));
  }
  return m;
}

void abs_diff_max(std::span<const double> columns, std::size_t frames, std::span<const int> selected,
                  std::span<double> out) {
  if (frames == 0) return;
  out[0] = 0.0;
  for (std::size_t i = 1; i < frames; ++i) out[i] = abs_diff_max_at(columns.data(), frames, selected, i);
}

MinMax min_max(std::span<const double> x) {
  MinMax r{x[0], x[0]};
  for (double v : x) {
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  }
  return r;
}

void affine_normalize(std::span<const double> x, double lo, double range, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - lo) / range;
}

void combine(std::span<const double> avi, std::span<const double> vac, std::span<const double> tpi,
             std::span<const double> signal, CombineWeights w, std::span<double> out) {
  for (std::size_t i = 0; i < avi.size(); ++i) {
    const double base = w.alpha * avi[i] + w.beta * vac[i] + w.gamma * tpi[i];
    out[i] = base * (1.0 + w.gripper * signal[i]);
  }
}

}  // namespace framesel::kernels::scalar
