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

#include "framesel/kernels.hpp"

namespace framesel::kernels {

namespace scalar {
void diff_norms(std::span<const double> columns, std::size_t frames, std::size_t dims, std::span<double> out);
void lookahead_meanvar(std::span<const double> columns, std::size_t frames, std::size_t dims, std::size_t k,
                       std::span<double> out);
void abs_diff_max(std::span<const double> columns, std::size_t frames, std::span<const int> selected,
                  std::span<double> out);
MinMax min_max(std::span<const double> x);
void affine_normalize(std::span<const double> x, double lo, double range, std::span<double> out);
void combine(std::span<const double> avi, std::span<const double> vac, std::span<const double> tpi,
             std::span<const double> signal, CombineWeights w, std::span<double> out);

// Single-frame bodies shared with the SIMD tails.
double diff_norm_at(const double* columns, std::size_t frames, std::size_t dims, std::size_t i);
double lookahead_meanvar_at(const double* columns, std::size_t frames, std::size_t dims, std::size_t k,
                            std::size_t i);
double abs_diff_max_at(const double* columns, std::size_t frames, std::span<const int> selected, std::size_t i);
}  // namespace scalar

#if defined(FRAMESEL_HAVE_AVX2)
namespace avx2 {
void diff_norms(std::span<const double> columns, std::size_t frames, std::size_t dims, std::span<double> out);
void lookahead_meanvar(std::span<const double> columns, std::size_t frames, std::size_t dims, std::size_t k,
                       std::span<double> out);
void abs_diff_max(std::span<const double> columns, std::size_t frames, std::span<const int> selected,
                  std::span<double> out);
MinMax min_max(std::span<const double> x);
void affine_normalize(std::span<const double> x, double lo, double range, std::span<double> out);
void combine(std::span<const double> avi, std::span<const double> vac, std::span<const double> tpi,
             std::span<const double> signal, CombineWeights w, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace framesel::kernels
