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

// Compiled with -mavx2 only; dispatch.cpp calls into here after checking CPUID.
// No FMA: every lane performs the same mul-then-add sequence as the scalar code.

#include <immintrin.h>

#include <algorithm>

#include "kernel_impls.hpp"

namespace framesel::kernels::avx2 {

void diff_norms(std::span<const double> columns, std::size_t frames, std::size_t dims, std::span<double> out) {
  const double* cols = columns.data();
  std::size_t i = 1;
  for (; i + 4 <= frames; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < dims; ++j) {
      const double* c = cols + j * frames;
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(c + i - 1));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    _mm256_storeu_pd(out.data() + i, _mm256_sqrt_pd(acc));
  }
  for (; i < frames; ++i) out[i] = scalar::diff_norm_at(cols, frames, dims, i);
  if (frames >= 2) out[0] = out[1];
}

void lookahead_meanvar(std::span<const double> columns, std::size_t frames, std::size_t dims, std::size_t k,
                       std::span<double> out) {
  const double* cols = columns.data();
  std::size_t i = 0;
  // Four frames at a time while all four windows are full (i + 3 + k <= frames - 1).
  if (k >= 1 && frames > k + 3) {
    const __m256d n = _mm256_set1_pd(static_cast<double>(k));
    const __m256d ndims = _mm256_set1_pd(static_cast<double>(dims));
    for (; i + 3 + k <= frames - 1; i += 4) {
      __m256d acc = _mm256_setzero_pd();
      for (std::size_t j = 0; j < dims; ++j) {
        const double* c = cols + j * frames + i;
        __m256d s = _mm256_setzero_pd();
        for (std::size_t m = 1; m <= k; ++m) s = _mm256_add_pd(s, _mm256_loadu_pd(c + m));
        const __m256d mean = _mm256_div_pd(s, n);
        __m256d v = _mm256_setzero_pd();
        for (std::size_t m = 1; m <= k; ++m) {
          const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(c + m), mean);
          v = _mm256_add_pd(v, _mm256_mul_pd(d, d));
        }
        acc = _mm256_add_pd(acc, _mm256_div_pd(v, n));
      }
      _mm256_storeu_pd(out.data() + i, _mm256_div_pd(acc, ndims));
    }
  }
  for (; i < frames; ++i) out[i] = scalar::lookahead_meanvar_at(cols, frames, dims, k, i);
}

void abs_diff_max(std::span<const double> columns, std::size_t frames, std::span<const int> selected,
                  std::span<double> out) {
  if (frames == 0) return;
  const double* cols = columns.data();
  const __m256d sign = _mm256_set1_pd(-0.0);
  out[0] = 0.0;
  std::size_t i = 1;
  for (; i + 4 <= frames; i += 4) {
    __m256d m = _mm256_setzero_pd();
    for (int g : selected) {
      const double* c = cols + static_cast<std::size_t>(g) * frames;
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(c + i), _mm256_loadu_pd(c + i - 1));
      m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
    }
    _mm256_storeu_pd(out.data() + i, m);
  }
  for (; i < frames; ++i) out[i] = scalar::abs_diff_max_at(cols, frames, selected, i);
}

MinMax min_max(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) return scalar::min_max(x);
  __m256d lo = _mm256_loadu_pd(x.data());
  __m256d hi = lo;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x.data() + i);
    lo = _mm256_min_pd(lo, v);
    hi = _mm256_max_pd(hi, v);
  }
  alignas(32) double l[4];
  alignas(32) double h[4];
  _mm256_store_pd(l, lo);
  _mm256_store_pd(h, hi);
  MinMax r{l[0], h[0]};
  for (int k = 1; k < 4; ++k) {
    r.min = std::min(r.min, l[k]);
    r.max = std::max(r.max, h[k]);
  }
  for (; i < n; ++i) {
    r.min = std::min(r.min, x[i]);
    r.max = std::max(r.max, x[i]);
  }
  return r;
}

void affine_normalize(std::span<const double> x, double lo, double range, std::span<double> out) {
  const std::size_t n = x.size();
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vrange = _mm256_set1_pd(range);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(_mm256_sub_pd(v, vlo), vrange));
  }
  for (; i < n; ++i) out[i] = (x[i] - lo) / range;
}

void combine(std::span<const double> avi, std::span<const double> vac, std::span<const double> tpi,
             std::span<const double> signal, CombineWeights w, std::span<double> out) {
  const std::size_t n = avi.size();
  const __m256d a = _mm256_set1_pd(w.alpha);
  const __m256d b = _mm256_set1_pd(w.beta);
  const __m256d c = _mm256_set1_pd(w.gamma);
  const __m256d g = _mm256_set1_pd(w.gripper);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d base = _mm256_add_pd(_mm256_mul_pd(a, _mm256_loadu_pd(avi.data() + i)),
                                 _mm256_mul_pd(b, _mm256_loadu_pd(vac.data() + i)));
    base = _mm256_add_pd(base, _mm256_mul_pd(c, _mm256_loadu_pd(tpi.data() + i)));
    const __m256d factor = _mm256_add_pd(one, _mm256_mul_pd(g, _mm256_loadu_pd(signal.data() + i)));
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(base, factor));
  }
  for (; i < n; ++i) {
    const double base = w.alpha * avi[i] + w.beta * vac[i] + w.gamma * tpi[i];
    out[i] = base * (1.0 + w.gripper * signal[i]);
  }
}

}  // namespace framesel::kernels::avx2
