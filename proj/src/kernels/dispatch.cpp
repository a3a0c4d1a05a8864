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

#include <atomic>
#include <stdexcept>

#include "kernel_impls.hpp"

namespace framesel::kernels {
namespace {

constexpr KernelTable kScalar{
    Isa::scalar,         scalar::diff_norms,       scalar::lookahead_meanvar, scalar::abs_diff_max,
    scalar::min_max,     scalar::affine_normalize, scalar::combine,
};

#if defined(FRAMESEL_HAVE_AVX2)
constexpr KernelTable kAvx2{
    Isa::avx2,         avx2::diff_norms,       avx2::lookahead_meanvar, avx2::abs_diff_max,
    avx2::min_max,     avx2::affine_normalize, avx2::combine,
};

bool cpu_has_avx2() noexcept {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#endif

const KernelTable* detect() noexcept {
#if defined(FRAMESEL_HAVE_AVX2)
  if (cpu_has_avx2()) return &kAvx2;
#endif
  return &kScalar;
}

std::atomic<const KernelTable*>& active_slot() noexcept {
  static std::atomic<const KernelTable*> slot{detect()};
  return slot;
}

}  // namespace

const char* isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_kernels() noexcept { return kScalar; }

const KernelTable* kernels_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
    case Isa::avx2:
#if defined(FRAMESEL_HAVE_AVX2)
      return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::scalar};
  if (kernels_for(Isa::avx2) != nullptr) out.push_back(Isa::avx2);
  return out;
}

const KernelTable& active_kernels() noexcept { return *active_slot().load(std::memory_order_acquire); }

void select_isa(Isa isa) {
  const KernelTable* table = kernels_for(isa);
  if (table == nullptr) {
    throw std::invalid_argument(std::string("kernel set '") + isa_name(isa) + "' is not available on this machine");
  }
  active_slot().store(table, std::memory_order_release);
}

}  // namespace framesel::kernels
