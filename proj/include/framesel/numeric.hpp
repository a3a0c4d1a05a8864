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

#include <cstdint>
#include <span>
#include <string>

namespace framesel {

// Counts derived from ratio products such as r*T or (1-r)*T land a few ulps
// off the intended integer (0.29 * 100 == 28.999999999999996). These round
// to the nearest integer when within a relative 1e-9 of it.
std::int64_t floor_count(double x);
std::int64_t ceil_count(double x);

/// Shortest decimal string that parses back to exactly `x`.
/// Locale independent.
std::string format_double(double x);

/// Linear-interpolation percentile (p in [0, 100]) of a non-empty sample.
double percentile_linear(std::span<const double> values, double p);

}  // namespace framesel
