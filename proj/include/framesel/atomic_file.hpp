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
#include <functional>
#include <iosfwd>

namespace framesel {

/// Writes through a sibling temporary file and renames it over `path`, so the
/// destination is either the complete new content or untouched.
void write_file_atomic(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

}  // namespace framesel
