// Copyright 2026 The spinq Authors
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

#include <string>
#include <string_view>

namespace spinq {

/// Lower-case hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// Writes `content` to a temporary file next to `path`, then renames it over
/// `path`. Throws SpinqError on failure.
void write_file_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

/// Decimal with 17 significant digits ("%.17g"); nan and inf spelled out.
std::string format_real(double v);

}  // namespace spinq
