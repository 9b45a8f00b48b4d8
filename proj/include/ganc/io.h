// Copyright 2026 The GANC Authors.
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

// Small file and text helpers shared by the artifact writers.

#ifndef GANC_IO_H_
#define GANC_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ganc {

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

// Strict numeric parsing of a whole field; returns false on trailing junk.
bool ParseInt64(std::string_view text, std::int64_t& out);
bool ParseDouble(std::string_view text, double& out);

std::string_view Trim(std::string_view text);

// Splits on a (possibly multi-character) separator. Empty fields are kept.
std::vector<std::string_view> SplitFields(std::string_view line,
                                          std::string_view separator);

std::string Sha256Hex(std::string_view data);

std::string ReadFile(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it into place, so a
// failed run never leaves a truncated artifact behind.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view contents);

}  // namespace ganc

#endif  // GANC_IO_H_
