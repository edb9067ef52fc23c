// Copyright 2026 The weakpol Authors. All Rights Reserved.
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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace weakpol {

using CsvRow = std::vector<std::string>;

/// A parsed CSV file. `line_numbers[i]` is the 1-based source line where row i starts.
struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;
  std::vector<std::size_t> line_numbers;

  std::optional<std::size_t> find(std::string_view column) const;
  /// Column index; throws Error naming the missing column.
  std::size_t index(std::string_view column) const;
};

/// RFC 4180 parsing. Lines whose first character is '#' outside a quoted
/// field are comments. Throws Error on an unterminated quote.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

/// Shortest decimal text that round-trips to the same double.
std::string format_exact(double value);
/// Fixed-point text with `digits` decimals.
std::string format_fixed(double value, int digits);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace weakpol
