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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace weakpol {

std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view text);

/// ASCII letters/digits and every non-ASCII byte count as word characters.
constexpr bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

/// True at text edges and wherever either neighbouring byte is a non-word character.
bool is_word_boundary(std::string_view text, std::size_t pos);

std::string ascii_lower(std::string_view text);
std::string ascii_upper(std::string_view text);
std::vector<std::string_view> split_whitespace(std::string_view text);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

struct PhraseHit {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t pattern = 0;

  bool operator==(const PhraseHit&) const = default;
};

/// Dictionary matcher over a fixed phrase list. Matching is ASCII
/// case-insensitive, anchored at word boundaries on both ends, and resolves
/// overlaps leftmost-longest. Immutable once built.
class PhraseMatcher {
 public:
  PhraseMatcher() = default;
  /// Patterns must be non-empty and distinct after ASCII lowercasing.
  explicit PhraseMatcher(std::vector<std::string> patterns);

  std::vector<PhraseHit> find_all(std::string_view text) const;

  std::size_t size() const { return patterns_.size(); }
  const std::string& pattern(std::size_t i) const { return patterns_[i]; }

 private:
  struct Node {
    std::vector<std::pair<unsigned char, int>> next;  // sorted by byte
    int terminal = -1;
  };
  int child(int node, unsigned char c) const;

  std::vector<std::string> patterns_;
  std::vector<Node> nodes_;
};

}  // namespace weakpol
