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

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace weakpol {

/// Invalid input or violated precondition. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written. The CLI maps it to exit code 2.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class Drug { ecstasy, ghb, twocb };
inline constexpr std::array<Drug, 3> kAllDrugs{Drug::ecstasy, Drug::ghb, Drug::twocb};

std::string_view to_string(Drug drug);
std::optional<Drug> parse_drug(std::string_view name);

/// Polarity of a term or tweet. `uncertain` only exists for consolidated terms.
enum class Polarity { positive, negative, context, uncertain };

std::string_view to_string(Polarity polarity);
std::optional<Polarity> parse_polarity(std::string_view name);

enum class Source { slang, concept_ };

std::string_view to_string(Source source);
std::optional<Source> parse_source(std::string_view name);

/// Fixed embedding width used throughout the feature pipeline.
inline constexpr std::size_t kEmbeddingDim = 30;

}  // namespace weakpol
