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

#include "weakpol/common.hpp"

#include <cmath>

#include "weakpol/matrix.hpp"
#include "weakpol/rng.hpp"

namespace weakpol {

std::string_view to_string(Drug drug) {
  switch (drug) {
    case Drug::ecstasy: return "ecstasy";
    case Drug::ghb: return "ghb";
    case Drug::twocb: return "2cb";
  }
  return "?";
}

std::optional<Drug> parse_drug(std::string_view name) {
  if (name == "ecstasy") return Drug::ecstasy;
  if (name == "ghb") return Drug::ghb;
  if (name == "2cb" || name == "twocb" || name == "2c-b") return Drug::twocb;
  return std::nullopt;
}

std::string_view to_string(Polarity polarity) {
  switch (polarity) {
    case Polarity::positive: return "positive";
    case Polarity::negative: return "negative";
    case Polarity::context: return "context";
    case Polarity::uncertain: return "uncertain";
  }
  return "?";
}

std::optional<Polarity> parse_polarity(std::string_view name) {
  if (name == "positive") return Polarity::positive;
  if (name == "negative") return Polarity::negative;
  if (name == "context") return Polarity::context;
  if (name == "uncertain") return Polarity::uncertain;
  return std::nullopt;
}

std::string_view to_string(Source source) {
  return source == Source::slang ? "slang" : "concept";
}

std::optional<Source> parse_source(std::string_view name) {
  if (name == "slang") return Source::slang;
  if (name == "concept") return Source::concept_;
  return std::nullopt;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int poisson_from_uniform(double lambda, double u) {
  double p = std::exp(-lambda);
  double cdf = p;
  int k = 0;
  while (u >= cdf && k < 64) {
    ++k;
    p *= lambda / k;
    cdf += p;
  }
  return k;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw Error("Matrix::append_row: width mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> indices) const {
  Matrix out(rows_, indices.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < indices.size(); ++j) out(r, j) = (*this)(r, indices[j]);
  return out;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

}  // namespace weakpol
