// Copyright 2026 The emachine Authors
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

#include "kernels_internal.hpp"

namespace emachine::kernels::detail {
namespace {

void accumulate_matches(std::span<const Token> row, Token token, double weight,
                        std::span<double> s) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    s[i] += row[i] == token ? weight : 0.0;
  }
}

void modulate(std::span<const double> s, std::span<const double> e, double a,
              std::span<double> se) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double bias = a * e[i];
    const double gain = 1.0 + bias;
    se[i] = s[i] * gain;
  }
}

void next_e(std::span<const double> s, double c, std::span<double> e) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    e[i] = s[i] > e[i] ? s[i] : c * e[i];
  }
}

double max_value(std::span<const double> values) {
  double best = 0.0;
  for (double v : values) best = v > best ? v : best;
  return best;
}

}  // namespace

const KernelTable kScalarTable{Isa::Scalar, accumulate_matches, modulate, next_e, max_value};

}  // namespace emachine::kernels::detail
