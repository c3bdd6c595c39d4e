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

#pragma once

#include <span>
#include <string_view>

#include "emachine/symbols.hpp"

// Data-parallel inner loops of a PEM cycle, one lane per LTM location.
//
// Every variant must produce bit-identical results to the scalar reference:
// the trace format stores full-precision e/s/se values and replays compare
// them exactly. Variants therefore use the same operation order as the
// scalar code and never fuse multiply-add.

namespace emachine::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  /// s[i] += weight where row[i] == token.
  void (*accumulate_matches)(std::span<const Token> row, Token token, double weight,
                             std::span<double> s);
  /// se[i] = s[i] * (1 + a * e[i]).
  void (*modulate)(std::span<const double> s, std::span<const double> e, double a,
                   std::span<double> se);
  /// e[i] = s[i] > e[i] ? s[i] : c * e[i], in place.
  void (*next_e)(std::span<const double> s, double c, std::span<double> e);
  /// Largest element, 0 for an empty span. Inputs are nonnegative.
  double (*max_value)(std::span<const double> values);
};

const KernelTable& scalar_table();

/// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// The table used by the PEM. Picks the widest supported variant unless the
/// EMACHINE_ISA environment variable is "scalar".
const KernelTable& active();

/// Overrides the active table (tests, benchmarks). Throws ConfigError when the
/// requested variant is unavailable.
void select(Isa isa);

}  // namespace emachine::kernels
