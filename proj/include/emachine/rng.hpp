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

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace emachine {

/// The session random generator: std::mt19937_64, whose output stream is fixed
/// by the C++ standard (state size 312, default seed 5489), so traces replay
/// identically on every conforming platform.
using ChoiceRng = std::mt19937_64;

inline constexpr std::string_view kRngName = "mt19937_64";

/// Uniform integer in [0, bound) by rejection on raw 64-bit draws.
/// std::uniform_int_distribution is avoided because its algorithm is
/// implementation-defined. bound must be positive.
inline std::uint64_t uniform_below(ChoiceRng& rng, std::uint64_t bound) {
  // Largest multiple of bound that fits in 2^64, exclusive.
  const std::uint64_t reject_from = bound * ((~std::uint64_t{0}) / bound);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= reject_from);
  return draw % bound;
}

/// Uniform real in [0, 1) from the top 53 bits of one draw.
inline double unit_interval(ChoiceRng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Fisher-Yates with uniform_below; std::shuffle's draw pattern is not
/// portable.
template <class T>
void shuffle_in_place(std::span<T> items, ChoiceRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_below(rng, i)]);
  }
}

}  // namespace emachine
