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

// Built with -mavx2 and only entered after a runtime CPU check.
#include <immintrin.h>

#include "kernels_internal.hpp"

namespace emachine::kernels::detail {
namespace {

void accumulate_matches(std::span<const Token> row, Token token, double weight,
                        std::span<double> s) {
  const std::size_t n = row.size();
  const __m128i key = _mm_set1_epi32(static_cast<int>(token));
  const __m256d w = _mm256_set1_pd(weight);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i tokens = _mm_loadu_si128(reinterpret_cast<const __m128i*>(row.data() + i));
    // Sign-extending the 32-bit compare mask gives all-ones 64-bit lanes.
    const __m256i mask = _mm256_cvtepi32_epi64(_mm_cmpeq_epi32(tokens, key));
    const __m256d add = _mm256_and_pd(_mm256_castsi256_pd(mask), w);
    _mm256_storeu_pd(s.data() + i, _mm256_add_pd(_mm256_loadu_pd(s.data() + i), add));
  }
  for (; i < n; ++i) s[i] += row[i] == token ? weight : 0.0;
}

void modulate(std::span<const double> s, std::span<const double> e, double a,
              std::span<double> se) {
  const std::size_t n = s.size();
  const __m256d va = _mm256_set1_pd(a);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d bias = _mm256_mul_pd(va, _mm256_loadu_pd(e.data() + i));
    const __m256d gain = _mm256_add_pd(one, bias);
    _mm256_storeu_pd(se.data() + i, _mm256_mul_pd(_mm256_loadu_pd(s.data() + i), gain));
  }
  for (; i < n; ++i) {
    const double bias = a * e[i];
    const double gain = 1.0 + bias;
    se[i] = s[i] * gain;
  }
}

void next_e(std::span<const double> s, double c, std::span<double> e) {
  const std::size_t n = s.size();
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vs = _mm256_loadu_pd(s.data() + i);
    const __m256d ve = _mm256_loadu_pd(e.data() + i);
    const __m256d charge = _mm256_cmp_pd(vs, ve, _CMP_GT_OQ);
    _mm256_storeu_pd(e.data() + i, _mm256_blendv_pd(_mm256_mul_pd(vc, ve), vs, charge));
  }
  for (; i < n; ++i) e[i] = s[i] > e[i] ? s[i] : c * e[i];
}

double max_value(std::span<const double> values) {
  const std::size_t n = values.size();
  __m256d best4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) best4 = _mm256_max_pd(best4, _mm256_loadu_pd(values.data() + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, best4);
  double best = 0.0;
  for (double v : lanes) best = v > best ? v : best;
  for (; i < n; ++i) best = values[i] > best ? values[i] : best;
  return best;
}

}  // namespace

const KernelTable kAvx2Table{Isa::Avx2, accumulate_matches, modulate, next_e, max_value};

}  // namespace emachine::kernels::detail
