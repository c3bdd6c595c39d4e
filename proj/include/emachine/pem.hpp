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

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "emachine/rng.hpp"
#include "emachine/symbols.hpp"

namespace emachine {

/// Configuration of a primitive E-machine.
struct PemParams {
  std::vector<AlphabetRef> inputs;   ///< one alphabet per input slot (m)
  std::vector<AlphabetRef> outputs;  ///< one alphabet per output slot (p)
  std::vector<double> wx;            ///< input weights, each >= 1
  double a = 0.0;                    ///< modulation coefficient
  double tau = 100.0;                ///< decay time constant in cycles, > 1
  std::size_t capacity = 64;         ///< LTM locations

  std::size_t m() const noexcept { return inputs.size(); }
  std::size_t p() const noexcept { return outputs.size(); }
  /// Decay factor per cycle, 1 - 1/tau.
  double c() const noexcept { return 1.0 - 1.0 / tau; }
  /// Largest reachable excitation, the sum of the input weights.
  double emax() const noexcept;
  /// a * emax < 1: a full match always outvotes a partial one.
  bool full_match_dominates() const noexcept { return a * emax() < 1.0; }

  /// Throws ConfigError on inconsistent sizes or out-of-range values.
  void validate() const;
};

/// Symbolic long-term memory: ILTM (gx), OLTM (gy) and the write pointer.
///
/// Rows are stored slot-major so that one input slot across all locations is
/// contiguous, which is the layout the similarity kernels walk.
class PemGState {
 public:
  explicit PemGState(const PemParams& params);

  std::size_t m() const noexcept { return inputs_.size(); }
  std::size_t p() const noexcept { return outputs_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  /// Locations in use; they are 0..written()-1.
  std::size_t written() const noexcept { return written_; }
  /// 1-based index of the next free location.
  std::size_t wptr() const noexcept { return written_ + 1; }

  /// Input slot j across every location (length capacity()).
  std::span<const Token> input_row(std::size_t j) const;
  Symbol input(std::size_t j, std::size_t location) const;
  Symbol output(std::size_t k, std::size_t location) const;
  std::vector<Symbol> input_column(std::size_t location) const;
  std::vector<Symbol> output_column(std::size_t location) const;

  /// Tape-records x -> xy at the next free location.
  /// Throws CapacityError when every location is used.
  void record(std::span<const Symbol> x, std::span<const Symbol> xy);

  friend bool operator==(const PemGState& lhs, const PemGState& rhs) {
    return lhs.written_ == rhs.written_ && lhs.gx_ == rhs.gx_ && lhs.gy_ == rhs.gy_;
  }

 private:
  std::vector<AlphabetRef> inputs_;
  std::vector<AlphabetRef> outputs_;
  std::size_t capacity_;
  std::size_t written_ = 0;
  std::vector<Token> gx_;
  std::vector<Token> gy_;
};

/// Residual excitation per LTM location.
struct PemEState {
  std::vector<double> e;
};

/// Everything one cycle computed. Arrays have one entry per LTM location.
struct CycleIO {
  std::vector<Symbol> x;
  std::vector<Symbol> xy;  ///< what was offered for recording
  bool wen = false;
  std::vector<Symbol> y;
  std::optional<std::size_t> iwin;  ///< 0-based winner location
  std::vector<double> s;
  std::vector<double> se;

  bool no_winner() const noexcept { return !iwin.has_value(); }
};

// The elementary procedures. Each is usable on its own; Pem::cycle chains
// them in the fixed order decode, modulate, choose, encode, next_e, learn,
// seed_e_on_write.

/// s(i) = sum_j wx(j) * [x(j) == gx(j,i) and x(j) != _].
std::vector<double> decode(std::span<const Symbol> x, std::span<const double> wx,
                           const PemGState& g);

/// se(i) = s(i) * (1 + a * e(i)).
std::vector<double> modulate(std::span<const double> s, std::span<const double> e, double a);

/// Uniform draw from the locations tied at max(se) > 0, or nullopt.
std::optional<std::size_t> choose(std::span<const double> se, ChoiceRng& rng);

/// gy(:, iwin), or all epsilon when there is no winner.
std::vector<Symbol> encode(const PemGState& g, std::optional<std::size_t> iwin);

/// Fast charge on s(i) > e(i), otherwise decay by c.
std::vector<double> next_e(std::span<const double> s, std::span<const double> e, double c);

/// Records x -> xy when wen is set.
PemGState learn(std::span<const Symbol> x, std::span<const Symbol> xy, bool wen, PemGState g);

/// Excitation a freshly written location receives: the similarity x would have
/// with itself.
double self_similarity(std::span<const Symbol> x, std::span<const double> wx);

/// e(location) = self_similarity(x, wx).
PemEState seed_e_on_write(PemEState estate, std::size_t location, std::span<const Symbol> x,
                          std::span<const double> wx);

/// A primitive E-machine: parameters plus G-state and E-state.
class Pem {
 public:
  explicit Pem(PemParams params);

  const PemParams& params() const noexcept { return params_; }
  const PemGState& g() const noexcept { return g_; }
  const PemEState& e() const noexcept { return e_; }
  std::optional<std::size_t> last_winner() const noexcept { return last_winner_; }

  /// One cycle. The output is computed from the E-state and G-state held at
  /// the start of the cycle. When xy is nullopt the unit's own output is
  /// offered for recording. A non-empty wx overrides the configured weights
  /// for this cycle only. Throws CapacityError (state untouched) when wen is
  /// set and the LTM is full.
  CycleIO cycle(std::span<const Symbol> x, std::optional<std::span<const Symbol>> xy, bool wen,
                ChoiceRng& rng, std::span<const double> wx = {});

  /// Second half-step of a refreshed cycle: recomputes the similarity of x
  /// against the last winner and charges its excitation if that is higher.
  /// Returns false when the last cycle had no winner.
  bool refresh(std::span<const Symbol> x);

  /// e := 0 everywhere. LTM is untouched.
  void reset_e();

 private:
  void check_inputs(std::span<const Symbol> x) const;

  PemParams params_;
  PemGState g_;
  PemEState e_;
  std::optional<std::size_t> last_winner_;
};

}  // namespace emachine
