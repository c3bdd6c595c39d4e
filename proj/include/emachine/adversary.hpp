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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "emachine/experiments.hpp"
#include "emachine/gram.hpp"

namespace emachine {

/// One step of a GRAM transcript.
struct TranscriptStep {
  GramInput input;
  Symbol dout;
};

/// A GRAM run from empty memory.
using Transcript = std::vector<TranscriptStep>;

/// Runs inputs through a fresh GRAM and records every output.
Transcript record_transcript(const GramAlphabets& gram, std::span<const GramInput> inputs);

/// A learner that tries to predict GRAM outputs from input/output samples.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual std::string name() const = 0;
  virtual void train(std::span<const Transcript> transcripts) = 0;
  /// Predicted output for the last input of the sequence, which is presented
  /// from empty memory. Does not change the trained state.
  virtual Symbol predict(std::span<const GramInput> sequence) const = 0;
};

/// Predicts from the last m inputs only: the most frequent output seen after
/// that window in training (ties to the lowest token, unseen windows give
/// epsilon).
std::unique_ptr<Learner> baseline_window_learner(const GramAlphabets& gram, std::size_t m);

/// Predicts from the multiset of inputs seen so far, ignoring their order.
std::unique_ptr<Learner> baseline_bag_learner(const GramAlphabets& gram);

/// AS organized as a PEM: trained by tape-recording the transcripts with the
/// GRAM as teacher, predicting with writing off from its own output.
std::unique_ptr<Learner> pem_learner(const GramAlphabets& gram, double tau, double a,
                                     std::uint64_t seed);

/// Two input sequences on which a GRAM answers differently.
struct SequencePair {
  GramAlphabets gram;
  std::vector<GramInput> seq1;
  std::vector<GramInput> seq2;
  Symbol oracle1;
  Symbol oracle2;
};

/// seq1 = (1,a), (2,d) x (m-1), (1,_); seq2 the same but starting (1,b).
/// The two agree on their last m inputs; oracles are a and b.
SequencePair gen_theorem1_pair(const GramAlphabets& gram, std::size_t m, const Symbol& filler);

/// Length m+1, x(m1) = (1,a), x(m2) = (1,b), x(m+1) = (1,_), filler (2,d)
/// elsewhere; seq2 swaps positions m1 and m2 (1-based). Oracles b and a.
/// Throws ProtocolError unless 1 <= m1 < m2 <= m.
SequencePair gen_theorem2_pair(const GramAlphabets& gram, std::size_t m, std::size_t m1,
                               std::size_t m2, const Symbol& filler);

/// A first transcript writing every fixed rule in random order, then random
/// episodes until `budget` steps are used. Throws ProtocolError when the
/// budget cannot cover the fixed rules.
std::vector<Transcript> training_transcripts(const GramAlphabets& gram, std::size_t budget,
                                             std::uint64_t seed);

enum class Verdict { Distinguishes, Fails };

std::string to_string(Verdict v);

/// Trains the learner on training_transcripts(budget, seed), then asks for
/// both sequences. Distinguishes iff both predictions equal their oracles.
Verdict evaluate_learner(Learner& learner, const SequencePair& pair, std::size_t training_budget,
                         std::uint64_t seed);

/// The falsification matrix for m = 1..max_m: window-m on every theorem 1
/// pair, the bag learner on every theorem 2 pair, and a PEM with
/// tau = tau_min(m + 1) on both. Each probe records one cell; a mismatch is a
/// baseline that distinguishes or a PEM that fails.
ExperimentReport run_adversary(std::size_t max_m, std::uint64_t seed,
                               std::size_t training_budget = 32);

}  // namespace emachine
