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

#include "emachine/adversary.hpp"

#include <algorithm>
#include <map>

namespace emachine {
namespace {

using InputKey = std::vector<std::pair<Token, Token>>;

InputKey key_of(std::span<const GramInput> inputs) {
  InputKey key;
  key.reserve(inputs.size());
  for (const auto& in : inputs) key.emplace_back(in.addr.token(), in.din.token());
  return key;
}

// Output-symbol histogram with the stated tie-break: most frequent, then
// lowest token.
class Histogram {
 public:
  void add(Token t) { ++counts_[t]; }

  Token best() const {
    Token best_token = 0;
    std::size_t best_count = 0;
    for (const auto& [token, count] : counts_) {
      if (count > best_count) {
        best_count = count;
        best_token = token;
      }
    }
    return best_token;
  }

 private:
  std::map<Token, std::size_t> counts_;
};

class WindowLearner final : public Learner {
 public:
  WindowLearner(GramAlphabets gram, std::size_t m) : gram_(std::move(gram)), m_(m) {}

  std::string name() const override { return "window-" + std::to_string(m_); }

  void train(std::span<const Transcript> transcripts) override {
    for (const auto& t : transcripts) {
      std::vector<GramInput> inputs;
      for (std::size_t i = 0; i < t.size(); ++i) {
        inputs.push_back(t[i].input);
        table_[key_of(window(inputs))].add(t[i].dout.token());
      }
    }
  }

  Symbol predict(std::span<const GramInput> sequence) const override {
    auto it = table_.find(key_of(window(sequence)));
    if (it == table_.end()) return gram_.data->epsilon();
    return gram_.data->at(it->second.best());
  }

 private:
  std::span<const GramInput> window(std::span<const GramInput> inputs) const {
    return inputs.last(std::min(m_, inputs.size()));
  }

  GramAlphabets gram_;
  std::size_t m_;
  std::map<InputKey, Histogram> table_;
};

class BagLearner final : public Learner {
 public:
  explicit BagLearner(GramAlphabets gram) : gram_(std::move(gram)) {}

  std::string name() const override { return "bag"; }

  void train(std::span<const Transcript> transcripts) override {
    for (const auto& t : transcripts) {
      std::vector<GramInput> inputs;
      for (const auto& step : t) {
        inputs.push_back(step.input);
        table_[bag(inputs)].add(step.dout.token());
      }
    }
  }

  Symbol predict(std::span<const GramInput> sequence) const override {
    auto it = table_.find(bag(sequence));
    if (it == table_.end()) return gram_.data->epsilon();
    return gram_.data->at(it->second.best());
  }

 private:
  static InputKey bag(std::span<const GramInput> inputs) {
    InputKey key = key_of(inputs);
    std::sort(key.begin(), key.end());
    return key;
  }

  GramAlphabets gram_;
  std::map<InputKey, Histogram> table_;
};

class PemLearner final : public Learner {
 public:
  PemLearner(GramAlphabets gram, double tau, double a, std::uint64_t seed)
      : gram_(std::move(gram)), tau_(tau), a_(a), rng_(seed) {}

  std::string name() const override { return "pem"; }

  void train(std::span<const Transcript> transcripts) override {
    std::size_t steps = 0;
    for (const auto& t : transcripts) steps += t.size();
    SystemConfig config = theorem3_config(gram_, tau_, a_, steps);
    pem_.emplace(*config.brain.as);
    for (const auto& t : transcripts) {
      for (const auto& step : t) {
        const std::vector<Symbol> x{step.input.addr, step.input.din};
        const Symbol xy[1] = {step.dout};
        pem_->cycle(x, std::span<const Symbol>(xy), true, rng_);
      }
    }
  }

  Symbol predict(std::span<const GramInput> sequence) const override {
    if (!pem_) throw ProtocolError("pem learner used before training");
    Pem unit = *pem_;
    ChoiceRng rng = rng_;
    Symbol y = gram_.data->epsilon();
    for (const auto& in : sequence) {
      const std::vector<Symbol> x{in.addr, in.din};
      y = unit.cycle(x, std::nullopt, false, rng).y[0];
    }
    return y;
  }

 private:
  GramAlphabets gram_;
  double tau_;
  double a_;
  ChoiceRng rng_;
  std::optional<Pem> pem_;
};

Symbol final_output(const GramAlphabets& gram, std::span<const GramInput> inputs) {
  GramState state = gram_new(gram);
  Symbol dout = gram.data->epsilon();
  for (const auto& in : inputs) dout = gram_apply(state, in.addr, in.din);
  return dout;
}

void require_small_gram(const GramAlphabets& gram) {
  if (gram.addr->member_count() < 2 || gram.data->member_count() < 2) {
    throw ProtocolError("distinguishing pairs need at least two addresses and two data symbols");
  }
}

}  // namespace

Transcript record_transcript(const GramAlphabets& gram, std::span<const GramInput> inputs) {
  GramState state = gram_new(gram);
  Transcript t;
  for (const auto& in : inputs) t.push_back({in, gram_apply(state, in.addr, in.din)});
  return t;
}

std::unique_ptr<Learner> baseline_window_learner(const GramAlphabets& gram, std::size_t m) {
  if (m == 0) throw ProtocolError("window learner needs m >= 1");
  return std::make_unique<WindowLearner>(gram, m);
}

std::unique_ptr<Learner> baseline_bag_learner(const GramAlphabets& gram) {
  return std::make_unique<BagLearner>(gram);
}

std::unique_ptr<Learner> pem_learner(const GramAlphabets& gram, double tau, double a,
                                     std::uint64_t seed) {
  return std::make_unique<PemLearner>(gram, tau, a, seed);
}

SequencePair gen_theorem1_pair(const GramAlphabets& gram, std::size_t m, const Symbol& filler) {
  require_small_gram(gram);
  if (m == 0) throw ProtocolError("theorem 1 pair needs m >= 1");
  const Symbol one = gram.addr->member(0), two = gram.addr->member(1);
  const Symbol a = gram.data->member(0), b = gram.data->member(1), eps = gram.data->epsilon();
  SequencePair pair{gram, {}, {}, eps, eps};
  pair.seq1.push_back({one, a});
  for (std::size_t i = 1; i < m; ++i) pair.seq1.push_back({two, filler});
  pair.seq1.push_back({one, eps});
  pair.seq2 = pair.seq1;
  pair.seq2.front() = {one, b};
  pair.oracle1 = final_output(gram, pair.seq1);
  pair.oracle2 = final_output(gram, pair.seq2);
  return pair;
}

SequencePair gen_theorem2_pair(const GramAlphabets& gram, std::size_t m, std::size_t m1,
                               std::size_t m2, const Symbol& filler) {
  require_small_gram(gram);
  if (!(1 <= m1 && m1 < m2 && m2 <= m)) throw ProtocolError("theorem 2 needs 1 <= m1 < m2 <= m");
  const Symbol one = gram.addr->member(0), two = gram.addr->member(1);
  const Symbol a = gram.data->member(0), b = gram.data->member(1), eps = gram.data->epsilon();
  SequencePair pair{gram, {}, {}, eps, eps};
  pair.seq1.assign(m + 1, GramInput{two, filler});
  pair.seq1[m1 - 1] = {one, a};
  pair.seq1[m2 - 1] = {one, b};
  pair.seq1[m] = {one, eps};
  pair.seq2 = pair.seq1;
  std::swap(pair.seq2[m1 - 1], pair.seq2[m2 - 1]);
  pair.oracle1 = final_output(gram, pair.seq1);
  pair.oracle2 = final_output(gram, pair.seq2);
  return pair;
}

std::vector<Transcript> training_transcripts(const GramAlphabets& gram, std::size_t budget,
                                             std::uint64_t seed) {
  ChoiceRng rng(seed);
  const std::vector<GramInput> cover = covering_schedule(gram, rng);
  if (budget < cover.size()) {
    throw ProtocolError("training budget " + std::to_string(budget) +
                        " cannot cover the " + std::to_string(cover.size()) + " fixed rules");
  }
  std::vector<Transcript> out{record_transcript(gram, cover)};
  std::size_t used = cover.size();
  while (used < budget) {
    const std::size_t length = std::min<std::size_t>(1 + uniform_below(rng, 8), budget - used);
    const auto inputs = random_probes(gram, length, 0.5, rng);
    out.push_back(record_transcript(gram, inputs));
    used += length;
  }
  return out;
}

std::string to_string(Verdict v) { return v == Verdict::Distinguishes ? "Distinguishes" : "Fails"; }

Verdict evaluate_learner(Learner& learner, const SequencePair& pair, std::size_t training_budget,
                         std::uint64_t seed) {
  const auto transcripts = training_transcripts(pair.gram, training_budget, seed);
  learner.train(transcripts);
  const bool ok1 = learner.predict(pair.seq1) == pair.oracle1;
  const bool ok2 = learner.predict(pair.seq2) == pair.oracle2;
  return ok1 && ok2 ? Verdict::Distinguishes : Verdict::Fails;
}

ExperimentReport run_adversary(std::size_t max_m, std::uint64_t seed,
                               std::size_t training_budget) {
  const GramAlphabets gram = small_gram_alphabets();
  std::vector<Symbol> fillers = gram.data->members();
  fillers.push_back(gram.data->epsilon());

  ExperimentReport report;
  report.protocol = "adversary";
  auto check = [&](Learner& learner, const std::string& theorem, std::size_t m,
                   const std::string& detail, const SequencePair& pair, Verdict expected) {
    const Verdict got = evaluate_learner(learner, pair, training_budget, seed);
    report.add_probe({0, learner.name() + "/" + theorem + "/m=" + std::to_string(m) + "/" + detail,
                      to_string(expected), to_string(got)},
                     got == expected);
  };

  for (std::size_t m = 1; m <= max_m; ++m) {
    const double tau = tau_min(static_cast<double>(m + 1));
    for (const Symbol& d : fillers) {
      const std::string fill = "d=" + d.name();
      const SequencePair p1 = gen_theorem1_pair(gram, m, d);
      check(*baseline_window_learner(gram, m), "theorem1", m, fill, p1, Verdict::Fails);
      check(*pem_learner(gram, tau, 0.4, seed), "theorem1", m, fill, p1, Verdict::Distinguishes);
      for (std::size_t m2 = 2; m2 <= m; ++m2) {
        for (std::size_t m1 = 1; m1 < m2; ++m1) {
          const std::string where = fill + ",m1=" + std::to_string(m1) + ",m2=" + std::to_string(m2);
          const SequencePair p2 = gen_theorem2_pair(gram, m, m1, m2, d);
          check(*baseline_bag_learner(gram), "theorem2", m, where, p2, Verdict::Fails);
          check(*pem_learner(gram, tau, 0.4, seed), "theorem2", m, where, p2,
                Verdict::Distinguishes);
        }
      }
    }
  }
  report.set_metric("max_m", static_cast<double>(max_m));
  report.set_metric("training_budget", static_cast<double>(training_budget));
  return report;
}

}  // namespace emachine
