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
#include <string>
#include <utility>
#include <vector>

#include "emachine/system.hpp"

namespace emachine {

/// One examined probe.
struct ProbeRecord {
  std::uint64_t nu = 0;
  std::string input;
  std::string expected;
  std::string actual;
};

/// Machine-checkable outcome of a protocol. pass holds iff mismatches == 0.
struct ExperimentReport {
  std::string protocol;
  std::uint64_t nu0 = 0;  ///< first training cycle
  std::uint64_t nu1 = 0;  ///< first examination cycle (= training length)
  std::uint64_t nu2 = 0;  ///< last examination cycle
  std::size_t probes = 0;
  std::size_t mismatches = 0;
  std::vector<ProbeRecord> records;
  /// Protocol-specific measurements, in insertion order.
  std::vector<std::pair<std::string, double>> metrics;
  bool pass = true;

  void add_probe(ProbeRecord record, bool ok);
  void set_metric(const std::string& name, double value);
  /// Throws std::out_of_range for unknown names.
  double metric(const std::string& name) const;
  bool has_metric(const std::string& name) const;
};

/// Cycles for pure decay from emax down to eloss: ln(eloss/emax) / ln(1 - 1/tau).
/// Throws ProtocolError unless 0 < eloss < emax and tau > 1.
double t_decay(double emax, double eloss, double tau);

/// Smallest tau keeping a fully charged location above half charge over a
/// span of cycles: span / ln 2. Throws ProtocolError for a negative span.
double tau_min(double span);

// --- GRAM simulation by AS -------------------------------------------------

/// The fixed rules of the GRAM in random order, optionally followed by
/// `extra` random steps (reads or writes).
std::vector<GramInput> covering_schedule(const GramAlphabets& gram, ChoiceRng& rng,
                                         std::size_t extra = 0);

/// Random (addr, din) probes; each is a write with probability write_fraction.
std::vector<GramInput> random_probes(const GramAlphabets& gram, std::size_t count,
                                     double write_fraction, ChoiceRng& rng);

struct Theorem3Setup {
  GramAlphabets gram;
  double tau = 1000.0;
  double a = 0.4;
  std::vector<GramInput> training;
  std::vector<GramInput> probes;
  std::uint64_t seed = 0;
};

/// nu2 - nu0 for a training schedule followed by an examination.
std::uint64_t theorem3_span(std::size_t training_length, std::size_t probe_count);

/// A GRAM world and AS, no AM.
SystemConfig theorem3_config(const GramAlphabets& gram, double tau, double a,
                             std::size_t capacity);

/// Trains AS from the GRAM (NS.sel = 1, writing on), then examines it with
/// NS.sel = 0 and writing off against the world running in lockstep.
/// Throws ProtocolError when the schedule misses a fixed rule.
ExperimentReport run_theorem3(const Theorem3Setup& setup, CycleObserver* observer = nullptr);

// --- combinational machines in AM ------------------------------------------

struct TruthTable {
  std::vector<AlphabetRef> inputs;
  std::vector<AlphabetRef> outputs;
  struct Row {
    std::vector<Symbol> in;
    std::vector<Symbol> out;
  };
  std::vector<Row> rows;
};

/// A total random table with 2 inputs and 3 outputs over alphabets of
/// `symbols` members each.
TruthTable random_table(ChoiceRng& rng, std::size_t symbols = 3);

/// Outputs echo the inputs: (u, v) -> (u, v, u).
TruthTable echo_table(std::size_t symbols = 3);

/// Teaches every row once through NM (NM.sel = 1, writing on), then replays
/// every input with NM.sel = 0. Reports metric "se_ne_s_cycles", the number
/// of examination cycles with se != s. Throws ProtocolError on contradictory
/// rows.
ExperimentReport run_theorem4(const TruthTable& table, std::uint64_t seed,
                              CycleObserver* observer = nullptr);

// --- context-dependent mental set -------------------------------------------

struct MentalSetSpec {
  std::size_t k = 2;
  /// 2^k rows; row r holds f of the bits of r, x(2) the most significant.
  std::vector<bool> truth_table;
  bool refresh_on = false;
  double tau = 100.0;
  /// Examination presentations; 0 means each input once in row order.
  std::size_t exam_length = 0;
};

/// Names of the 2^(k+1) trained productions: a(2r + o + 1) names
/// "visual row r -> speech symbol s<o>".
class ProductionNaming {
 public:
  explicit ProductionNaming(std::size_t k);

  std::size_t k() const noexcept { return k_; }
  const AlphabetRef& names() const noexcept { return names_; }
  Symbol name(std::size_t row, bool output) const;

 private:
  std::size_t k_;
  AlphabetRef names_;
};

/// Productions stored: 2^(k+1).
std::uint64_t mental_set_storage(std::size_t k);
/// Boolean functions reachable: 2^(2^k). Valid for k <= 5.
std::uint64_t mental_set_functions(std::size_t k);

/// Truth table of function number f: row r outputs bit r of f.
std::vector<bool> boolean_function(std::size_t k, std::uint64_t f);

/// Auditory names whose productions jointly realize the table, in row order.
/// Throws ProtocolError when the table size does not match the naming.
std::vector<Symbol> pretune_names(const std::vector<bool>& truth_table,
                                  const ProductionNaming& naming);

/// Mental-set assembly: AM with slots (aud, visual x k, proprioceptive), p = 1.
/// wx(1) = k + 2, other weights 1, a = 1 / (2 k emax), eloss = k.
SystemConfig mental_set_config(const ProductionNaming& naming, double tau);

/// Trains all named productions, resets e, pre-tunes the names realizing the
/// table, then shows visual inputs with no auditory input and compares the
/// spoken output with the table. Metrics: "non_pretuned_winners", "eloss",
/// "t_decay". Throws ProtocolError when the table is not total.
ExperimentReport run_mental_set(const MentalSetSpec& spec, std::uint64_t seed,
                                CycleObserver* observer = nullptr);

// --- batches ------------------------------------------------------------------

/// Share of examination probes that write when no schedule is given.
inline constexpr double kProbeWriteFraction = 0.2;

/// Adds every probe and metric of `part` to `total`. Metrics are summed.
void merge_report(ExperimentReport& total, const ExperimentReport& part);

/// The setup run_theorem3_suite uses for one seed.
Theorem3Setup theorem3_seed_setup(std::uint64_t seed, std::size_t probes, double tau,
                                  double write_fraction = kProbeWriteFraction);

/// Theorem 3 on the small GRAM for seeds seed..seed+seeds-1: covering
/// training, `probes` random probes. tau <= 0 selects tau_min(span).
ExperimentReport run_theorem3_suite(std::size_t seeds, std::size_t probes, double tau,
                                    std::uint64_t seed,
                                    double write_fraction = kProbeWriteFraction);

/// Theorem 4 on `tables` random tables drawn from one generator.
/// Metric "se_ne_s_cycles" is the total over all tables.
ExperimentReport run_theorem4_suite(std::size_t tables, std::uint64_t seed);

/// Every Boolean function of k inputs through run_mental_set.
ExperimentReport run_mental_set_suite(std::size_t k, double tau, bool refresh_on,
                                      std::uint64_t seed);

}  // namespace emachine
