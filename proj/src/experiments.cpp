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

#include "emachine/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace emachine {
namespace {

std::string describe(const GramInput& in) { return "(" + in.addr.name() + "," + in.din.name() + ")"; }

// Independent stream for protocol choices so they never perturb the session
// generator that drives winner selection.
ChoiceRng protocol_rng(std::uint64_t seed) { return ChoiceRng(seed ^ 0x9e3779b97f4a7c15ULL); }

}  // namespace

void ExperimentReport::add_probe(ProbeRecord record, bool ok) {
  ++probes;
  if (!ok) ++mismatches;
  pass = mismatches == 0;
  records.push_back(std::move(record));
}

void ExperimentReport::set_metric(const std::string& name, double value) {
  for (auto& [key, v] : metrics) {
    if (key == name) {
      v = value;
      return;
    }
  }
  metrics.emplace_back(name, value);
}

double ExperimentReport::metric(const std::string& name) const {
  for (const auto& [key, v] : metrics) {
    if (key == name) return v;
  }
  throw std::out_of_range("report has no metric '" + name + "'");
}

bool ExperimentReport::has_metric(const std::string& name) const {
  return std::any_of(metrics.begin(), metrics.end(),
                     [&](const auto& kv) { return kv.first == name; });
}

double t_decay(double emax, double eloss, double tau) {
  if (!(eloss > 0.0) || !(eloss < emax)) throw ProtocolError("t_decay needs 0 < eloss < emax");
  if (!(tau > 1.0)) throw ProtocolError("t_decay needs tau > 1");
  return std::log(eloss / emax) / std::log(1.0 - 1.0 / tau);
}

double tau_min(double span) {
  if (span < 0.0) throw ProtocolError("examination span must be nonnegative");
  return span / std::log(2.0);
}

std::vector<GramInput> covering_schedule(const GramAlphabets& gram, ChoiceRng& rng,
                                         std::size_t extra) {
  std::vector<GramInput> schedule = fixed_rules(gram);
  shuffle_in_place(std::span(schedule), rng);
  const std::size_t n_addr = gram.addr->member_count();
  for (std::size_t i = 0; i < extra; ++i) {
    const Symbol addr = gram.addr->member(uniform_below(rng, n_addr));
    // Data index == member_count() is epsilon, i.e. a read.
    const Symbol din = gram.data->at(static_cast<Token>(uniform_below(rng, gram.data->size())));
    schedule.push_back({addr, din});
  }
  return schedule;
}

std::vector<GramInput> random_probes(const GramAlphabets& gram, std::size_t count,
                                     double write_fraction, ChoiceRng& rng) {
  std::vector<GramInput> probes;
  probes.reserve(count);
  const std::size_t n_addr = gram.addr->member_count();
  const std::size_t n_data = gram.data->member_count();
  for (std::size_t i = 0; i < count; ++i) {
    const Symbol addr = gram.addr->member(uniform_below(rng, n_addr));
    const bool write = n_data > 0 && unit_interval(rng) < write_fraction;
    const Symbol din = write ? gram.data->member(uniform_below(rng, n_data)) : gram.data->epsilon();
    probes.push_back({addr, din});
  }
  return probes;
}

std::uint64_t theorem3_span(std::size_t training_length, std::size_t probe_count) {
  const std::size_t cycles = training_length + probe_count;
  return cycles == 0 ? 0 : cycles - 1;
}

SystemConfig theorem3_config(const GramAlphabets& gram, double tau, double a,
                             std::size_t capacity) {
  SystemConfig config;
  config.alphabets = {gram.addr, gram.data};
  config.world = gram;
  PemParams as;
  as.inputs = {gram.addr, gram.data};
  as.outputs = {gram.data};
  as.wx = {1.0, 1.0};
  as.a = a;
  as.tau = tau;
  as.capacity = std::max<std::size_t>(capacity, 1);
  config.brain.as = std::move(as);
  return config;
}

ExperimentReport run_theorem3(const Theorem3Setup& setup, CycleObserver* observer) {
  // Every fixed rule must be written at least once during training.
  std::set<std::pair<Token, Token>> written;
  for (const auto& in : setup.training) {
    if (!in.din.is_epsilon()) written.emplace(in.addr.token(), in.din.token());
  }
  for (const auto& rule : fixed_rules(setup.gram)) {
    if (!written.count({rule.addr.token(), rule.din.token()})) {
      throw ProtocolError("training schedule never writes fixed rule " + describe(rule));
    }
  }

  System system(theorem3_config(setup.gram, setup.tau, setup.a, setup.training.size()),
                setup.seed);
  if (observer) system.attach(observer);

  ExperimentReport report;
  report.protocol = "theorem3";
  report.nu0 = 0;
  report.nu1 = setup.training.size();
  report.nu2 = theorem3_span(setup.training.size(), setup.probes.size());

  Selectors sel;
  sel.ns_sel = true;
  system.set_selectors(sel);
  for (const auto& in : setup.training) {
    BrainInputs bi;
    bi.addr = in.addr;
    bi.din = in.din;
    bi.wen_as = true;
    system.cycle(bi);
  }

  sel.ns_sel = false;
  system.set_selectors(sel);
  for (const auto& in : setup.probes) {
    BrainInputs bi;
    bi.addr = in.addr;
    bi.din = in.din;
    const CycleRecord rec = system.cycle(bi);
    const Symbol& expected = *rec.inputs.dout;
    const Symbol& actual = rec.outputs.as_io->y[0];
    report.add_probe({rec.nu, describe(in), expected.name(), actual.name()}, expected == actual);
  }
  if (observer) system.detach(observer);

  const double span = static_cast<double>(report.nu2 - report.nu0);
  report.set_metric("tau", setup.tau);
  report.set_metric("tau_min", tau_min(span));
  report.set_metric("span", span);
  return report;
}

TruthTable random_table(ChoiceRng& rng, std::size_t symbols) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < symbols; ++i) names.push_back("v" + std::to_string(i));
  TruthTable table;
  table.inputs = {make_alphabet("in1", names), make_alphabet("in2", names)};
  table.outputs = {make_alphabet("y1", names), make_alphabet("y2", names),
                   make_alphabet("y3", names)};
  for (const Symbol& u : table.inputs[0]->members()) {
    for (const Symbol& v : table.inputs[1]->members()) {
      TruthTable::Row row{{u, v}, {}};
      for (const auto& out : table.outputs) {
        row.out.push_back(out->member(uniform_below(rng, out->member_count())));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

TruthTable echo_table(std::size_t symbols) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < symbols; ++i) names.push_back("v" + std::to_string(i));
  TruthTable table;
  table.inputs = {make_alphabet("in1", names), make_alphabet("in2", names)};
  table.outputs = {table.inputs[0], table.inputs[1], table.inputs[0]};
  for (const Symbol& u : table.inputs[0]->members()) {
    for (const Symbol& v : table.inputs[1]->members()) table.rows.push_back({{u, v}, {u, v, u}});
  }
  return table;
}

ExperimentReport run_theorem4(const TruthTable& table, std::uint64_t seed,
                              CycleObserver* observer) {
  std::map<std::vector<Token>, std::vector<Token>> seen;
  for (const auto& row : table.rows) {
    if (row.in.size() != table.inputs.size() || row.out.size() != table.outputs.size()) {
      throw ProtocolError("truth table row has the wrong width");
    }
    std::vector<Token> in, out;
    for (const auto& s : row.in) in.push_back(s.token());
    for (const auto& s : row.out) out.push_back(s.token());
    auto [it, inserted] = seen.emplace(in, out);
    if (!inserted && it->second != out) {
      throw ProtocolError("truth table maps input (" + join_symbols(row.in) +
                          ") to two different outputs");
    }
  }

  SystemConfig config;
  config.alphabets = table.inputs;
  for (const auto& a : table.outputs) {
    if (std::find(config.alphabets.begin(), config.alphabets.end(), a) == config.alphabets.end()) {
      config.alphabets.push_back(a);
    }
  }
  PemParams am;
  am.inputs = table.inputs;
  am.outputs = table.outputs;
  am.wx.assign(table.inputs.size(), 1.0);
  am.a = 0.0;
  am.tau = 100.0;
  am.capacity = std::max<std::size_t>(table.rows.size(), 1);
  config.brain.am = std::move(am);
  config.brain.am_layout.sensory = table.inputs;

  System system(std::move(config), seed);
  if (observer) system.attach(observer);

  ExperimentReport report;
  report.protocol = "theorem4";
  report.nu1 = table.rows.size();

  Selectors sel;
  sel.nm_sel = true;
  system.set_selectors(sel);
  for (const auto& row : table.rows) {
    BrainInputs bi;
    bi.vis = row.in;
    bi.teach = row.out;
    bi.wen_am = true;
    system.cycle(bi);
  }

  sel.nm_sel = false;
  system.set_selectors(sel);
  std::size_t se_ne_s = 0;
  for (const auto& row : table.rows) {
    BrainInputs bi;
    bi.vis = row.in;
    const CycleRecord rec = system.cycle(bi);
    if (rec.outputs.am_io->se != rec.outputs.am_io->s) ++se_ne_s;
    bool ok = true;
    for (std::size_t k = 0; k < row.out.size(); ++k) ok = ok && rec.outputs.nm_y[k] == row.out[k];
    report.add_probe({rec.nu, join_symbols(row.in), join_symbols(row.out),
                      join_symbols(rec.outputs.nm_y)},
                     ok);
  }
  if (observer) system.detach(observer);
  report.nu2 = system.nu() == 0 ? 0 : system.nu() - 1;
  report.set_metric("se_ne_s_cycles", static_cast<double>(se_ne_s));
  return report;
}

ProductionNaming::ProductionNaming(std::size_t k) : k_(k) {
  if (k == 0 || k > 16) throw ProtocolError("mental set needs 1 <= k <= 16");
  std::vector<std::string> names;
  const std::uint64_t n = mental_set_storage(k);
  for (std::uint64_t i = 1; i <= n; ++i) names.push_back("a" + std::to_string(i));
  names_ = make_alphabet("names", std::move(names));
}

Symbol ProductionNaming::name(std::size_t row, bool output) const {
  return names_->member(2 * row + (output ? 1 : 0));
}

std::uint64_t mental_set_storage(std::size_t k) { return std::uint64_t{2} << k; }

std::uint64_t mental_set_functions(std::size_t k) {
  if (k > 5) throw ProtocolError("2^(2^k) overflows 64 bits for k > 5");
  const std::uint64_t rows = std::uint64_t{1} << k;
  return rows == 64 ? 0 : (std::uint64_t{1} << rows);
}

std::vector<bool> boolean_function(std::size_t k, std::uint64_t f) {
  const std::size_t rows = std::size_t{1} << k;
  std::vector<bool> table(rows);
  for (std::size_t r = 0; r < rows; ++r) table[r] = (f >> r) & 1U;
  return table;
}

std::vector<Symbol> pretune_names(const std::vector<bool>& truth_table,
                                  const ProductionNaming& naming) {
  const std::size_t rows = std::size_t{1} << naming.k();
  if (truth_table.size() != rows) {
    throw ProtocolError("truth table has " + std::to_string(truth_table.size()) +
                        " rows; the naming covers " + std::to_string(rows));
  }
  std::vector<Symbol> names;
  for (std::size_t r = 0; r < rows; ++r) names.push_back(naming.name(r, truth_table[r]));
  return names;
}

SystemConfig mental_set_config(const ProductionNaming& naming, double tau) {
  const std::size_t k = naming.k();
  AlphabetRef bit = make_alphabet("bit", {"0", "1"});
  AlphabetRef speech = make_alphabet("speech", {"s0", "s1"});

  SystemConfig config;
  config.alphabets = {naming.names(), bit, speech};
  PemParams am;
  am.inputs.push_back(naming.names());
  for (std::size_t j = 0; j < k; ++j) am.inputs.push_back(bit);
  am.inputs.push_back(speech);
  am.outputs = {speech};
  am.wx.assign(k + 2, 1.0);
  am.wx[0] = static_cast<double>(k + 2);
  am.a = 1.0 / (2.0 * static_cast<double>(k) * am.emax());
  am.tau = tau;
  am.capacity = mental_set_storage(k);
  config.brain.am = std::move(am);
  config.brain.am_layout.aud = naming.names();
  config.brain.am_layout.sensory.assign(k, bit);
  config.brain.am_layout.feedback = 0;
  return config;
}

ExperimentReport run_mental_set(const MentalSetSpec& spec, std::uint64_t seed,
                                CycleObserver* observer) {
  const ProductionNaming naming(spec.k);
  const std::size_t rows = std::size_t{1} << spec.k;
  if (spec.truth_table.size() != rows) {
    throw ProtocolError("truth table is not total: " + std::to_string(spec.truth_table.size()) +
                        " of " + std::to_string(rows) + " rows");
  }
  const std::vector<Symbol> names = pretune_names(spec.truth_table, naming);

  SystemConfig config = mental_set_config(naming, spec.tau);
  const AlphabetRef bit = config.alphabets[1];
  const AlphabetRef speech = config.alphabets[2];
  const double wx_aud = config.brain.am->wx[0];
  System system(std::move(config), seed);
  if (observer) system.attach(observer);

  auto visual = [&](std::size_t row) {
    std::vector<Symbol> vis;
    for (std::size_t j = 0; j < spec.k; ++j) {
      vis.push_back(bit->member((row >> (spec.k - 1 - j)) & 1U));
    }
    return vis;
  };

  ExperimentReport report;
  report.protocol = "mentalset";

  // Training: location 2r + o holds production (row r -> s<o>) named a(2r+o+1).
  Selectors sel;
  sel.nm_sel = true;
  sel.refresh_on = spec.refresh_on;
  system.set_selectors(sel);
  for (std::size_t r = 0; r < rows; ++r) {
    for (int o = 0; o < 2; ++o) {
      BrainInputs bi;
      bi.aud = naming.name(r, o == 1);
      bi.vis = visual(r);
      bi.teach = {speech->member(o)};
      bi.wen_am = true;
      system.cycle(bi);
    }
  }
  report.nu1 = system.nu();

  // Examination.
  sel.nm_sel = false;
  system.set_selectors(sel);
  system.reset();
  std::set<std::size_t> tuned;
  for (const Symbol& name : names) {
    BrainInputs bi;
    bi.aud = name;
    system.cycle(bi);
    tuned.insert(name.token());  // name a(i) lives at location i-1 == token
  }

  std::vector<std::size_t> order;
  if (spec.exam_length == 0) {
    for (std::size_t r = 0; r < rows; ++r) order.push_back(r);
  } else {
    ChoiceRng rng = protocol_rng(seed);
    std::vector<std::size_t> pass(rows);
    while (order.size() < spec.exam_length) {
      for (std::size_t r = 0; r < rows; ++r) pass[r] = r;
      shuffle_in_place(std::span(pass), rng);
      for (std::size_t r : pass) {
        if (order.size() < spec.exam_length) order.push_back(r);
      }
    }
  }

  std::size_t foreign_winners = 0;
  for (std::size_t r : order) {
    BrainInputs bi;
    bi.vis = visual(r);
    const CycleRecord rec = system.cycle(bi);
    const auto& iwin = rec.outputs.am_io->iwin;
    if (!iwin || !tuned.count(*iwin)) ++foreign_winners;
    const Symbol expected = speech->member(spec.truth_table[r] ? 1 : 0);
    const Symbol& actual = rec.outputs.nm_y[0];
    report.add_probe({rec.nu, join_symbols(bi.vis), expected.name(), actual.name()},
                     expected == actual);
  }
  if (observer) system.detach(observer);

  report.nu2 = system.nu() - 1;
  const double eloss = static_cast<double>(spec.k);
  report.set_metric("non_pretuned_winners", static_cast<double>(foreign_winners));
  report.set_metric("eloss", eloss);
  report.set_metric("t_decay", t_decay(wx_aud, eloss, spec.tau));
  return report;
}

void merge_report(ExperimentReport& total, const ExperimentReport& part) {
  if (total.protocol.empty()) total.protocol = part.protocol;
  total.nu2 = std::max(total.nu2, part.nu2);
  total.nu1 = std::max(total.nu1, part.nu1);
  total.probes += part.probes;
  total.mismatches += part.mismatches;
  total.pass = total.mismatches == 0;
  total.records.insert(total.records.end(), part.records.begin(), part.records.end());
  for (const auto& [name, value] : part.metrics) {
    total.set_metric(name, total.has_metric(name) ? total.metric(name) + value : value);
  }
}

Theorem3Setup theorem3_seed_setup(std::uint64_t seed, std::size_t probes, double tau,
                                  double write_fraction) {
  Theorem3Setup setup;
  setup.gram = small_gram_alphabets();
  setup.seed = seed;
  ChoiceRng rng = protocol_rng(seed);
  setup.training = covering_schedule(setup.gram, rng);
  setup.probes = random_probes(setup.gram, probes, write_fraction, rng);
  const double span = static_cast<double>(theorem3_span(setup.training.size(), probes));
  setup.tau = tau > 0.0 ? tau : tau_min(span);
  return setup;
}

ExperimentReport run_theorem3_suite(std::size_t seeds, std::size_t probes, double tau,
                                    std::uint64_t seed, double write_fraction) {
  ExperimentReport total;
  total.protocol = "theorem3";
  double tau_used = tau;
  for (std::size_t i = 0; i < seeds; ++i) {
    const Theorem3Setup setup = theorem3_seed_setup(seed + i, probes, tau, write_fraction);
    const double span = static_cast<double>(theorem3_span(setup.training.size(), probes));
    tau_used = setup.tau;
    ExperimentReport part = run_theorem3(setup);
    part.metrics.clear();
    merge_report(total, part);
    total.set_metric("span", span);
  }
  total.set_metric("tau", tau_used);
  if (total.has_metric("span")) total.set_metric("tau_min", tau_min(total.metric("span")));
  total.set_metric("seeds", static_cast<double>(seeds));
  return total;
}

ExperimentReport run_theorem4_suite(std::size_t tables, std::uint64_t seed) {
  ChoiceRng rng = protocol_rng(seed);
  ExperimentReport total;
  total.protocol = "theorem4";
  total.set_metric("se_ne_s_cycles", 0.0);
  for (std::size_t i = 0; i < tables; ++i) {
    const TruthTable table = random_table(rng);
    merge_report(total, run_theorem4(table, seed + i));
  }
  total.set_metric("tables", static_cast<double>(tables));
  return total;
}

ExperimentReport run_mental_set_suite(std::size_t k, double tau, bool refresh_on,
                                      std::uint64_t seed) {
  ExperimentReport total;
  total.protocol = "mentalset";
  const std::uint64_t functions = mental_set_functions(k);
  for (std::uint64_t f = 0; f < functions; ++f) {
    MentalSetSpec spec;
    spec.k = k;
    spec.truth_table = boolean_function(k, f);
    spec.refresh_on = refresh_on;
    spec.tau = tau;
    ExperimentReport part = run_mental_set(spec, seed + f);
    const double foreign = part.metric("non_pretuned_winners");
    part.metrics.clear();
    merge_report(total, part);
    total.set_metric("non_pretuned_winners",
                     (total.has_metric("non_pretuned_winners")
                          ? total.metric("non_pretuned_winners")
                          : 0.0) +
                         foreign);
  }
  total.set_metric("k", static_cast<double>(k));
  total.set_metric("functions", static_cast<double>(functions));
  total.set_metric("storage", static_cast<double>(mental_set_storage(k)));
  return total;
}

}  // namespace emachine
