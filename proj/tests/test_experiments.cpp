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

#include "doctest.h"

#include <cmath>
#include <set>

#include "emachine/experiments.hpp"

using namespace emachine;

namespace {

// Boolean oracle independent of the naming helpers: row bits, MSB first.
bool evaluate(std::uint64_t f, std::size_t row) { return (f >> row) & 1U; }

}  // namespace

TEST_CASE("t_decay closed form") {
  CHECK(t_decay(2.0, 1.0, 100.0) == doctest::Approx(68.9676).epsilon(1e-5));
  CHECK(std::abs(t_decay(2.0, 1.0, 100.0) - 68.97) <= 0.01);
  CHECK(t_decay(2.0, 1.9999999, 100.0) < 1e-3);
  CHECK_THROWS_AS(t_decay(2.0, 2.0, 100.0), ProtocolError);
  CHECK_THROWS_AS(t_decay(2.0, 0.0, 100.0), ProtocolError);
  CHECK_THROWS_AS(t_decay(2.0, 1.0, 1.0), ProtocolError);
}

TEST_CASE("t_decay lies between (tau - 1) ln 2 and tau ln 2") {
  // -ln(1 - 1/tau) lies between 1/tau and 1/(tau - 1), which bounds the
  // halving time on both sides.
  for (double tau : {1.5, 2.0, 10.0, 100.0, 1000.0, 1e6}) {
    const double t = t_decay(2.0, 1.0, tau);
    CHECK(t < tau * std::log(2.0));
    CHECK(t > (tau - 1.0) * std::log(2.0));
  }
}

TEST_CASE("tau_min") {
  CHECK(tau_min(100.0) == doctest::Approx(144.2695).epsilon(1e-6));
  CHECK(tau_min(0.0) == 0.0);
  CHECK_THROWS_AS(tau_min(-1.0), ProtocolError);
  for (double s = 1.0; s < 1000.0; s *= 1.7) CHECK(tau_min(s) < tau_min(s + 1.0));
}

TEST_CASE("report pass flag follows the mismatch count") {
  ExperimentReport r;
  CHECK(r.pass);
  r.add_probe({0, "x", "a", "a"}, true);
  CHECK(r.pass);
  r.add_probe({1, "x", "a", "b"}, false);
  CHECK_FALSE(r.pass);
  CHECK(r.probes == 2);
  CHECK(r.mismatches == 1);
  r.set_metric("m", 1.0);
  r.set_metric("m", 2.0);
  CHECK(r.metric("m") == 2.0);
  CHECK(r.metrics.size() == 1);
  CHECK_THROWS_AS(r.metric("nope"), std::out_of_range);
}

TEST_CASE("theorem 3: covering training and tau_min give zero mismatches") {
  const ExperimentReport r = run_theorem3_suite(3, 1000, 0.0, 11);
  CHECK(r.pass);
  CHECK(r.probes == 3000);
  CHECK(r.metric("span") == 1003.0);
  CHECK(r.metric("tau") == doctest::Approx(1003.0 / std::log(2.0)));
}

TEST_CASE("theorem 3: zero probes pass vacuously") {
  Theorem3Setup setup = theorem3_seed_setup(1, 0, 0.0);
  const ExperimentReport r = run_theorem3(setup);
  CHECK(r.pass);
  CHECK(r.probes == 0);
}

TEST_CASE("theorem 3: a schedule missing a fixed rule is rejected") {
  Theorem3Setup setup = theorem3_seed_setup(1, 10, 100.0);
  setup.training.pop_back();
  CHECK_THROWS_AS(run_theorem3(setup), ProtocolError);
}

TEST_CASE("theorem 3: report spans and lockstep oracle") {
  const Theorem3Setup setup = theorem3_seed_setup(4, 25, 0.0);
  const ExperimentReport r = run_theorem3(setup);
  CHECK(r.nu0 == 0);
  CHECK(r.nu1 == 4);
  CHECK(r.nu2 == 28);
  REQUIRE(r.records.size() == 25);
  // Every expected value is what a fresh GRAM answers after training + probes.
  GramState world = gram_new(setup.gram);
  for (const auto& in : setup.training) gram_apply(world, in.addr, in.din);
  for (std::size_t i = 0; i < setup.probes.size(); ++i) {
    const Symbol dout = gram_apply(world, setup.probes[i].addr, setup.probes[i].din);
    CHECK(r.records[i].expected == dout.name());
    CHECK(r.records[i].nu == 4 + i);
  }
}

TEST_CASE("property: theorem 3 over 20 seeds x 5 covering schedules") {
  const GramAlphabets gram = small_gram_alphabets();
  std::size_t probes = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    ChoiceRng rng(seed);
    for (int schedule = 0; schedule < 5; ++schedule) {
      Theorem3Setup setup;
      setup.gram = gram;
      setup.seed = seed * 10 + schedule;
      setup.training = covering_schedule(gram, rng, uniform_below(rng, 5));
      setup.probes = random_probes(gram, 200, kProbeWriteFraction, rng);
      setup.tau = tau_min(static_cast<double>(theorem3_span(setup.training.size(), 200)));
      const ExperimentReport r = run_theorem3(setup);
      CHECK(r.pass);
      probes += r.probes;
    }
  }
  CHECK(probes == 20 * 5 * 200);
}

TEST_CASE("theorem 3 negative control: tau far below tau_min loses working memory") {
  const ExperimentReport r = run_theorem3_suite(20, 1000, 1003.0 / 20.0, 0);
  CHECK(r.mismatches > 0);
}

TEST_CASE("theorem 4: random and echo tables, se equals s in examination") {
  ChoiceRng rng(8);
  for (int i = 0; i < 5; ++i) {
    const ExperimentReport r = run_theorem4(random_table(rng), i);
    CHECK(r.pass);
    CHECK(r.probes == 9);
    CHECK(r.metric("se_ne_s_cycles") == 0.0);
  }
  const ExperimentReport echo = run_theorem4(echo_table(), 0);
  CHECK(echo.pass);
  CHECK(echo.probes == 9);
}

TEST_CASE("theorem 4: contradictory rows are rejected") {
  TruthTable t = echo_table();
  TruthTable::Row dup = t.rows[0];
  dup.out[0] = t.outputs[0]->member(2);
  t.rows.push_back(dup);
  CHECK_THROWS_AS(run_theorem4(t, 0), ProtocolError);
}

TEST_CASE("mental set counts") {
  CHECK(mental_set_storage(2) == 8);
  CHECK(mental_set_functions(2) == 16);
  CHECK(mental_set_storage(3) == 16);
  CHECK(mental_set_functions(3) == 256);
}

TEST_CASE("production naming: a3 maps (0,1) to s0") {
  const ProductionNaming naming(2);
  CHECK(naming.names()->member_count() == 8);
  CHECK(naming.name(1, false).name() == "a3");
  CHECK(naming.name(0, false).name() == "a1");
  CHECK(naming.name(3, true).name() == "a8");
}

TEST_CASE("pretune_names") {
  const ProductionNaming one(1);
  const auto not_names = pretune_names({true, false}, one);
  REQUIRE(not_names.size() == 2);
  CHECK(not_names[0] == one.name(0, true));
  CHECK(not_names[1] == one.name(1, false));

  const ProductionNaming two(2);
  const auto zero = pretune_names({false, false, false, false}, two);
  REQUIRE(zero.size() == 4);
  for (std::size_t r = 0; r < 4; ++r) CHECK(zero[r] == two.name(r, false));
  CHECK_THROWS_AS(pretune_names({true}, two), ProtocolError);
}

TEST_CASE("mental set: AND gives s0 s0 s0 s1") {
  MentalSetSpec spec;
  spec.k = 2;
  spec.truth_table = {false, false, false, true};
  const ExperimentReport r = run_mental_set(spec, 0);
  REQUIRE(r.records.size() == 4);
  CHECK(r.records[0].actual == "s0");
  CHECK(r.records[1].actual == "s0");
  CHECK(r.records[2].actual == "s0");
  CHECK(r.records[3].actual == "s1");
  CHECK(r.pass);
}

TEST_CASE("mental set k=2: every function, every input") {
  std::size_t correct = 0;
  for (std::uint64_t f = 0; f < 16; ++f) {
    MentalSetSpec spec;
    spec.k = 2;
    spec.truth_table = boolean_function(2, f);
    const ExperimentReport r = run_mental_set(spec, f);
    REQUIRE(r.records.size() == 4);
    for (std::size_t row = 0; row < 4; ++row) {
      if (r.records[row].actual == (evaluate(f, row) ? "s1" : "s0")) ++correct;
    }
    CHECK(r.metric("non_pretuned_winners") == 0.0);
  }
  CHECK(correct == 64);
}

TEST_CASE("mental set rejects a partial table") {
  MentalSetSpec spec;
  spec.k = 2;
  spec.truth_table = {true, false};
  CHECK_THROWS_AS(run_mental_set(spec, 0), ProtocolError);
}

TEST_CASE("mental set: refresh keeps the set for ten times t_decay, decay alone does not") {
  MentalSetSpec spec;
  spec.k = 2;
  spec.truth_table = boolean_function(2, 6);  // XOR
  spec.tau = 100.0;
  const double td = t_decay(static_cast<double>(spec.k + 2), static_cast<double>(spec.k), spec.tau);
  spec.exam_length = static_cast<std::size_t>(std::ceil(10.0 * td));

  spec.refresh_on = true;
  const ExperimentReport with = run_mental_set(spec, 3);
  CHECK(with.pass);
  CHECK(with.probes == spec.exam_length);
  CHECK(with.metric("non_pretuned_winners") == 0.0);

  spec.refresh_on = false;
  const ExperimentReport without = run_mental_set(spec, 3);
  CHECK(without.mismatches > 0);
}

TEST_CASE("batch runners aggregate") {
  const ExperimentReport t4 = run_theorem4_suite(4, 2);
  CHECK(t4.probes == 36);
  CHECK(t4.metric("tables") == 4.0);
  const ExperimentReport ms = run_mental_set_suite(1, 100.0, false, 0);
  CHECK(ms.probes == 4 * 2);
  CHECK(ms.pass);
}
