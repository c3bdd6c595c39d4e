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

#include <array>
#include <random>

#include "emachine/experiments.hpp"
#include "emachine/pem.hpp"
#include "emachine/system.hpp"

using namespace emachine;

namespace {

constexpr double kChiSquare3Df01 = 11.345;

double chi_square(const std::array<std::size_t, 4>& counts, std::size_t n) {
  const double expected = static_cast<double>(n) / 4.0;
  double stat = 0.0;
  for (std::size_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// Four locations with identical inputs and distinct outputs.
Pem tied_unit() {
  PemParams p;
  p.inputs = {make_alphabet("A", {"1"}), make_alphabet("D", {"a"})};
  p.outputs = {make_alphabet("O", {"o1", "o2", "o3", "o4"})};
  p.wx = {1.0, 1.0};
  p.a = 0.4;
  p.tau = 100.0;
  p.capacity = 4;
  Pem unit(p);
  ChoiceRng rng(0);
  const std::vector<Symbol> x{p.inputs[0]->member(0), p.inputs[1]->member(0)};
  for (std::size_t k = 0; k < 4; ++k) {
    const Symbol y[1] = {p.outputs[0]->member(k)};
    unit.cycle(x, std::span<const Symbol>(y), true, rng);
  }
  unit.reset_e();
  return unit;
}

struct Run {
  std::vector<std::optional<std::size_t>> winners;
  std::vector<std::vector<double>> e;
  std::vector<std::string> dout;
};

Run drive(std::uint64_t seed, std::uint64_t input_seed) {
  const GramAlphabets gram = small_gram_alphabets();
  System system(theorem3_config(gram, 5.0, 0.4, 200), seed);
  std::mt19937_64 gen(input_seed);
  std::vector<Symbol> data = gram.data->members();
  data.push_back(gram.data->epsilon());
  Run run;
  for (int i = 0; i < 200; ++i) {
    Selectors sel;
    sel.ns_sel = gen() % 2 == 0;
    system.set_selectors(sel);
    BrainInputs in;
    in.addr = gram.addr->member(gen() % 2);
    in.din = data[gen() % 3];
    in.wen_as = gen() % 2 == 0;
    const CycleRecord r = system.cycle(in);
    run.winners.push_back(r.outputs.as_io->iwin);
    run.e.push_back(system.brain().as_unit()->e().e);
    run.dout.push_back(r.inputs.dout->name());
  }
  return run;
}

}  // namespace

TEST_CASE("statistic oracle") {
  CHECK(chi_square({25, 25, 25, 25}, 100) == 0.0);
  CHECK(chi_square({40, 20, 20, 20}, 100) == doctest::Approx(12.0));
}

TEST_CASE("choose: a four-way tie is uniform") {
  ChoiceRng rng(2024);
  const std::vector<double> se{0.5, 1.5, 1.5, 0.0, 1.5, 1.5};
  const std::size_t tied[] = {1, 2, 4, 5};
  std::array<std::size_t, 4> counts{};
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = choose(se, rng);
    REQUIRE(w.has_value());
    const auto it = std::find(std::begin(tied), std::end(tied), *w);
    REQUIRE(it != std::end(tied));
    ++counts[static_cast<std::size_t>(it - std::begin(tied))];
  }
  CHECK(chi_square(counts, n) < kChiSquare3Df01);
}

TEST_CASE("a unit with four equal candidates picks each uniformly") {
  Pem unit = tied_unit();
  ChoiceRng rng(77);
  const std::vector<Symbol> x{unit.params().inputs[0]->member(0),
                              unit.params().inputs[1]->member(0)};
  std::array<std::size_t, 4> counts{};
  const std::size_t n = 100000;
  for (std::size_t i = 0; i < n; ++i) {
    const CycleIO io = unit.cycle(x, std::nullopt, false, rng);
    REQUIRE(io.iwin.has_value());
    ++counts[*io.iwin];
  }
  CHECK(chi_square(counts, n) < kChiSquare3Df01);
}

TEST_CASE("same seed and inputs give the same run") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Run a = drive(s, s + 1000);
    const Run b = drive(s, s + 1000);
    CHECK(a.winners == b.winners);
    CHECK(a.e == b.e);
    CHECK(a.dout == b.dout);
  }
}

TEST_CASE("tie-breaking depends on the seed") {
  Pem first = tied_unit();
  Pem second = tied_unit();
  ChoiceRng r1(1), r2(2);
  auto probe = [](const Pem& u) {
    return std::vector<Symbol>{u.params().inputs[0]->member(0), u.params().inputs[1]->member(0)};
  };
  const auto x1 = probe(first), x2 = probe(second);
  bool differs = false;
  for (int i = 0; i < 64 && !differs; ++i) {
    differs = first.cycle(x1, std::nullopt, false, r1).iwin !=
              second.cycle(x2, std::nullopt, false, r2).iwin;
  }
  CHECK(differs);
}

TEST_CASE("a copied unit continues identically") {
  Pem unit = tied_unit();
  ChoiceRng rng(5);
  Pem copy = unit;
  ChoiceRng rng_copy = rng;
  const std::vector<Symbol> x{unit.params().inputs[0]->member(0),
                              unit.params().inputs[1]->member(0)};
  for (int i = 0; i < 100; ++i) {
    const CycleIO a = unit.cycle(x, std::nullopt, false, rng);
    const CycleIO b = copy.cycle(x, std::nullopt, false, rng_copy);
    CHECK(a.iwin == b.iwin);
    CHECK(unit.e().e == copy.e().e);
  }
}
