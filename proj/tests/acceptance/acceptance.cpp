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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "emachine/adversary.hpp"
#include "emachine/experiments.hpp"
#include "emachine/kernels.hpp"
#include "emachine/pem.hpp"
#include "emachine/runner.hpp"
#include "emachine/trace.hpp"
#include "support/random_script.hpp"

using namespace emachine;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0.0 && elapsed >= limit_s) {
    out.ok = false;
    out.detail += " (over the " + format_real(limit_s) + " s budget)";
  }
  if (!out.ok) ++failures;
  std::printf("%s %-28s %8.3f s  %s\n", out.ok ? "PASS" : "FAIL", name, elapsed,
              out.detail.c_str());
  std::fflush(stdout);
}

std::string load(const std::string& name) {
  std::ifstream in(std::string(EMACHINE_SCRIPTS_DIR) + "/" + name);
  if (!in) throw Error("cannot open " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome gram_walkthrough() {
  static const char* expected_dout[] = {"a", "a", "b", "b", "b", "a", "a", "a", "a", "a"};
  std::ostringstream trace;
  const ExperimentReport r = run_script_text(load("gram_walkthrough.ems"), std::nullopt, &trace);
  std::istringstream in(trace.str());
  std::size_t cycles = 0, wrong = 0;
  for (std::string line; std::getline(in, line);) {
    const auto j = nlohmann::json::parse(line);
    if (j.value("kind", "") != "input") continue;
    const auto nu = j["nu"].get<std::size_t>();
    if (nu >= 10 || j["dout"] != expected_dout[nu]) ++wrong;
    ++cycles;
  }
  const bool ok = r.pass && r.probes == 20 && cycles == 10 && wrong == 0;
  return {ok, "cycles=" + std::to_string(cycles) + " dout_mismatches=" + std::to_string(wrong) +
                  " asserts=" + std::to_string(r.probes - r.mismatches) + "/" +
                  std::to_string(r.probes)};
}

Outcome theorem3() {
  const ExperimentReport good = run_theorem3_suite(20, 1000, 0.0, 0);
  const double span = good.metric("span");
  const ExperimentReport control = run_theorem3_suite(20, 1000, span / 20.0, 0);
  const bool ok = good.pass && good.probes == 20000 && span == 4 + 1000 - 1 &&
                  control.mismatches >= 1;
  return {ok, "probes=" + std::to_string(good.probes) +
                  " mismatches=" + std::to_string(good.mismatches) +
                  " tau=" + format_real(good.metric("tau")) +
                  " control_mismatches=" + std::to_string(control.mismatches)};
}

Outcome adversary() {
  const ExperimentReport r = run_adversary(6, 0);
  std::size_t expected = 0;
  for (std::size_t m = 1; m <= 6; ++m) expected += 3 * (2 + m * (m - 1));
  return {r.pass && r.probes == expected,
          "verdicts=" + std::to_string(r.probes - r.mismatches) + "/" + std::to_string(r.probes)};
}

Outcome theorem4() {
  const ExperimentReport r = run_theorem4_suite(50, 0);
  const double se_ne_s = r.metric("se_ne_s_cycles");
  return {r.pass && r.probes == 50 * 9 && se_ne_s == 0.0,
          "correct=" + std::to_string(r.probes - r.mismatches) + "/" + std::to_string(r.probes) +
              " se_ne_s_cycles=" + format_real(se_ne_s)};
}

Outcome mental_set() {
  const ExperimentReport k2 = run_mental_set_suite(2, 100.0, false, 0);
  const ExperimentReport k3 = run_mental_set_suite(3, 100.0, false, 0);
  const bool ok = k2.pass && k2.probes == 64 && mental_set_storage(2) == 8 &&
                  mental_set_functions(2) == 16 && k3.pass && k3.probes == 256 * 8 &&
                  mental_set_storage(3) == 16 && mental_set_functions(3) == 256;
  return {ok, "k2=" + std::to_string(k2.probes - k2.mismatches) + "/" + std::to_string(k2.probes) +
                  " k3=" + std::to_string(k3.probes - k3.mismatches) + "/" +
                  std::to_string(k3.probes)};
}

// Cycles until e of a freshly written location falls to half its seed value,
// with every later input mismatching it.
std::size_t measured_half_life(double tau) {
  const AlphabetRef addr = make_alphabet("A", {"1", "2"});
  const AlphabetRef data = make_alphabet("D", {"a", "b"});
  PemParams p;
  p.inputs = {addr, data};
  p.outputs = {data};
  p.wx = {1.0, 1.0};
  p.a = 0.4;
  p.tau = tau;
  p.capacity = 1;
  Pem unit(p);
  ChoiceRng rng(0);
  const std::vector<Symbol> stored{addr->member(0), data->member(0)};
  const std::vector<Symbol> other{addr->member(1), data->member(1)};
  const Symbol y[1] = {data->member(0)};
  unit.cycle(stored, std::span<const Symbol>(y), true, rng);
  const double start = unit.e().e[0];
  std::size_t n = 0;
  while (unit.e().e[0] > start / 2.0) {
    unit.cycle(other, std::nullopt, false, rng);
    ++n;
  }
  return n;
}

Outcome decay() {
  bool ok = true;
  std::string detail;
  for (double tau : {10.0, 100.0, 1000.0}) {
    const std::size_t n = measured_half_life(tau);
    const double closed = t_decay(2.0, 1.0, tau);
    ok = ok && std::abs(static_cast<double>(n) - closed) <= 1.0;
    detail += "tau=" + format_real(tau) + ":" + std::to_string(n) + "~" + format_real(closed) + " ";
  }
  const double t = t_decay(2.0, 1.0, 100.0);
  ok = ok && std::abs(t - 68.97) <= 0.01;
  return {ok, detail + "t_decay(2,1,100)=" + format_real(t)};
}

Outcome determinism() {
  std::size_t runs = 0, bad = 0;
  auto check = [&](const std::string& script) {
    std::ostringstream a, b;
    run_script_text(script, std::nullopt, &a);
    run_script_text(script, std::nullopt, &b);
    std::istringstream in(a.str());
    if (a.str() != b.str() || !replay(in).match) ++bad;
    ++runs;
  };
  for (const char* name : {"gram_walkthrough.ems", "theorem3.ems", "theorem4.ems", "mentalset_k2.ems"}) {
    check(load(name));
  }
  for (std::uint64_t s = 0; s < 100; ++s) check(testing::random_script(s));
  return {bad == 0, "replayed=" + std::to_string(runs - bad) + "/" + std::to_string(runs)};
}

Outcome uniformity() {
  constexpr double kCritical = 11.345;  // chi-square, 3 degrees of freedom, alpha 0.01
  constexpr std::size_t kDraws = 100000;
  ChoiceRng rng(0);
  const std::vector<double> se{1.0, 1.0, 1.0, 1.0};
  std::array<std::size_t, 4> counts{};
  for (std::size_t i = 0; i < kDraws; ++i) ++counts[*choose(se, rng)];
  double stat = 0.0;
  const double expected = kDraws / 4.0;
  for (std::size_t c : counts) stat += (c - expected) * (c - expected) / expected;
  return {stat < kCritical, "chi2=" + format_real(stat) + " critical=" + format_real(kCritical)};
}

}  // namespace

int main() {
  std::printf("kernels: %s\n", std::string(kernels::isa_name(kernels::active().isa)).c_str());
  criterion("gram-walkthrough", 1.0, gram_walkthrough);
  criterion("theorem3-gram-simulation", 10.0, theorem3);
  criterion("theorems1-2-falsification", 5.0, adversary);
  criterion("theorem4-one-pass-learning", 10.0, theorem4);
  criterion("mental-set-k2-k3", 30.0, mental_set);
  criterion("decay-law", 0.0, decay);
  criterion("determinism-replay", 0.0, determinism);
  criterion("choice-uniformity", 0.0, uniformity);
  std::printf("%s: %d failing criteria\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}
