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

// emachine: run teacher scripts, replay traces, reproduce the experiments and
// host console sessions.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "emachine/adversary.hpp"
#include "emachine/experiments.hpp"
#include "emachine/report.hpp"
#include "emachine/runner.hpp"
#include "emachine/server.hpp"
#include "emachine/session.hpp"
#include "emachine/trace.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw emachine::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  if (path.empty()) return nullptr;
  auto out = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*out) throw emachine::Error("cannot write '" + path + "'");
  return out;
}

int finish(const emachine::ExperimentReport& report, const std::string& report_out) {
  std::cout << emachine::report_summary(report) << '\n';
  for (const auto& r : report.records) {
    if (r.expected != r.actual) {
      std::cout << "  mismatch at nu=" << r.nu << " " << r.input << ": expected " << r.expected
                << ", got " << r.actual << '\n';
    }
  }
  if (auto out = open_out(report_out)) *out << emachine::report_to_json(report).dump(2) << '\n';
  return report.pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"E-machine simulator"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string trace_out, report_out;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "64-bit seed of the session generator");
    cmd->add_option("--report-out", report_out, "write the JSON report here");
  };

  auto* run = app.add_subcommand("run", "execute a teacher script");
  std::string script_path;
  run->add_option("script", script_path, "script file")->required();
  run->add_option("--trace-out", trace_out, "write the trace here");
  add_common(run);

  auto* rep = app.add_subcommand("replay", "re-execute a trace and compare it");
  std::string trace_path;
  rep->add_option("trace", trace_path, "trace file")->required();

  auto* exp = app.add_subcommand("experiment", "run an experiment protocol");
  exp->require_subcommand(1);

  auto* t3 = exp->add_subcommand("theorem3", "AS simulates the GRAM");
  double tau = 0.0;
  std::size_t seeds = 20, probes = 1000;
  double write_fraction = emachine::kProbeWriteFraction;
  t3->add_option("--tau", tau, "decay constant; default tau_min(span)");
  t3->add_option("--seeds", seeds, "consecutive seeds")->check(CLI::PositiveNumber);
  t3->add_option("--probes", probes, "examination probes per seed");
  t3->add_option("--write-fraction", write_fraction, "share of writing probes")
      ->check(CLI::Range(0.0, 1.0));
  t3->add_option("--trace-out", trace_out, "trace of the first seed");
  add_common(t3);

  auto* t4 = exp->add_subcommand("theorem4", "AM learns combinational tables in one pass");
  std::size_t tables = 50;
  t4->add_option("--tables", tables, "random tables");
  add_common(t4);

  auto* ms = exp->add_subcommand("mentalset", "pre-tuned names select a Boolean function");
  std::size_t k = 2;
  double ms_tau = 100.0;
  bool refresh = false;
  std::optional<std::uint64_t> function;
  ms->add_option("--k", k, "visual inputs")->check(CLI::Range(1, 5));
  ms->add_option("--tau", ms_tau, "decay constant");
  ms->add_flag("--refresh", refresh, "proprioceptive refresh during training");
  ms->add_option("--function", function, "one function number; default all");
  ms->add_option("--trace-out", trace_out, "trace (with --function)");
  add_common(ms);

  auto* adv = exp->add_subcommand("adversary", "theorems 1 and 2 falsification matrix");
  std::size_t max_m = 6, budget = 32;
  adv->add_option("--max-m", max_m, "largest m")->check(CLI::PositiveNumber);
  adv->add_option("--budget", budget, "training steps per learner");
  add_common(adv);

  auto* srv = app.add_subcommand("serve", "host console sessions");
  std::uint16_t port = 7878;
  std::string serve_script;
  srv->add_option("--port", port, "TCP port on 127.0.0.1 (0: any free port)");
  srv->add_option("--script", serve_script, "script loaded into every new session");
  srv->add_option("--seed", seed, "64-bit seed of the session generator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*run) {
      auto trace = open_out(trace_out);
      const auto report = emachine::run_script_text(read_file(script_path), seed, trace.get());
      return finish(report, report_out);
    }

    if (*rep) {
      std::ifstream in(trace_path, std::ios::binary);
      if (!in) throw emachine::Error("cannot open '" + trace_path + "'");
      const auto result = emachine::replay(in);
      if (result.match) {
        std::cout << "Match (" << result.records << " records"
                  << (result.records == 0 ? ", vacuous" : "") << ")\n";
        return kExitPass;
      }
      std::cout << "Diverges at nu=" << *result.diverged_at << ": " << result.detail << '\n';
      return kExitFail;
    }

    const std::uint64_t s = seed.value_or(emachine::kDefaultSeed);
    if (*t3) {
      if (!trace_out.empty()) {
        // The first seed again, traced.
        auto file = open_out(trace_out);
        emachine::TraceWriter writer(*file);
        emachine::run_theorem3(emachine::theorem3_seed_setup(s, probes, tau, write_fraction),
                               &writer);
      }
      return finish(emachine::run_theorem3_suite(seeds, probes, tau, s, write_fraction),
                    report_out);
    }
    if (*t4) return finish(emachine::run_theorem4_suite(tables, s), report_out);
    if (*ms) {
      if (function) {
        emachine::MentalSetSpec spec;
        spec.k = k;
        spec.truth_table = emachine::boolean_function(k, *function);
        spec.refresh_on = refresh;
        spec.tau = ms_tau;
        auto file = open_out(trace_out);
        std::optional<emachine::TraceWriter> writer;
        if (file) writer.emplace(*file);
        return finish(emachine::run_mental_set(spec, s, writer ? &*writer : nullptr), report_out);
      }
      return finish(emachine::run_mental_set_suite(k, ms_tau, refresh, s), report_out);
    }
    if (*adv) return finish(emachine::run_adversary(max_m, s, budget), report_out);

    if (*srv) {
      emachine::Server server(port, serve_script.empty() ? emachine::default_session_script()
                                                        : read_file(serve_script),
                              seed);
      std::cout << "listening on 127.0.0.1:" << server.port() << std::endl;
      server.run(true);
      return kExitPass;
    }
  } catch (const emachine::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
