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

#include "emachine/runner.hpp"

#include <memory>

#include "emachine/trace.hpp"

namespace emachine {
namespace {

template <class... F>
struct Overloaded : F... {
  using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

const char* target_name(AssertCommand::Target t) {
  switch (t) {
    case AssertCommand::Target::Dout: return "dout";
    case AssertCommand::Target::Y: return "y";
    case AssertCommand::Target::As: return "as";
    case AssertCommand::Target::Mem: return "mem";
  }
  return "?";
}

}  // namespace

ScriptMachine::ScriptMachine(SystemConfig config, std::uint64_t seed)
    : system_(std::move(config), seed) {}

std::optional<CycleRecord> ScriptMachine::execute(const Command& command, std::size_t line,
                                                  ExperimentReport& report) {
  std::optional<CycleRecord> produced;
  std::visit(
      Overloaded{
          [&](const SetCommand& c) {
            Selectors sel = system_.selectors();
            switch (c.signal) {
              case Signal::NsSel: sel.ns_sel = c.value; break;
              case Signal::NmSel: sel.nm_sel = c.value; break;
              case Signal::Feedback: sel.feedback_on = c.value; break;
              case Signal::Refresh: sel.refresh_on = c.value; break;
              case Signal::WenAs: wen_as_ = c.value; break;
              case Signal::WenAm: wen_am_ = c.value; break;
            }
            system_.set_selectors(sel);
          },
          [&](const PhaseCommand& c) {
            Selectors sel = system_.selectors();
            sel.ns_sel = sel.nm_sel = !c.exam;
            wen_as_ = wen_am_ = !c.exam;
            system_.set_selectors(sel);
            if (c.exam) report.nu1 = system_.nu();
          },
          [&](const CycleCommand& c) {
            BrainInputs in;
            in.addr = c.addr;
            in.din = c.din;
            in.vis = c.vis;
            in.aud = c.aud;
            in.teach = c.teach;
            in.wen_as = wen_as_;
            in.wen_am = wen_am_;
            last_ = system_.cycle(std::move(in));
            report.nu2 = last_->nu;
            produced = last_;
          },
          [&](const ResetCommand&) { system_.reset(); },
          [&](const AssertCommand& c) {
            if (!last_) throw ProtocolError("line " + std::to_string(line) + ": ASSERT before any CYCLE");
            std::vector<Symbol> actual;
            switch (c.target) {
              case AssertCommand::Target::Dout: actual = {*last_->inputs.dout}; break;
              case AssertCommand::Target::As: actual = last_->outputs.as_io->y; break;
              case AssertCommand::Target::Y:
                if (last_->outputs.am_io) {
                  actual = last_->outputs.nm_y;
                } else {
                  actual = {*last_->outputs.ns_y};
                }
                break;
              case AssertCommand::Target::Mem: actual = system_.world()->memory(); break;
            }
            const bool ok = actual == c.expected;
            report.add_probe({last_->nu,
                              "line " + std::to_string(line) + ": " + target_name(c.target),
                              join_symbols(c.expected), join_symbols(actual)},
                             ok);
          },
      },
      command);
  return produced;
}

ExperimentReport run_script(const Script& script, std::optional<std::uint64_t> seed,
                            std::ostream* trace_out) {
  ScriptMachine machine(script.config, seed.value_or(script.seed.value_or(kDefaultSeed)));
  std::unique_ptr<TraceWriter> writer;
  if (trace_out) {
    writer = std::make_unique<TraceWriter>(*trace_out, machine.system());
    machine.system().attach(writer.get());
  }
  ExperimentReport report;
  report.protocol = "script";
  for (const auto& c : script.commands) machine.execute(c.command, c.line, report);
  if (writer) machine.system().detach(writer.get());
  report.set_metric("cycles", static_cast<double>(machine.system().nu()));
  return report;
}

ExperimentReport run_script_text(std::string_view text, std::optional<std::uint64_t> seed,
                                 std::ostream* trace_out) {
  return run_script(parse_script(text), seed, trace_out);
}

}  // namespace emachine
