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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "emachine/system.hpp"

namespace emachine {

// Teacher scripts are line-based text. '#' starts a comment, blank lines are
// ignored and '_' spells the empty symbol everywhere.
//
// Header (before the first command):
//   ALPHABET <name> <member>...
//   WORLD addr=<alphabet> data=<alphabet>
//   AS a=<real> tau=<real> capacity=<n> [wx=<real>,<real>]
//   AM in=<alphabet>,... out=<alphabet>,... a=<real> tau=<real> capacity=<n>
//      [wx=<real>,...] [aud] [ns] [feedback=<k>]
//   SEED <n>
//
// In an AM line, `aud` makes the first input slot auditory, `ns` feeds the
// single sensory slot from NS, and `feedback=<k>` makes the last input slot
// the delay register of output k (1-based).
//
// Commands:
//   SET ns_sel|nm_sel|feedback|refresh|wen_as|wen_am 0|1
//   PHASE train|exam
//   CYCLE [addr=<s>] [din=<s>] [vis=<s>,...] [aud=<s>] [teach y1=<s> y2=<s> ...]
//   RESET
//   ASSERT dout=<s> | y=<s>,... | as=<s> | mem=<s>,...

enum class Signal { NsSel, NmSel, Feedback, Refresh, WenAs, WenAm };

struct SetCommand {
  Signal signal;
  bool value;
};

/// train: ns_sel = nm_sel = 1 and writing on; exam: all four off.
struct PhaseCommand {
  bool exam;
};

struct CycleCommand {
  std::optional<Symbol> addr;
  std::optional<Symbol> din;
  std::vector<Symbol> vis;
  std::optional<Symbol> aud;
  std::vector<Symbol> teach;  ///< empty or one symbol per AM output
};

struct ResetCommand {};

struct AssertCommand {
  enum class Target { Dout, Y, As, Mem };
  Target target;
  std::vector<Symbol> expected;
};

using Command =
    std::variant<SetCommand, PhaseCommand, CycleCommand, ResetCommand, AssertCommand>;

struct ScriptCommand {
  std::size_t line;
  Command command;
};

struct Script {
  SystemConfig config;
  std::optional<std::uint64_t> seed;
  std::vector<ScriptCommand> commands;
};

/// Parses the header lines only. Throws ParseError.
SystemConfig parse_config(std::string_view text);

/// Canonical header text for a configuration (no SEED line); parse_config of
/// the result rebuilds an equivalent configuration.
std::string format_config(const SystemConfig& config);

/// Throws ParseError with the offending line.
Script parse_script(std::string_view text);

/// One command line against a configuration. Throws ParseError.
Command parse_command(std::string_view line, const SystemConfig& config, std::size_t line_no = 1);

/// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

}  // namespace emachine
