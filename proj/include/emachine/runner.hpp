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
#include <ostream>
#include <string_view>

#include "emachine/experiments.hpp"
#include "emachine/script.hpp"

namespace emachine {

/// Seed used when neither the caller nor the script header gives one.
inline constexpr std::uint64_t kDefaultSeed = 0;

/// A System driven by script commands. Writing flags set by SET or PHASE
/// persist and apply to every later CYCLE.
class ScriptMachine {
 public:
  ScriptMachine(SystemConfig config, std::uint64_t seed);

  System& system() noexcept { return system_; }
  const System& system() const noexcept { return system_; }
  bool wen_as() const noexcept { return wen_as_; }
  bool wen_am() const noexcept { return wen_am_; }
  const std::optional<CycleRecord>& last_cycle() const noexcept { return last_; }

  /// Runs one command. ASSERT outcomes are added to `report`; a CYCLE
  /// returns its record.
  std::optional<CycleRecord> execute(const Command& command, std::size_t line,
                                     ExperimentReport& report);

 private:
  System system_;
  bool wen_as_ = false;
  bool wen_am_ = false;
  std::optional<CycleRecord> last_;
};

/// Executes a parsed script. seed overrides the header SEED. When trace_out is
/// given the full trace is written to it.
ExperimentReport run_script(const Script& script, std::optional<std::uint64_t> seed,
                            std::ostream* trace_out = nullptr);

/// Parses and runs script text. Throws ParseError on bad text.
ExperimentReport run_script_text(std::string_view text, std::optional<std::uint64_t> seed,
                                 std::ostream* trace_out = nullptr);

}  // namespace emachine
