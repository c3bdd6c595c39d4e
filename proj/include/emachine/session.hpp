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
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "emachine/runner.hpp"
#include "emachine/trace.hpp"

namespace emachine {

// Session protocol: one JSON object per line in each direction.
//
// Client to server, field "cmd":
//   {"cmd":"step","inputs":{...}}        one cycle; inputs use the keys of a
//                                         trace input record, all optional
//   {"cmd":"cycle","line":"addr=1 din=a"} one CYCLE command in script syntax
//   {"cmd":"set","signal":"ns_sel","value":1} or {"cmd":"set","phase":"exam"}
//   {"cmd":"reset"}
//   {"cmd":"load_script","text":"...","seed":7}  new assembly, commands run
//   {"cmd":"snapshot"}
//
// Server to client, field "event":
//   snapshot  full state: selectors, world memory, per unit e and LTM
//   delta     one cycle: input record, per unit cycle record and new LTM row
//   error     message; the session stays usable

/// Configuration served when a session starts without a script: the small
/// GRAM with an AS unit.
std::string default_session_script();

/// One console session. Owns its assembly and a concurrent trace.
class Session {
 public:
  explicit Session(std::string_view script_text = default_session_script(),
                   std::optional<std::uint64_t> seed = std::nullopt);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  nlohmann::ordered_json snapshot() const;

  /// Replies to one message, in order.
  std::vector<nlohmann::ordered_json> handle(const nlohmann::json& message);

  /// Text form of handle: one reply line per element, without newlines.
  std::vector<std::string> handle_line(std::string_view line);

  const ScriptMachine& machine() const noexcept { return *machine_; }

  /// Everything traced since the last load_script.
  std::string trace() const { return trace_.str(); }

 private:
  void load(std::string_view script_text, std::optional<std::uint64_t> seed);
  nlohmann::ordered_json delta(const CycleRecord& record) const;
  nlohmann::ordered_json error(const std::string& message) const;

  std::unique_ptr<ScriptMachine> machine_;
  std::unique_ptr<TraceWriter> writer_;
  std::ostringstream trace_;
  ExperimentReport report_;
};

}  // namespace emachine
