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
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "json.hpp"

#include "emachine/system.hpp"

namespace emachine {

// Trace files are line-delimited JSON. The first line is the header
//   {"trace":"emachine","version":1,"rng":"mt19937_64","seed":S,"config":TEXT}
// followed, per cycle, by one "input" record and one "unit" record per unit
// in evaluation order (AS, then AM), and by a "reset" record per RESET.
// Keys appear in the order documented in README.md. Reals are printed in the
// shortest form that reads back to the same double.

inline constexpr int kTraceVersion = 1;

using OrderedJson = nlohmann::ordered_json;

OrderedJson trace_header(const System& system);
OrderedJson input_record(const CycleRecord& record);
/// unit is "AS" or "AM". State fields (e, wptr) are read from the unit after
/// the cycle.
OrderedJson unit_record(const CycleRecord& record, const char* unit, const Pem& pem);
OrderedJson reset_record(std::uint64_t nu);

/// Brain inputs from the fields of an input record; every field is optional.
/// dout and sel are ignored. Throws SymbolError for unknown symbols.
BrainInputs inputs_from_record(const nlohmann::json& j, const SystemConfig& config);

/// Observer that streams a trace. The header is written on construction when
/// the system is known, otherwise before the first record.
class TraceWriter : public CycleObserver {
 public:
  explicit TraceWriter(std::ostream& out) : out_(out) {}
  TraceWriter(std::ostream& out, const System& system);

  void on_reset(const System& system) override;
  void on_cycle(const System& system, const CycleRecord& record) override;

 private:
  void write(const OrderedJson& j);
  void begin(const System& system);

  std::ostream& out_;
  bool started_ = false;
};

struct ReplayResult {
  bool match = true;
  std::optional<std::uint64_t> diverged_at;  ///< cycle index of the first difference
  std::size_t records = 0;                   ///< records compared
  std::string detail;
};

/// Re-executes the recorded inputs from the header configuration and seed and
/// compares every regenerated line with the recorded one. An empty trace is a
/// vacuous match. Throws ProtocolError on a foreign or newer trace and
/// ParseError on malformed lines.
ReplayResult replay(std::istream& trace);

}  // namespace emachine
