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

#include "emachine/trace.hpp"

#include <algorithm>
#include <vector>

#include "emachine/rng.hpp"
#include "emachine/script.hpp"

namespace emachine {
namespace {

OrderedJson names(std::span<const Symbol> symbols) {
  OrderedJson out = OrderedJson::array();
  for (const auto& s : symbols) out.push_back(s.name());
  return out;
}

OrderedJson optional_name(const std::optional<Symbol>& s) {
  return s ? OrderedJson(s->name()) : OrderedJson(nullptr);
}

OrderedJson reals(std::span<const double> values) {
  OrderedJson out = OrderedJson::array();
  for (double v : values) out.push_back(v);
  return out;
}

std::optional<Symbol> symbol_field(const nlohmann::json& j, const char* key,
                                   const AlphabetRef& alphabet) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!alphabet) throw ProtocolError(std::string("trace field '") + key + "' has no alphabet");
  return alphabet->parse(j[key].get<std::string>());
}

std::vector<Symbol> symbol_list(const nlohmann::json& j, const char* key,
                                std::span<const AlphabetRef> alphabets) {
  std::vector<Symbol> out;
  if (!j.contains(key)) return out;
  const auto& arr = j[key];
  if (arr.empty()) return out;
  if (arr.size() != alphabets.size()) {
    throw ProtocolError(std::string("trace field '") + key + "' has the wrong width");
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(alphabets[i]->parse(arr[i].get<std::string>()));
  }
  return out;
}

Selectors selectors_from_record(const nlohmann::json& j) {
  const auto& s = j.at("sel");
  Selectors sel;
  sel.ns_sel = s.at("ns_sel").get<bool>();
  sel.nm_sel = s.at("nm_sel").get<bool>();
  sel.feedback_on = s.at("feedback").get<bool>();
  sel.refresh_on = s.at("refresh").get<bool>();
  return sel;
}

// Collects regenerated lines during replay.
class LineSink : public CycleObserver {
 public:
  std::vector<std::string> lines;

  void on_reset(const System& system) override {
    lines.push_back(reset_record(system.nu()).dump());
  }
  void on_cycle(const System& system, const CycleRecord& record) override {
    lines.push_back(input_record(record).dump());
    if (record.outputs.as_io) lines.push_back(unit_record(record, "AS", *system.brain().as_unit()).dump());
    if (record.outputs.am_io) lines.push_back(unit_record(record, "AM", *system.brain().am_unit()).dump());
  }
};

std::uint64_t nu_of(const std::string& line, std::uint64_t fallback) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_object() && j.contains("nu") && j["nu"].is_number_unsigned()) {
    return j["nu"].get<std::uint64_t>();
  }
  return fallback;
}

}  // namespace

BrainInputs inputs_from_record(const nlohmann::json& j, const SystemConfig& config) {
  BrainInputs in;
  const AlphabetRef addr = config.world ? config.world->addr : nullptr;
  const AlphabetRef data = config.world ? config.world->data : nullptr;
  in.addr = symbol_field(j, "addr", addr);
  in.din = symbol_field(j, "din", data);
  if (config.brain.am) {
    const AmLayout& layout = config.brain.am_layout;
    if (!layout.sensory_from_ns) in.vis = symbol_list(j, "vis", layout.sensory);
    in.aud = symbol_field(j, "aud", layout.aud);
    in.teach = symbol_list(j, "teach", config.brain.am->outputs);
  }
  in.wen_as = j.value("wen_as", false);
  in.wen_am = j.value("wen_am", false);
  return in;
}

OrderedJson trace_header(const System& system) {
  OrderedJson j;
  j["trace"] = "emachine";
  j["version"] = kTraceVersion;
  j["rng"] = std::string(kRngName);
  j["seed"] = system.seed();
  j["config"] = format_config(system.config());
  return j;
}

OrderedJson input_record(const CycleRecord& record) {
  const BrainInputs& in = record.inputs;
  OrderedJson j;
  j["nu"] = record.nu;
  j["kind"] = "input";
  j["sel"] = {{"ns_sel", record.selectors.ns_sel},
              {"nm_sel", record.selectors.nm_sel},
              {"feedback", record.selectors.feedback_on},
              {"refresh", record.selectors.refresh_on}};
  j["addr"] = optional_name(in.addr);
  j["din"] = optional_name(in.din);
  j["dout"] = optional_name(in.dout);
  j["vis"] = names(in.vis);
  j["aud"] = optional_name(in.aud);
  j["teach"] = names(in.teach);
  j["wen_as"] = in.wen_as;
  j["wen_am"] = in.wen_am;
  return j;
}

OrderedJson unit_record(const CycleRecord& record, const char* unit, const Pem& pem) {
  const bool is_as = std::string_view(unit) == "AS";
  const CycleIO& io = is_as ? *record.outputs.as_io : *record.outputs.am_io;
  OrderedJson j;
  j["nu"] = record.nu;
  j["kind"] = "unit";
  j["unit"] = unit;
  j["x"] = names(io.x);
  j["xy"] = names(io.xy);
  j["wen"] = io.wen;
  j["s"] = reals(io.s);
  j["se"] = reals(io.se);
  j["e"] = reals(pem.e().e);
  j["iwin"] = io.iwin ? OrderedJson(*io.iwin + 1) : OrderedJson(nullptr);
  j["y"] = names(io.y);
  j["wptr"] = pem.g().wptr();
  if (is_as) {
    j["center"] = record.outputs.ns_y ? names(std::span(&*record.outputs.ns_y, 1)) : OrderedJson::array();
    j["oracle"] = optional_name(record.inputs.dout);
  } else {
    j["center"] = names(record.outputs.nm_y);
    j["oracle"] = nullptr;
  }
  j["refreshed"] = is_as ? false : record.outputs.refreshed;
  return j;
}

OrderedJson reset_record(std::uint64_t nu) {
  OrderedJson j;
  j["nu"] = nu;
  j["kind"] = "reset";
  return j;
}

TraceWriter::TraceWriter(std::ostream& out, const System& system) : out_(out) { begin(system); }

void TraceWriter::begin(const System& system) {
  if (started_) return;
  started_ = true;
  write(trace_header(system));
}

void TraceWriter::on_reset(const System& system) {
  begin(system);
  write(reset_record(system.nu()));
}

void TraceWriter::on_cycle(const System& system, const CycleRecord& record) {
  begin(system);
  write(input_record(record));
  if (record.outputs.as_io) write(unit_record(record, "AS", *system.brain().as_unit()));
  if (record.outputs.am_io) write(unit_record(record, "AM", *system.brain().am_unit()));
}

void TraceWriter::write(const OrderedJson& j) { out_ << j.dump() << '\n'; }

ReplayResult replay(std::istream& trace) {
  std::vector<std::string> recorded;
  for (std::string line; std::getline(trace, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) recorded.push_back(std::move(line));
  }
  ReplayResult result;
  if (recorded.empty()) {
    result.detail = "empty trace";
    return result;
  }

  const auto header = nlohmann::json::parse(recorded[0], nullptr, false);
  if (!header.is_object() || header.value("trace", "") != "emachine") {
    throw ProtocolError("not an emachine trace");
  }
  if (header.value("version", 0) != kTraceVersion) {
    throw ProtocolError("trace version " + std::to_string(header.value("version", 0)) +
                        " is not supported (expected " + std::to_string(kTraceVersion) + ")");
  }
  if (header.value("rng", "") != kRngName) {
    throw ProtocolError("trace uses generator '" + header.value("rng", "") + "'");
  }

  System system(parse_config(header.at("config").get<std::string>()),
                header.at("seed").get<std::uint64_t>());
  LineSink sink;
  system.attach(&sink);
  sink.lines.push_back(trace_header(system).dump());

  auto diverge = [&](std::size_t index, std::string detail) {
    result.match = false;
    result.diverged_at = nu_of(recorded[index], system.nu());
    result.detail = std::move(detail);
    return result;
  };

  auto first_difference = [&](std::size_t limit) -> std::optional<std::size_t> {
    limit = std::min({limit, recorded.size(), sink.lines.size()});
    for (std::size_t i = 0; i < limit; ++i) {
      if (recorded[i] != sink.lines[i]) return i;
    }
    return std::nullopt;
  };

  for (std::size_t i = 1; i < recorded.size(); ++i) {
    // Drive the system from each input or reset record; unit records are
    // regenerated by the sink.
    const auto j = nlohmann::json::parse(recorded[i], nullptr, false);
    if (!j.is_object()) throw ParseError(i + 1, "trace record is not a JSON object");
    const std::string kind = j.value("kind", "");
    try {
      if (kind == "input") {
        system.set_selectors(selectors_from_record(j));
        system.cycle(inputs_from_record(j, system.config()));
      } else if (kind == "reset") {
        system.reset();
      } else if (kind != "unit") {
        throw ParseError(i + 1, "unknown record kind '" + kind + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(i + 1, e.what());
    } catch (const Error& e) {
      if (auto first = first_difference(i)) return diverge(*first, "line " + std::to_string(*first + 1) + " differs");
      return diverge(i, std::string("re-execution failed: ") + e.what());
    }
  }

  const std::size_t n = std::min(recorded.size(), sink.lines.size());
  if (auto first = first_difference(n)) {
    return diverge(*first, "line " + std::to_string(*first + 1) + " differs");
  }
  result.records = n;
  if (recorded.size() != sink.lines.size()) {
    const std::size_t i = std::min(n, recorded.size() - 1);
    return diverge(i, "trace has " + std::to_string(recorded.size()) + " lines, replay produced " +
                          std::to_string(sink.lines.size()));
  }
  return result;
}

}  // namespace emachine
