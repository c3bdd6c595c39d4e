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

#include "emachine/session.hpp"

namespace emachine {
namespace {

using Json = nlohmann::ordered_json;

Json names(std::span<const Symbol> symbols) {
  Json out = Json::array();
  for (const auto& s : symbols) out.push_back(s.name());
  return out;
}

Json ltm_table(const Pem& pem) {
  Json rows = Json::array();
  const PemGState& g = pem.g();
  for (std::size_t i = 0; i < g.written(); ++i) {
    rows.push_back({{"location", i + 1},
                    {"x", names(g.input_column(i))},
                    {"y", names(g.output_column(i))}});
  }
  return rows;
}

Json unit_state(const Pem& pem) {
  Json j;
  j["capacity"] = pem.params().capacity;
  j["wptr"] = pem.g().wptr();
  Json e = Json::array();
  for (double v : pem.e().e) e.push_back(v);
  j["e"] = std::move(e);
  j["ltm"] = ltm_table(pem);
  return j;
}

bool bit_value(const nlohmann::json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) {
    const auto n = v.get<long long>();
    if (n == 0 || n == 1) return n == 1;
  }
  throw ProtocolError("value must be 0, 1, true or false");
}

}  // namespace

std::string default_session_script() {
  return "ALPHABET addr 1 2\n"
         "ALPHABET data a b\n"
         "WORLD addr=addr data=data\n"
         "AS a=0.4 tau=100 capacity=64 wx=1,1\n";
}

Session::Session(std::string_view script_text, std::optional<std::uint64_t> seed) {
  load(script_text, seed);
}

Session::~Session() {
  if (machine_ && writer_) machine_->system().detach(writer_.get());
}

void Session::load(std::string_view script_text, std::optional<std::uint64_t> seed) {
  Script script = parse_script(script_text);
  auto machine = std::make_unique<ScriptMachine>(
      script.config, seed.value_or(script.seed.value_or(kDefaultSeed)));
  if (machine_ && writer_) machine_->system().detach(writer_.get());
  machine_ = std::move(machine);
  trace_.str("");
  trace_.clear();
  writer_ = std::make_unique<TraceWriter>(trace_, machine_->system());
  machine_->system().attach(writer_.get());
  report_ = ExperimentReport{};
  report_.protocol = "session";
  for (const auto& c : script.commands) machine_->execute(c.command, c.line, report_);
}

Json Session::snapshot() const {
  const System& system = machine_->system();
  Json j;
  j["event"] = "snapshot";
  j["nu"] = system.nu();
  j["seed"] = system.seed();
  j["config"] = format_config(system.config());
  const Selectors& sel = system.selectors();
  j["selectors"] = {{"ns_sel", sel.ns_sel},
                    {"nm_sel", sel.nm_sel},
                    {"feedback", sel.feedback_on},
                    {"refresh", sel.refresh_on}};
  j["wen"] = {{"as", machine_->wen_as()}, {"am", machine_->wen_am()}};
  j["world"] = system.world() ? Json{{"mem", names(system.world()->memory())}} : Json(nullptr);
  j["feedback_register"] = names(system.brain().feedback_register());
  Json units = Json::object();
  if (const Pem* as = system.brain().as_unit()) units["AS"] = unit_state(*as);
  if (const Pem* am = system.brain().am_unit()) units["AM"] = unit_state(*am);
  j["units"] = std::move(units);
  j["asserts"] = {{"probes", report_.probes}, {"mismatches", report_.mismatches}};
  return j;
}

Json Session::delta(const CycleRecord& record) const {
  const System& system = machine_->system();
  Json j;
  j["event"] = "delta";
  j["nu"] = record.nu;
  j["input"] = input_record(record);
  Json units = Json::object();
  auto add = [&](const char* name, const Pem& pem, const CycleIO& io) {
    Json u = unit_record(record, name, pem);
    if (io.wen) {
      const std::size_t loc = pem.g().written() - 1;
      u["ltm_row"] = {{"location", loc + 1},
                      {"x", names(pem.g().input_column(loc))},
                      {"y", names(pem.g().output_column(loc))}};
    } else {
      u["ltm_row"] = nullptr;
    }
    units[name] = std::move(u);
  };
  if (record.outputs.as_io) add("AS", *system.brain().as_unit(), *record.outputs.as_io);
  if (record.outputs.am_io) add("AM", *system.brain().am_unit(), *record.outputs.am_io);
  j["units"] = std::move(units);
  j["world"] = system.world() ? Json{{"mem", names(system.world()->memory())}} : Json(nullptr);
  return j;
}

Json Session::error(const std::string& message) const {
  return Json{{"event", "error"}, {"nu", machine_->system().nu()}, {"message", message}};
}

std::vector<Json> Session::handle(const nlohmann::json& message) {
  try {
    if (!message.is_object() || !message.contains("cmd") || !message["cmd"].is_string()) {
      return {error("message needs a string field \"cmd\"")};
    }
    const std::string cmd = message["cmd"].get<std::string>();
    const SystemConfig& config = machine_->system().config();
    if (cmd == "snapshot") return {snapshot()};
    if (cmd == "reset") {
      machine_->execute(ResetCommand{}, 0, report_);
      return {snapshot()};
    }
    if (cmd == "set") {
      if (message.contains("phase")) {
        const std::string phase = message["phase"].get<std::string>();
        if (phase != "train" && phase != "exam") return {error("phase must be train or exam")};
        machine_->execute(PhaseCommand{phase == "exam"}, 0, report_);
      } else {
        const std::string signal = message.at("signal").get<std::string>();
        const Command c = parse_command(
            "SET " + signal + (bit_value(message.at("value")) ? " 1" : " 0"), config);
        machine_->execute(c, 0, report_);
      }
      return {snapshot()};
    }
    if (cmd == "step") {
      const nlohmann::json inputs = message.value("inputs", nlohmann::json::object());
      const BrainInputs in = inputs_from_record(inputs, config);
      CycleCommand c{in.addr, in.din, in.vis, in.aud, in.teach};
      return {delta(*machine_->execute(c, 0, report_))};
    }
    if (cmd == "cycle") {
      std::string line = message.at("line").get<std::string>();
      if (line.rfind("CYCLE", 0) != 0) line = "CYCLE " + line;
      const Command c = parse_command(line, config);
      return {delta(*machine_->execute(c, 0, report_))};
    }
    if (cmd == "load_script") {
      std::optional<std::uint64_t> seed;
      if (message.contains("seed")) seed = message["seed"].get<std::uint64_t>();
      load(message.at("text").get<std::string>(), seed);
      return {snapshot()};
    }
    return {error("unknown command '" + cmd + "'")};
  } catch (const nlohmann::json::exception& e) {
    return {error(e.what())};
  } catch (const Error& e) {
    return {error(e.what())};
  }
}

std::vector<std::string> Session::handle_line(std::string_view line) {
  const auto message = nlohmann::json::parse(line, nullptr, false);
  std::vector<std::string> out;
  if (message.is_discarded()) {
    out.push_back(error("malformed JSON").dump());
    return out;
  }
  for (const auto& reply : handle(message)) out.push_back(reply.dump());
  return out;
}

}  // namespace emachine
