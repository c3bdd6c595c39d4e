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

#include "emachine/script.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

namespace emachine {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view strip_comment(std::string_view line) {
  const std::size_t hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

struct KeyValue {
  std::string_view key;
  std::optional<std::string_view> value;
};

KeyValue key_value(std::string_view word) {
  const std::size_t eq = word.find('=');
  if (eq == std::string_view::npos) return {word, std::nullopt};
  return {word.substr(0, eq), word.substr(eq + 1)};
}

double parse_real(std::string_view text, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t parse_uint(std::string_view text, std::size_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "not a non-negative integer: '" + std::string(text) + "'");
  }
  return v;
}

bool parse_bit(std::string_view text, std::size_t line) {
  if (text == "1") return true;
  if (text == "0") return false;
  throw ParseError(line, "expected 0 or 1, got '" + std::string(text) + "'");
}

Symbol parse_symbol(const AlphabetRef& alphabet, std::string_view text, std::size_t line) {
  try {
    return alphabet->parse(text);
  } catch (const SymbolError& e) {
    throw ParseError(line, e.what());
  }
}

std::vector<Symbol> parse_symbols(std::span<const AlphabetRef> alphabets, std::string_view text,
                                  std::size_t line) {
  const auto parts = split(text, ',');
  if (parts.size() != alphabets.size()) {
    throw ParseError(line, "expected " + std::to_string(alphabets.size()) + " symbols, got " +
                               std::to_string(parts.size()));
  }
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out.push_back(parse_symbol(alphabets[i], parts[i], line));
  }
  return out;
}

std::vector<double> parse_reals(std::string_view text, std::size_t line) {
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_real(part, line));
  return out;
}

std::string join_reals(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

class ConfigBuilder {
 public:
  /// True when the line was a header line.
  bool accept(const std::vector<std::string_view>& w, std::size_t line) {
    const std::string_view head = w[0];
    if (head == "ALPHABET") {
      alphabet_line(w, line);
    } else if (head == "WORLD") {
      world_line(w, line);
    } else if (head == "AS") {
      as_line(w, line);
    } else if (head == "AM") {
      am_line(w, line);
    } else if (head == "SEED") {
      if (w.size() != 2) throw ParseError(line, "SEED takes one integer");
      seed_ = parse_uint(w[1], line);
    } else {
      return false;
    }
    return true;
  }

  SystemConfig finish() {
    try {
      // Constructing the assembly runs the structural checks.
      BrainAssembly check(config_.brain);
    } catch (const ConfigError& e) {
      throw ParseError(last_line_, e.what());
    }
    return std::move(config_);
  }

  std::optional<std::uint64_t> seed() const { return seed_; }

 private:
  AlphabetRef lookup(std::string_view name, std::size_t line) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) throw ParseError(line, "undeclared alphabet '" + std::string(name) + "'");
    return it->second;
  }

  std::vector<AlphabetRef> lookup_list(std::string_view names, std::size_t line) const {
    std::vector<AlphabetRef> out;
    for (auto n : split(names, ',')) out.push_back(lookup(n, line));
    return out;
  }

  void alphabet_line(const std::vector<std::string_view>& w, std::size_t line) {
    if (w.size() < 2) throw ParseError(line, "ALPHABET needs a name");
    const std::string name(w[1]);
    if (by_name_.count(name)) throw ParseError(line, "alphabet '" + name + "' declared twice");
    std::vector<std::string> members(w.begin() + 2, w.end());
    try {
      AlphabetRef a = make_alphabet(name, std::move(members));
      by_name_.emplace(name, a);
      config_.alphabets.push_back(std::move(a));
    } catch (const SymbolError& e) {
      throw ParseError(line, e.what());
    }
  }

  void world_line(const std::vector<std::string_view>& w, std::size_t line) {
    if (config_.world) throw ParseError(line, "WORLD declared twice");
    GramAlphabets gram;
    for (std::size_t i = 1; i < w.size(); ++i) {
      const auto kv = key_value(w[i]);
      if (!kv.value) throw ParseError(line, "WORLD expects key=value");
      if (kv.key == "addr") {
        gram.addr = lookup(*kv.value, line);
      } else if (kv.key == "data") {
        gram.data = lookup(*kv.value, line);
      } else {
        throw ParseError(line, "unknown WORLD key '" + std::string(kv.key) + "'");
      }
    }
    if (!gram.addr || !gram.data) throw ParseError(line, "WORLD needs addr= and data=");
    if (gram.addr->member_count() == 0) throw ParseError(line, "WORLD address alphabet is empty");
    config_.world = gram;
    last_line_ = line;
  }

  // Shared keys of AS and AM lines; returns false for keys it does not know.
  bool unit_key(PemParams& p, const KeyValue& kv, std::size_t line) {
    if (!kv.value) return false;
    if (kv.key == "a") {
      p.a = parse_real(*kv.value, line);
    } else if (kv.key == "tau") {
      p.tau = parse_real(*kv.value, line);
    } else if (kv.key == "capacity") {
      p.capacity = parse_uint(*kv.value, line);
    } else if (kv.key == "wx") {
      p.wx = parse_reals(*kv.value, line);
    } else {
      return false;
    }
    return true;
  }

  void validate(const PemParams& p, std::size_t line) const {
    try {
      p.validate();
    } catch (const ConfigError& e) {
      throw ParseError(line, e.what());
    }
  }

  void as_line(const std::vector<std::string_view>& w, std::size_t line) {
    if (!config_.world) throw ParseError(line, "AS needs a WORLD declared first");
    if (config_.brain.as) throw ParseError(line, "AS declared twice");
    PemParams p;
    p.inputs = {config_.world->addr, config_.world->data};
    p.outputs = {config_.world->data};
    p.wx = {1.0, 1.0};
    for (std::size_t i = 1; i < w.size(); ++i) {
      const auto kv = key_value(w[i]);
      if (!unit_key(p, kv, line)) throw ParseError(line, "unknown AS key '" + std::string(w[i]) + "'");
    }
    validate(p, line);
    config_.brain.as = std::move(p);
    last_line_ = line;
  }

  void am_line(const std::vector<std::string_view>& w, std::size_t line) {
    if (config_.brain.am) throw ParseError(line, "AM declared twice");
    PemParams p;
    AmLayout layout;
    bool aud = false;
    for (std::size_t i = 1; i < w.size(); ++i) {
      const auto kv = key_value(w[i]);
      if (unit_key(p, kv, line)) continue;
      if (kv.key == "in" && kv.value) {
        p.inputs = lookup_list(*kv.value, line);
      } else if (kv.key == "out" && kv.value) {
        p.outputs = lookup_list(*kv.value, line);
      } else if (kv.key == "aud" && !kv.value) {
        aud = true;
      } else if (kv.key == "ns" && !kv.value) {
        layout.sensory_from_ns = true;
      } else if (kv.key == "feedback" && kv.value) {
        const std::uint64_t k = parse_uint(*kv.value, line);
        if (k == 0) throw ParseError(line, "feedback output index is 1-based");
        layout.feedback = static_cast<std::size_t>(k - 1);
      } else {
        throw ParseError(line, "unknown AM key '" + std::string(w[i]) + "'");
      }
    }
    if (p.wx.empty()) p.wx.assign(p.inputs.size(), 1.0);
    const std::size_t fixed = (aud ? 1 : 0) + (layout.feedback ? 1 : 0);
    if (p.inputs.size() < fixed) throw ParseError(line, "AM has too few input slots");
    if (aud) layout.aud = p.inputs.front();
    layout.sensory.assign(p.inputs.begin() + (aud ? 1 : 0),
                          p.inputs.end() - (layout.feedback ? 1 : 0));
    if (layout.sensory_from_ns && !config_.world) {
      throw ParseError(line, "AM ns needs a WORLD declared first");
    }
    validate(p, line);
    config_.brain.am = std::move(p);
    config_.brain.am_layout = std::move(layout);
    last_line_ = line;
  }

  SystemConfig config_;
  std::map<std::string, AlphabetRef> by_name_;
  std::optional<std::uint64_t> seed_;
  std::size_t last_line_ = 1;
};

const AlphabetRef& require_world_addr(const SystemConfig& c, std::size_t line) {
  if (!c.world) throw ParseError(line, "no WORLD declared");
  return c.world->addr;
}

const AlphabetRef& require_world_data(const SystemConfig& c, std::size_t line) {
  if (!c.world) throw ParseError(line, "no WORLD declared");
  return c.world->data;
}

const PemParams& require_am(const SystemConfig& c, std::size_t line) {
  if (!c.brain.am) throw ParseError(line, "no AM declared");
  return *c.brain.am;
}

Command parse_set(const std::vector<std::string_view>& w, std::size_t line) {
  if (w.size() != 3) throw ParseError(line, "SET takes a signal and a value");
  static const std::map<std::string_view, Signal> signals{
      {"ns_sel", Signal::NsSel},     {"nm_sel", Signal::NmSel}, {"feedback", Signal::Feedback},
      {"refresh", Signal::Refresh}, {"wen_as", Signal::WenAs}, {"wen_am", Signal::WenAm}};
  auto it = signals.find(w[1]);
  if (it == signals.end()) throw ParseError(line, "unknown signal '" + std::string(w[1]) + "'");
  return SetCommand{it->second, parse_bit(w[2], line)};
}

Command parse_cycle(const std::vector<std::string_view>& w, const SystemConfig& c,
                    std::size_t line) {
  CycleCommand cmd;
  bool teaching = false;
  std::map<std::size_t, Symbol> teach;
  for (std::size_t i = 1; i < w.size(); ++i) {
    const auto kv = key_value(w[i]);
    if (!kv.value) {
      if (kv.key != "teach") throw ParseError(line, "unknown CYCLE word '" + std::string(w[i]) + "'");
      require_am(c, line);
      teaching = true;
      continue;
    }
    if (teaching && kv.key.size() > 1 && kv.key[0] == 'y') {
      const auto& outs = require_am(c, line).outputs;
      const std::uint64_t k = parse_uint(kv.key.substr(1), line);
      if (k == 0 || k > outs.size()) {
        throw ParseError(line, "teacher output '" + std::string(kv.key) + "' out of range");
      }
      teach.insert_or_assign(k - 1, parse_symbol(outs[k - 1], *kv.value, line));
    } else if (kv.key == "addr") {
      cmd.addr = parse_symbol(require_world_addr(c, line), *kv.value, line);
    } else if (kv.key == "din") {
      cmd.din = parse_symbol(require_world_data(c, line), *kv.value, line);
    } else if (kv.key == "vis") {
      require_am(c, line);
      const AmLayout& layout = c.brain.am_layout;
      if (layout.sensory_from_ns) throw ParseError(line, "AM sensory slot is fed by NS");
      cmd.vis = parse_symbols(layout.sensory, *kv.value, line);
    } else if (kv.key == "aud") {
      require_am(c, line);
      if (!c.brain.am_layout.aud) throw ParseError(line, "AM has no auditory slot");
      cmd.aud = parse_symbol(c.brain.am_layout.aud, *kv.value, line);
    } else {
      throw ParseError(line, "unknown CYCLE key '" + std::string(kv.key) + "'");
    }
  }
  if (c.world && !cmd.addr) throw ParseError(line, "CYCLE needs addr= when a WORLD is declared");
  if (teaching) {
    cmd.teach = epsilon_vector(c.brain.am->outputs);
    for (const auto& [k, s] : teach) cmd.teach[k] = s;
  }
  return cmd;
}

Command parse_assert(const std::vector<std::string_view>& w, const SystemConfig& c,
                     std::size_t line) {
  if (w.size() != 2) throw ParseError(line, "ASSERT takes one key=value");
  const auto kv = key_value(w[1]);
  if (!kv.value) throw ParseError(line, "ASSERT expects key=value");
  AssertCommand cmd;
  if (kv.key == "dout") {
    cmd.target = AssertCommand::Target::Dout;
    cmd.expected = {parse_symbol(require_world_data(c, line), *kv.value, line)};
  } else if (kv.key == "as") {
    if (!c.brain.as) throw ParseError(line, "no AS declared");
    cmd.target = AssertCommand::Target::As;
    cmd.expected = {parse_symbol(c.world->data, *kv.value, line)};
  } else if (kv.key == "y") {
    cmd.target = AssertCommand::Target::Y;
    if (c.brain.am) {
      cmd.expected = parse_symbols(c.brain.am->outputs, *kv.value, line);
    } else {
      cmd.expected = {parse_symbol(require_world_data(c, line), *kv.value, line)};
    }
  } else if (kv.key == "mem") {
    cmd.target = AssertCommand::Target::Mem;
    const AlphabetRef& data = require_world_data(c, line);
    std::vector<AlphabetRef> cells(c.world->addr->member_count(), data);
    cmd.expected = parse_symbols(cells, *kv.value, line);
  } else {
    throw ParseError(line, "unknown ASSERT key '" + std::string(kv.key) + "'");
  }
  return cmd;
}

Command parse_command_words(const std::vector<std::string_view>& w, const SystemConfig& c,
                            std::size_t line) {
  const std::string_view head = w[0];
  if (head == "SET") return parse_set(w, line);
  if (head == "PHASE") {
    if (w.size() != 2 || (w[1] != "train" && w[1] != "exam")) {
      throw ParseError(line, "PHASE takes train or exam");
    }
    return PhaseCommand{w[1] == "exam"};
  }
  if (head == "CYCLE") return parse_cycle(w, c, line);
  if (head == "RESET") {
    if (w.size() != 1) throw ParseError(line, "RESET takes no arguments");
    return ResetCommand{};
  }
  if (head == "ASSERT") return parse_assert(w, c, line);
  throw ParseError(line, "unknown command '" + std::string(head) + "'");
}

void collect(std::vector<AlphabetRef>& out, const AlphabetRef& a) {
  if (a && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
}

std::string join_names(std::span<const AlphabetRef> alphabets) {
  std::string out;
  for (std::size_t i = 0; i < alphabets.size(); ++i) {
    if (i) out += ',';
    out += alphabets[i]->name();
  }
  return out;
}

void format_unit_keys(std::ostringstream& os, const PemParams& p) {
  os << " a=" << format_real(p.a) << " tau=" << format_real(p.tau)
     << " capacity=" << p.capacity << " wx=" << join_reals(p.wx);
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

SystemConfig parse_config(std::string_view text) {
  ConfigBuilder builder;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto w = words(strip_comment(raw));
    if (w.empty()) continue;
    if (!builder.accept(w, line_no)) {
      throw ParseError(line_no, "not a header line: '" + std::string(w[0]) + "'");
    }
  }
  return builder.finish();
}

std::string format_config(const SystemConfig& config) {
  std::vector<AlphabetRef> alphabets;
  for (const auto& a : config.alphabets) collect(alphabets, a);
  if (config.world) {
    collect(alphabets, config.world->addr);
    collect(alphabets, config.world->data);
  }
  if (config.brain.am) {
    for (const auto& a : config.brain.am->inputs) collect(alphabets, a);
    for (const auto& a : config.brain.am->outputs) collect(alphabets, a);
  }

  std::ostringstream os;
  for (const auto& a : alphabets) {
    os << "ALPHABET " << a->name();
    for (std::size_t i = 0; i < a->member_count(); ++i) os << ' ' << a->print(static_cast<Token>(i));
    os << '\n';
  }
  if (config.world) {
    os << "WORLD addr=" << config.world->addr->name() << " data=" << config.world->data->name()
       << '\n';
  }
  if (config.brain.as) {
    os << "AS";
    format_unit_keys(os, *config.brain.as);
    os << '\n';
  }
  if (config.brain.am) {
    const PemParams& p = *config.brain.am;
    const AmLayout& layout = config.brain.am_layout;
    os << "AM in=" << join_names(p.inputs) << " out=" << join_names(p.outputs);
    format_unit_keys(os, p);
    if (layout.aud) os << " aud";
    if (layout.sensory_from_ns) os << " ns";
    if (layout.feedback) os << " feedback=" << (*layout.feedback + 1);
    os << '\n';
  }
  return os.str();
}

Script parse_script(std::string_view text) {
  ConfigBuilder builder;
  Script script;
  std::optional<SystemConfig> config;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto w = words(strip_comment(raw));
    if (w.empty()) continue;
    if (!config) {
      if (builder.accept(w, line_no)) continue;
      config = builder.finish();
    } else if (w[0] == "ALPHABET" || w[0] == "WORLD" || w[0] == "AS" || w[0] == "AM" ||
               w[0] == "SEED") {
      throw ParseError(line_no, "header line after the first command");
    }
    script.commands.push_back({line_no, parse_command_words(w, *config, line_no)});
  }
  script.config = config ? std::move(*config) : builder.finish();
  script.seed = builder.seed();
  return script;
}

Command parse_command(std::string_view line, const SystemConfig& config, std::size_t line_no) {
  const auto w = words(strip_comment(line));
  if (w.empty()) throw ParseError(line_no, "empty command");
  return parse_command_words(w, config, line_no);
}

}  // namespace emachine
