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

#include "emachine/gram.hpp"

namespace emachine {

GramAlphabets small_gram_alphabets() {
  return {make_alphabet("A", {"1", "2"}), make_alphabet("D", {"a", "b"})};
}

GramState::GramState(GramAlphabets alphabets, std::optional<OutputMap> output_map)
    : alphabets_(std::move(alphabets)), output_map_(std::move(output_map)) {
  if (!alphabets_.addr || !alphabets_.data) throw SymbolError("GRAM alphabets must be set");
  if (alphabets_.addr->member_count() == 0) {
    throw SymbolError("GRAM address alphabet '" + alphabets_.addr->name() + "' is empty");
  }
  if (output_map_) {
    if (!output_map_->out || output_map_->table.size() != alphabets_.data->size()) {
      throw SymbolError("GRAM output map must cover every data symbol");
    }
    for (Token t : output_map_->table) {
      if (t >= output_map_->out->size()) throw SymbolError("GRAM output map token out of range");
    }
    if (output_map_->table.back() != output_map_->out->epsilon_token()) {
      throw SymbolError("GRAM output map must send epsilon to epsilon");
    }
  }
  mem_.assign(alphabets_.addr->member_count(), alphabets_.data->epsilon_token());
}

const SymbolAlphabet& GramState::output_alphabet() const noexcept {
  return output_map_ ? *output_map_->out : *alphabets_.data;
}

std::vector<Symbol> GramState::memory() const {
  std::vector<Symbol> out;
  out.reserve(mem_.size());
  for (Token t : mem_) out.emplace_back(*alphabets_.data, t);
  return out;
}

Symbol GramState::cell(const Symbol& addr) const {
  return Symbol(*alphabets_.data, mem_[cell_index(addr)]);
}

std::size_t GramState::cell_index(const Symbol& addr) const {
  if (&addr.alphabet() != alphabets_.addr.get()) {
    throw SymbolError("address '" + addr.name() + "' is not from alphabet '" +
                      alphabets_.addr->name() + "'");
  }
  if (addr.is_epsilon()) throw SymbolError("GRAM address must not be empty");
  return addr.token();
}

Symbol GramState::translate(Token data) const {
  if (!output_map_) return Symbol(*alphabets_.data, data);
  return Symbol(*output_map_->out, output_map_->table[data]);
}

bool operator==(const GramState& lhs, const GramState& rhs) {
  return lhs.alphabets_.addr == rhs.alphabets_.addr && lhs.alphabets_.data == rhs.alphabets_.data &&
         lhs.mem_ == rhs.mem_;
}

GramState gram_new(const GramAlphabets& alphabets) { return GramState(alphabets); }

Symbol gram_apply(GramState& state, const Symbol& addr, const Symbol& din) {
  const std::size_t cell = state.cell_index(addr);
  if (&din.alphabet() != state.alphabets_.data.get()) {
    throw SymbolError("data '" + din.name() + "' is not from alphabet '" +
                      state.alphabets_.data->name() + "'");
  }
  if (din.is_epsilon()) return state.translate(state.mem_[cell]);
  state.mem_[cell] = din.token();
  return state.translate(din.token());
}

std::pair<GramState, Symbol> gram_step(GramState state, const Symbol& addr, const Symbol& din) {
  Symbol dout = gram_apply(state, addr, din);
  return {std::move(state), dout};
}

RuleKind classify_rule(const Symbol& addr, const Symbol& din) {
  if (addr.is_epsilon()) throw SymbolError("rule address must not be empty");
  return din.is_epsilon() ? RuleKind::Variable : RuleKind::Fixed;
}

std::vector<GramInput> fixed_rules(const GramAlphabets& alphabets) {
  std::vector<GramInput> out;
  for (const Symbol& a : alphabets.addr->members()) {
    for (const Symbol& d : alphabets.data->members()) out.push_back({a, d});
  }
  return out;
}

}  // namespace emachine
