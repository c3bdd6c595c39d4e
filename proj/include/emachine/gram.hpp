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

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "emachine/symbols.hpp"

namespace emachine {

/// One motor input of a GRAM: eye position and typed character.
struct GramInput {
  Symbol addr;
  Symbol din;
};

/// Alphabets of a GRAM. Every non-epsilon address owns one memory cell.
struct GramAlphabets {
  AlphabetRef addr;
  AlphabetRef data;
};

/// The two-address, two-datum GRAM used throughout the examples:
/// A = {1,2}, D = {a,b,_}.
GramAlphabets small_gram_alphabets();

/// Optional output translation D_in -> D_out (not necessarily injective).
/// table[t] is the output token for input token t; epsilon maps to epsilon.
struct OutputMap {
  AlphabetRef out;
  std::vector<Token> table;
};

/// Memory contents of a generalized RAM. Value type; copying is cheap enough
/// for the small memories simulated here.
class GramState {
 public:
  GramState(GramAlphabets alphabets, std::optional<OutputMap> output_map = std::nullopt);

  const GramAlphabets& alphabets() const noexcept { return alphabets_; }
  const SymbolAlphabet& output_alphabet() const noexcept;
  std::size_t size() const noexcept { return mem_.size(); }

  /// Cell contents in address member order.
  std::vector<Symbol> memory() const;
  Symbol cell(const Symbol& addr) const;

  friend bool operator==(const GramState& lhs, const GramState& rhs);

 private:
  friend std::pair<GramState, Symbol> gram_step(GramState state, const Symbol& addr,
                                                const Symbol& din);
  friend Symbol gram_apply(GramState& state, const Symbol& addr, const Symbol& din);
  std::size_t cell_index(const Symbol& addr) const;
  Symbol translate(Token data) const;

  GramAlphabets alphabets_;
  std::optional<OutputMap> output_map_;
  std::vector<Token> mem_;
};

/// A GRAM with every cell empty. Throws SymbolError if A has no members.
GramState gram_new(const GramAlphabets& alphabets);

/// One GRAM transition. Write mode when din is non-empty (the cell takes din
/// and din is echoed); read mode otherwise (the cell is returned, state
/// untouched). Throws SymbolError for addr = epsilon or foreign symbols.
std::pair<GramState, Symbol> gram_step(GramState state, const Symbol& addr, const Symbol& din);

/// In-place form of gram_step, returns dout.
Symbol gram_apply(GramState& state, const Symbol& addr, const Symbol& din);

enum class RuleKind { Fixed, Variable };

/// Fixed iff din is non-empty. Throws SymbolError for addr = epsilon.
RuleKind classify_rule(const Symbol& addr, const Symbol& din);

/// Every (addr, din) with addr, din non-empty, in member order. There are
/// |A| * |D \ {_}| of them.
std::vector<GramInput> fixed_rules(const GramAlphabets& alphabets);

}  // namespace emachine
