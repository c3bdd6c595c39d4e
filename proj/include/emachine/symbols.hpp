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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emachine/error.hpp"

namespace emachine {

using Token = std::uint32_t;

class SymbolAlphabet;

/// A member of a SymbolAlphabet. Only equality is meaningful.
///
/// A Symbol refers to its alphabet by address; the alphabet must outlive it.
/// Comparing symbols of two different alphabets is a usage error and throws
/// SymbolError rather than answering "not equal".
class Symbol {
 public:
  Symbol(const SymbolAlphabet& alphabet, Token token) noexcept
      : alphabet_(&alphabet), token_(token) {}

  const SymbolAlphabet& alphabet() const noexcept { return *alphabet_; }
  Token token() const noexcept { return token_; }
  bool is_epsilon() const noexcept;
  const std::string& name() const;

  friend bool operator==(const Symbol& lhs, const Symbol& rhs);

 private:
  const SymbolAlphabet* alphabet_;
  Token token_;
};

/// Text used for the empty symbol in every line-based format.
inline constexpr std::string_view kEpsilonText = "_";

/// Interned, immutable set of symbol names plus the empty symbol.
///
/// Members get tokens 0..size()-2 in declaration order; epsilon is appended
/// and always has token size()-1.
class SymbolAlphabet {
 public:
  SymbolAlphabet(const SymbolAlphabet&) = delete;
  SymbolAlphabet& operator=(const SymbolAlphabet&) = delete;

  const std::string& name() const noexcept { return name_; }
  /// Member count including epsilon.
  std::size_t size() const noexcept { return names_.size(); }
  std::size_t member_count() const noexcept { return names_.size() - 1; }

  Token epsilon_token() const noexcept { return static_cast<Token>(names_.size() - 1); }
  Symbol epsilon() const noexcept { return Symbol(*this, epsilon_token()); }

  /// Member by declaration index (epsilon excluded).
  Symbol member(std::size_t index) const;
  Symbol at(Token token) const;
  std::vector<Symbol> members() const;

  std::optional<Symbol> find(std::string_view text) const;
  /// Inverse of print(); "_" parses to epsilon.
  Symbol parse(std::string_view text) const;
  const std::string& print(Token token) const;

 private:
  friend std::shared_ptr<const SymbolAlphabet> make_alphabet(std::string,
                                                             std::vector<std::string>);
  SymbolAlphabet(std::string name, std::vector<std::string> names);

  std::string name_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Token> index_;
};

using AlphabetRef = std::shared_ptr<const SymbolAlphabet>;

/// Builds an alphabet from distinct member names; epsilon is appended.
/// Throws SymbolError on duplicates, empty names or a member spelled "_".
AlphabetRef make_alphabet(std::string name, std::vector<std::string> members);

/// A vector of epsilons, one per alphabet.
std::vector<Symbol> epsilon_vector(std::span<const AlphabetRef> alphabets);

/// Comma-joined names, e.g. "a,_,b".
std::string join_symbols(std::span<const Symbol> symbols);

}  // namespace emachine
