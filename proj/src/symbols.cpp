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

#include "emachine/symbols.hpp"

namespace emachine {

bool Symbol::is_epsilon() const noexcept { return token_ == alphabet_->epsilon_token(); }

const std::string& Symbol::name() const { return alphabet_->print(token_); }

bool operator==(const Symbol& lhs, const Symbol& rhs) {
  if (lhs.alphabet_ != rhs.alphabet_) {
    throw SymbolError("comparing symbols of alphabets '" + lhs.alphabet_->name() + "' and '" +
                      rhs.alphabet_->name() + "'");
  }
  return lhs.token_ == rhs.token_;
}

SymbolAlphabet::SymbolAlphabet(std::string name, std::vector<std::string> names)
    : name_(std::move(name)), names_(std::move(names)) {
  for (Token t = 0; t < names_.size(); ++t) index_.emplace(names_[t], t);
}

Symbol SymbolAlphabet::member(std::size_t index) const {
  if (index >= member_count()) {
    throw SymbolError("alphabet '" + name_ + "' has no member #" + std::to_string(index));
  }
  return Symbol(*this, static_cast<Token>(index));
}

Symbol SymbolAlphabet::at(Token token) const {
  if (token >= size()) {
    throw SymbolError("alphabet '" + name_ + "' has no token " + std::to_string(token));
  }
  return Symbol(*this, token);
}

std::vector<Symbol> SymbolAlphabet::members() const {
  std::vector<Symbol> out;
  out.reserve(member_count());
  for (std::size_t i = 0; i < member_count(); ++i) out.push_back(member(i));
  return out;
}

std::optional<Symbol> SymbolAlphabet::find(std::string_view text) const {
  auto it = index_.find(std::string(text));
  if (it == index_.end()) return std::nullopt;
  return Symbol(*this, it->second);
}

Symbol SymbolAlphabet::parse(std::string_view text) const {
  if (auto s = find(text)) return *s;
  throw SymbolError("'" + std::string(text) + "' is not a member of alphabet '" + name_ + "'");
}

const std::string& SymbolAlphabet::print(Token token) const {
  if (token >= names_.size()) {
    throw SymbolError("alphabet '" + name_ + "' has no token " + std::to_string(token));
  }
  return names_[token];
}

AlphabetRef make_alphabet(std::string name, std::vector<std::string> members) {
  if (name.empty()) throw SymbolError("alphabet name is empty");
  std::unordered_map<std::string, int> seen;
  for (const auto& m : members) {
    if (m.empty()) throw SymbolError("alphabet '" + name + "' has an empty member name");
    if (m == kEpsilonText) {
      throw SymbolError("alphabet '" + name + "': '_' is reserved for epsilon");
    }
    if (m.find_first_of(" \t\r\n,=#\"") != std::string::npos) {
      throw SymbolError("alphabet '" + name + "': member '" + m +
                        "' contains a reserved character");
    }
    if (!seen.emplace(m, 0).second) {
      throw SymbolError("alphabet '" + name + "' declares '" + m + "' twice");
    }
  }
  members.emplace_back(kEpsilonText);
  return AlphabetRef(new SymbolAlphabet(std::move(name), std::move(members)));
}

std::vector<Symbol> epsilon_vector(std::span<const AlphabetRef> alphabets) {
  std::vector<Symbol> out;
  out.reserve(alphabets.size());
  for (const auto& a : alphabets) out.push_back(a->epsilon());
  return out;
}

std::string join_symbols(std::span<const Symbol> symbols) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ',';
    out += symbols[i].name();
  }
  return out;
}

}  // namespace emachine
