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

#include "doctest.h"

#include <map>

#include "emachine/gram.hpp"
#include "emachine/rng.hpp"

using namespace emachine;

namespace {

std::vector<Symbol> mem_of(const GramAlphabets& g, std::initializer_list<const char*> cells) {
  std::vector<Symbol> out;
  for (const char* c : cells) out.push_back(g.data->parse(c));
  return out;
}

}  // namespace

TEST_CASE("new memory is empty") {
  const auto g = small_gram_alphabets();
  const GramState s = gram_new(g);
  CHECK(s.size() == 2);
  CHECK(s.memory() == mem_of(g, {"_", "_"}));
  for (const Symbol& addr : g.addr->members()) {
    CHECK(gram_step(s, addr, g.data->epsilon()).second.is_epsilon());
  }
}

TEST_CASE("single cell over an empty data alphabet") {
  const GramAlphabets g{make_alphabet("A", {"1"}), make_alphabet("D", {})};
  const GramState s = gram_new(g);
  CHECK(s.memory() == std::vector<Symbol>{g.data->epsilon()});
}

TEST_CASE("an address alphabet without members is rejected") {
  const GramAlphabets g{make_alphabet("A", {}), make_alphabet("D", {"a"})};
  CHECK_THROWS_AS(gram_new(g), SymbolError);
}

TEST_CASE("write and read steps from the experiment table") {
  const auto g = small_gram_alphabets();
  const Symbol one = g.addr->parse("1"), two = g.addr->parse("2");
  const Symbol a = g.data->parse("a"), b = g.data->parse("b"), eps = g.data->epsilon();

  auto [s0, d0] = gram_step(gram_new(g), one, a);
  CHECK(d0 == a);
  CHECK(s0.memory() == mem_of(g, {"a", "_"}));

  GramState s = gram_new(g);
  gram_apply(s, one, b);
  gram_apply(s, two, a);
  REQUIRE(s.memory() == mem_of(g, {"b", "a"}));
  auto [s3, d3] = gram_step(s, two, b);
  CHECK(d3 == b);
  CHECK(s3.memory() == mem_of(g, {"b", "b"}));

  GramState t = gram_new(g);
  gram_apply(t, one, a);
  gram_apply(t, two, a);
  auto [s9, d9] = gram_step(t, two, eps);
  CHECK(d9 == a);
  CHECK(s9 == t);
}

TEST_CASE("epsilon address and foreign symbols are errors") {
  const auto g = small_gram_alphabets();
  const auto other = make_alphabet("X", {"a"});
  CHECK_THROWS_AS(gram_step(gram_new(g), g.addr->epsilon(), g.data->member(0)), SymbolError);
  CHECK_THROWS_AS(gram_step(gram_new(g), g.addr->member(0), other->member(0)), SymbolError);
  CHECK_THROWS_AS(gram_step(gram_new(g), g.data->member(0), g.data->member(0)), SymbolError);
}

TEST_CASE("rule classification") {
  const auto g = small_gram_alphabets();
  CHECK(classify_rule(g.addr->parse("1"), g.data->parse("a")) == RuleKind::Fixed);
  CHECK(classify_rule(g.addr->parse("1"), g.data->epsilon()) == RuleKind::Variable);
  CHECK_THROWS_AS(classify_rule(g.addr->epsilon(), g.data->parse("a")), SymbolError);
  const auto rules = fixed_rules(g);
  CHECK(rules.size() == 4);
  for (const auto& r : rules) CHECK(classify_rule(r.addr, r.din) == RuleKind::Fixed);
}

TEST_CASE("output translation maps data into a second alphabet") {
  const auto g = small_gram_alphabets();
  const auto out = make_alphabet("O", {"x"});
  // a -> x, b -> x, epsilon -> epsilon
  GramState s(g, OutputMap{out, {0, 0, out->epsilon_token()}});
  CHECK(&s.output_alphabet() == out.get());
  CHECK(gram_apply(s, g.addr->parse("1"), g.data->parse("b")) == out->parse("x"));
  CHECK(gram_apply(s, g.addr->parse("2"), g.data->epsilon()) == out->epsilon());
  CHECK(gram_apply(s, g.addr->parse("1"), g.data->epsilon()) == out->parse("x"));
}

TEST_CASE("property: reads return the most recent write, checked against the event log") {
  const GramAlphabets g{make_alphabet("A", {"1", "2", "3", "4"}),
                        make_alphabet("D", {"a", "b", "c"})};
  ChoiceRng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    GramState s = gram_new(g);
    std::vector<std::pair<Token, Token>> log;  // every write, in order
    for (int step = 0; step < 60; ++step) {
      const Symbol addr = g.addr->member(uniform_below(rng, 4));
      const Symbol din = g.data->at(static_cast<Token>(uniform_below(rng, 4)));
      const GramState before = s;
      const Symbol dout = gram_apply(s, addr, din);
      if (din.is_epsilon()) {
        Token expected = g.data->epsilon_token();
        for (auto it = log.rbegin(); it != log.rend(); ++it) {
          if (it->first == addr.token()) {
            expected = it->second;
            break;
          }
        }
        CHECK(dout.token() == expected);
        CHECK(s == before);
      } else {
        CHECK(dout == din);
        log.emplace_back(addr.token(), din.token());
      }
    }
  }
}
