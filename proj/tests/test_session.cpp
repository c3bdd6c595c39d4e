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

#include <boost/asio.hpp>

#include <sstream>
#include <thread>

#include "emachine/server.hpp"
#include "emachine/session.hpp"

using namespace emachine;
using Json = nlohmann::json;

namespace {

Json one(Session& s, const Json& message) {
  const auto replies = s.handle(message);
  REQUIRE(replies.size() == 1);
  return Json::parse(replies[0].dump());
}

}  // namespace

TEST_CASE("a new session starts with a snapshot of an empty assembly") {
  Session s;
  const Json snap = Json::parse(s.snapshot().dump());
  CHECK(snap["event"] == "snapshot");
  CHECK(snap["nu"] == 0);
  CHECK(snap["world"]["mem"] == Json::array({"_", "_"}));
  CHECK(snap["units"]["AS"]["capacity"] == 64);
  CHECK(snap["units"]["AS"]["wptr"] == 1);
  CHECK(snap["units"]["AS"]["ltm"].empty());
  CHECK(snap["units"].contains("AM") == false);
  CHECK(snap["selectors"]["ns_sel"] == true);
}

TEST_CASE("step returns a delta with the new LTM row") {
  Session s;
  one(s, {{"cmd", "set"}, {"phase", "train"}});
  const Json d = one(s, {{"cmd", "step"}, {"inputs", {{"addr", "1"}, {"din", "a"}}}});
  CHECK(d["event"] == "delta");
  CHECK(d["nu"] == 0);
  CHECK(d["input"]["dout"] == "a");
  CHECK(d["input"]["wen_as"] == true);
  CHECK(d["units"]["AS"]["ltm_row"]["location"] == 1);
  CHECK(d["units"]["AS"]["ltm_row"]["x"] == Json::array({"1", "a"}));
  CHECK(d["units"]["AS"]["ltm_row"]["y"] == Json::array({"a"}));
  CHECK(d["world"]["mem"] == Json::array({"a", "_"}));

  const Json snap = one(s, {{"cmd", "snapshot"}});
  CHECK(snap["nu"] == 1);
  CHECK(snap["units"]["AS"]["e"][0] == 2.0);
}

TEST_CASE("cycle accepts script syntax with or without the keyword") {
  Session s;
  CHECK(one(s, {{"cmd", "cycle"}, {"line", "addr=2 din=b"}})["nu"] == 0);
  const Json d = one(s, {{"cmd", "cycle"}, {"line", "CYCLE addr=2 din=_"}});
  CHECK(d["input"]["dout"] == "b");
  CHECK(d["units"]["AS"]["ltm_row"].is_null());
}

TEST_CASE("reset clears activation, keeps LTM and the world") {
  Session s;
  one(s, {{"cmd", "set"}, {"phase", "train"}});
  one(s, {{"cmd", "cycle"}, {"line", "addr=1 din=a"}});
  one(s, {{"cmd", "cycle"}, {"line", "addr=2 din=b"}});
  const Json snap = one(s, {{"cmd", "reset"}});
  for (const auto& e : snap["units"]["AS"]["e"]) CHECK(e == 0.0);
  CHECK(snap["units"]["AS"]["ltm"].size() == 2);
  CHECK(snap["world"]["mem"] == Json::array({"a", "b"}));
}

TEST_CASE("set signals") {
  Session s;
  Json snap = one(s, {{"cmd", "set"}, {"signal", "ns_sel"}, {"value", 0}});
  CHECK(snap["selectors"]["ns_sel"] == false);
  snap = one(s, {{"cmd", "set"}, {"signal", "wen_as"}, {"value", true}});
  CHECK(snap["wen"]["as"] == true);
  snap = one(s, {{"cmd", "set"}, {"phase", "exam"}});
  CHECK(snap["wen"]["as"] == false);
  CHECK(snap["selectors"]["nm_sel"] == false);
}

TEST_CASE("load_script replaces the assembly and runs its commands") {
  Session s;
  const std::string text =
      "ALPHABET u p q\nALPHABET out x y\n"
      "AM in=u out=out a=0.4 tau=100 capacity=4\n"
      "PHASE train\nCYCLE vis=p teach y1=x\nPHASE exam\nCYCLE vis=p\nASSERT y=x\n";
  const Json snap = one(s, {{"cmd", "load_script"}, {"text", text}, {"seed", 7}});
  CHECK(snap["seed"] == 7);
  CHECK(snap["nu"] == 2);
  CHECK(snap["world"].is_null());
  CHECK(snap["units"]["AM"]["ltm"].size() == 1);
  CHECK(snap["asserts"]["probes"] == 1);
  CHECK(snap["asserts"]["mismatches"] == 0);
  const Json d = one(s, {{"cmd", "step"}, {"inputs", {{"vis", {"p"}}}}});
  CHECK(d["units"]["AM"]["y"] == Json::array({"x"}));
  CHECK(d["units"]["AM"]["iwin"] == 1);
}

TEST_CASE("errors leave the session usable") {
  Session s;
  CHECK(one(s, {{"cmd", "fly"}})["event"] == "error");
  CHECK(one(s, {{"nope", 1}})["event"] == "error");
  CHECK(one(s, {{"cmd", "step"}, {"inputs", {{"addr", "9"}}}})["event"] == "error");
  CHECK(one(s, {{"cmd", "cycle"}, {"line", "addr=1 din=zz"}})["event"] == "error");
  CHECK(one(s, {{"cmd", "set"}, {"signal", "wen_as"}, {"value", 3}})["event"] == "error");
  CHECK(one(s, {{"cmd", "set"}, {"phase", "nap"}})["event"] == "error");
  CHECK(one(s, {{"cmd", "load_script"}, {"text", "BOGUS\n"}})["event"] == "error");
  const auto bad = s.handle_line("{not json");
  REQUIRE(bad.size() == 1);
  CHECK(Json::parse(bad[0])["event"] == "error");
  CHECK(one(s, {{"cmd", "cycle"}, {"line", "addr=1 din=a"}})["event"] == "delta");
}

TEST_CASE("the session trace replays") {
  Session s;
  one(s, {{"cmd", "set"}, {"phase", "train"}});
  for (const char* line : {"addr=1 din=a", "addr=2 din=b", "addr=1 din=_"}) {
    one(s, {{"cmd", "cycle"}, {"line", line}});
  }
  one(s, {{"cmd", "reset"}});
  one(s, {{"cmd", "set"}, {"phase", "exam"}});
  one(s, {{"cmd", "cycle"}, {"line", "addr=2 din=_"}});
  std::istringstream in(s.trace());
  const ReplayResult r = replay(in);
  CHECK(r.match);
  CHECK(r.records == 10);
}

TEST_CASE("server speaks the protocol over TCP") {
  Server server(0, default_session_script(), 3);
  REQUIRE(server.port() != 0);
  std::thread host([&] { server.run(); });

  namespace asio = boost::asio;
  asio::io_context io;
  asio::ip::tcp::socket socket(io);
  socket.connect({asio::ip::address_v4::loopback(), server.port()});
  asio::streambuf buffer;
  auto read_json = [&] {
    asio::read_until(socket, buffer, '\n');
    std::istream is(&buffer);
    std::string line;
    std::getline(is, line);
    return Json::parse(line);
  };
  auto send = [&](const Json& j) { asio::write(socket, asio::buffer(j.dump() + "\n")); };

  const Json hello = read_json();
  CHECK(hello["event"] == "snapshot");
  CHECK(hello["seed"] == 3);

  send({{"cmd", "cycle"}, {"line", "addr=1 din=b"}});
  const Json d = read_json();
  CHECK(d["event"] == "delta");
  CHECK(d["input"]["dout"] == "b");

  asio::write(socket, asio::buffer(std::string("garbage\n")));
  CHECK(read_json()["event"] == "error");

  // A second client gets its own session.
  asio::ip::tcp::socket other(io);
  other.connect({asio::ip::address_v4::loopback(), server.port()});
  asio::streambuf other_buffer;
  asio::read_until(other, other_buffer, '\n');
  std::istream is(&other_buffer);
  std::string line;
  std::getline(is, line);
  CHECK(Json::parse(line)["nu"] == 0);

  server.stop();
  host.join();
}

TEST_CASE("a bad serve script fails before listening") {
  CHECK_THROWS_AS(Server(0, "BOGUS\n", std::nullopt), ParseError);
}
