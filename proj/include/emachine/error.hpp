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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emachine {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Misuse of symbols: unknown names, duplicate members, cross-alphabet comparison.
class SymbolError : public Error {
 public:
  using Error::Error;
};

/// Shape or parameter mismatch when configuring or stepping a unit.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A write was requested with every LTM location already used.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An experiment protocol precondition does not hold (e.g. a schedule that
/// misses a fixed rule).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Script or trace text that does not parse. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace emachine
