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
#include <string>

namespace emachine {

/// TCP host for console sessions, one Session and one thread per connection.
class Server {
 public:
  /// Binds 127.0.0.1:port; port 0 picks a free port. Throws Error on bind
  /// failure.
  Server(std::uint16_t port, std::string script_text, std::optional<std::uint64_t> seed);
  ~Server();

  std::uint16_t port() const noexcept;

  /// Accepts connections until stop(), or SIGINT/SIGTERM when
  /// handle_signals is set.
  void run(bool handle_signals = false);

  /// Closes the listener and every open connection. Safe from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace emachine
