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

#include "emachine/server.hpp"

#include <boost/asio.hpp>

#include <csignal>
#include <istream>
#include <list>
#include <mutex>
#include <thread>

#include "emachine/error.hpp"
#include "emachine/session.hpp"

namespace emachine {

namespace asio = boost::asio;
using asio::ip::tcp;

struct Server::Impl {
  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::string script_text;
  std::optional<std::uint64_t> seed;
  std::uint16_t port = 0;

  std::mutex mutex;
  bool stopping = false;
  std::list<std::shared_ptr<tcp::socket>> sockets;
  std::list<std::thread> threads;

  void accept_next() {
    acceptor.async_accept([this](const boost::system::error_code& ec, tcp::socket socket) {
      if (ec) return;
      auto shared = std::make_shared<tcp::socket>(std::move(socket));
      {
        std::lock_guard lock(mutex);
        if (stopping) return;
        sockets.push_back(shared);
        threads.emplace_back([this, shared] { serve_connection(*shared); });
      }
      accept_next();
    });
  }

  void serve_connection(tcp::socket& socket) {
    boost::system::error_code ec;
    auto send = [&](const std::string& line) {
      asio::write(socket, asio::buffer(line + "\n"), ec);
      return !ec;
    };
    std::unique_ptr<Session> session;
    try {
      session = std::make_unique<Session>(script_text, seed);
    } catch (const Error& e) {
      send(nlohmann::ordered_json{{"event", "error"}, {"nu", 0}, {"message", e.what()}}.dump());
      socket.close(ec);
      return;
    }
    if (!send(session->snapshot().dump())) return;

    asio::streambuf buffer;
    while (true) {
      asio::read_until(socket, buffer, '\n', ec);
      if (ec) break;
      std::istream in(&buffer);
      std::string line;
      std::getline(in, line);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      bool ok = true;
      for (const auto& reply : session->handle_line(line)) {
        if (!(ok = send(reply))) break;
      }
      if (!ok) break;
    }
    socket.close(ec);
  }
};

Server::Server(std::uint16_t port, std::string script_text, std::optional<std::uint64_t> seed)
    : impl_(std::make_unique<Impl>()) {
  impl_->script_text = std::move(script_text);
  impl_->seed = seed;
  // Fail early on a bad script rather than on the first connection.
  Session probe(impl_->script_text, seed);
  boost::system::error_code ec;
  const tcp::endpoint endpoint(asio::ip::address_v4::loopback(), port);
  impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(tcp::acceptor::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) throw Error("cannot listen on port " + std::to_string(port) + ": " + ec.message());
  impl_->port = impl_->acceptor.local_endpoint().port();
}

Server::~Server() {
  stop();
  std::list<std::thread> threads;
  {
    std::lock_guard lock(impl_->mutex);
    threads.swap(impl_->threads);
  }
  for (auto& t : threads) t.join();
}

std::uint16_t Server::port() const noexcept { return impl_->port; }

void Server::run(bool handle_signals) {
  asio::signal_set signals(impl_->io);
  if (handle_signals) {
    signals.add(SIGINT);
    signals.add(SIGTERM);
    signals.async_wait([this](const boost::system::error_code& ec, int) {
      if (!ec) stop();
    });
  }
  impl_->accept_next();
  impl_->io.run();
}

void Server::stop() {
  {
    std::lock_guard lock(impl_->mutex);
    if (impl_->stopping) return;
    impl_->stopping = true;
    for (auto& s : impl_->sockets) {
      boost::system::error_code ec;
      s->shutdown(tcp::socket::shutdown_both, ec);
    }
  }
  asio::post(impl_->io, [this] {
    boost::system::error_code ec;
    impl_->acceptor.close(ec);
  });
  impl_->io.stop();
}

}  // namespace emachine
