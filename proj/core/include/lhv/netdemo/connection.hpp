// Copyright 2026 The lhvsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LHV_NETDEMO_CONNECTION_HPP
#define LHV_NETDEMO_CONNECTION_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lhv/netdemo/wire.hpp"

namespace lhv::net {

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;

    /// "host:port". Throws ConfigError.
    static Endpoint parse(std::string_view text);
    std::string to_string() const;
};

/// Blocking TCP stream of framed messages with buffered writes.
class Connection {
public:
    explicit Connection(int fd);
    Connection(Connection&& other) noexcept;
    Connection& operator=(Connection&& other) noexcept;
    Connection(const Connection&) = delete;
    Connection& operator=(const Connection&) = delete;
    ~Connection();

    /// Throws ProtocolError (ConnectionLost or Timeout).
    static Connection connect(const Endpoint& endpoint, std::chrono::milliseconds timeout);

    void set_receive_timeout(std::chrono::milliseconds timeout);

    /// Queues a message; flushes automatically once the buffer is large.
    void send(const Message& message);
    void flush();

    /// Next message, or nullopt on orderly close at a frame boundary.
    std::optional<Message> receive();

    /// Unblocks a receive() pending in another thread; sending still works.
    void shutdown_read();

    bool valid() const { return fd_ >= 0; }

private:
    bool fill();

    int fd_ = -1;
    std::vector<std::uint8_t> out_;
    std::vector<std::uint8_t> in_;
    std::size_t in_pos_ = 0;
};

class Listener {
public:
    /// Binds and listens; port 0 picks a free port. Throws ConfigError.
    explicit Listener(const Endpoint& bind);
    Listener(Listener&&) noexcept;
    Listener& operator=(Listener&&) noexcept;
    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;
    ~Listener();

    std::uint16_t port() const { return port_; }

    /// Throws ProtocolError (Timeout) if nobody connects in time.
    Connection accept(std::chrono::milliseconds timeout);

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

}  // namespace lhv::net

#endif
