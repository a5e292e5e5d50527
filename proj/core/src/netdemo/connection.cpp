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

#include "lhv/netdemo/connection.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <utility>

#include "lhv/errors.hpp"

namespace lhv::net {

namespace {

constexpr std::size_t kFlushThreshold = 64 * 1024;
constexpr std::size_t kReadChunk = 64 * 1024;

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

sockaddr_in resolve(const Endpoint& endpoint) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(endpoint.port);
    if (inet_pton(AF_INET, endpoint.host.c_str(), &addr.sin_addr) == 1) return addr;

    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    if (getaddrinfo(endpoint.host.c_str(), nullptr, &hints, &result) != 0 || result == nullptr) {
        throw ConfigError("cannot resolve host '" + endpoint.host + "'");
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr;
    freeaddrinfo(result);
    return addr;
}

}  // namespace

Endpoint Endpoint::parse(std::string_view text) {
    const std::size_t colon = text.rfind(':');
    if (colon == std::string_view::npos) throw ConfigError("endpoint must be host:port");
    Endpoint e;
    e.host = std::string(text.substr(0, colon));
    if (e.host.empty()) e.host = "127.0.0.1";
    const std::string_view port = text.substr(colon + 1);
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || ptr != port.data() + port.size() || value > 65535) {
        throw ConfigError("invalid port '" + std::string(port) + "'");
    }
    e.port = static_cast<std::uint16_t>(value);
    return e;
}

std::string Endpoint::to_string() const { return host + ":" + std::to_string(port); }

Connection::Connection(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

Connection::Connection(Connection&& other) noexcept
    : fd_(std::exchange(other.fd_, -1)),
      out_(std::move(other.out_)),
      in_(std::move(other.in_)),
      in_pos_(other.in_pos_) {}

Connection& Connection::operator=(Connection&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = std::exchange(other.fd_, -1);
        out_ = std::move(other.out_);
        in_ = std::move(other.in_);
        in_pos_ = other.in_pos_;
    }
    return *this;
}

Connection::~Connection() {
    if (fd_ >= 0) ::close(fd_);
}

Connection Connection::connect(const Endpoint& endpoint, std::chrono::milliseconds timeout) {
    const sockaddr_in addr = resolve(endpoint);
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    // The referee may not be listening yet; retry until the deadline.
    while (true) {
        const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) throw ProtocolError(ProtocolErrorKind::ConnectionLost, errno_text("socket"));
        if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) == 0) {
            Connection c(fd);
            c.set_receive_timeout(timeout);
            return c;
        }
        const int err = errno;
        ::close(fd);
        if (std::chrono::steady_clock::now() >= deadline) {
            errno = err;
            throw ProtocolError(ProtocolErrorKind::Timeout, errno_text(("connect to " + endpoint.to_string()).c_str()));
        }
        ::usleep(20000);
    }
}

void Connection::set_receive_timeout(std::chrono::milliseconds timeout) {
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
    ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(fd_, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
}

void Connection::send(const Message& message) {
    encode(message, out_);
    if (out_.size() >= kFlushThreshold) flush();
}

void Connection::flush() {
    std::size_t sent = 0;
    while (sent < out_.size()) {
        const ssize_t n = ::send(fd_, out_.data() + sent, out_.size() - sent, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            const bool timeout = errno == EAGAIN || errno == EWOULDBLOCK;
            out_.clear();
            throw ProtocolError(timeout ? ProtocolErrorKind::Timeout : ProtocolErrorKind::ConnectionLost,
                                errno_text("send"));
        }
        sent += static_cast<std::size_t>(n);
    }
    out_.clear();
}

bool Connection::fill() {
    if (in_pos_ > 0) {
        in_.erase(in_.begin(), in_.begin() + static_cast<std::ptrdiff_t>(in_pos_));
        in_pos_ = 0;
    }
    const std::size_t old = in_.size();
    in_.resize(old + kReadChunk);
    while (true) {
        const ssize_t n = ::recv(fd_, in_.data() + old, kReadChunk, 0);
        if (n < 0 && errno == EINTR) continue;
        if (n < 0) {
            in_.resize(old);
            const bool timeout = errno == EAGAIN || errno == EWOULDBLOCK;
            throw ProtocolError(timeout ? ProtocolErrorKind::Timeout : ProtocolErrorKind::ConnectionLost,
                                errno_text("recv"));
        }
        in_.resize(old + static_cast<std::size_t>(n));
        return n > 0;
    }
}

std::optional<Message> Connection::receive() {
    while (true) {
        const std::size_t avail = in_.size() - in_pos_;
        if (avail >= 4) {
            std::uint32_t len = 0;
            for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(in_[in_pos_ + i]) << (8 * i);
            if (len == 0 || len > kMaxPayload) {
                throw ProtocolError(ProtocolErrorKind::Malformed, "invalid frame length " + std::to_string(len));
            }
            if (avail >= 4 + static_cast<std::size_t>(len)) {
                const std::span<const std::uint8_t> payload(in_.data() + in_pos_ + 4, len);
                in_pos_ += 4 + len;
                return decode_payload(payload);
            }
        }
        if (!fill()) {
            if (in_.size() == in_pos_) return std::nullopt;
            throw ProtocolError(ProtocolErrorKind::ConnectionLost, "connection closed mid-frame");
        }
    }
}

void Connection::shutdown_read() {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RD);
}

Listener::Listener(const Endpoint& bind) {
    const sockaddr_in addr = resolve(bind);
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw ConfigError(errno_text("socket"));
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 8) != 0) {
        const std::string text = errno_text(("bind " + bind.to_string()).c_str());
        ::close(fd_);
        fd_ = -1;
        throw ConfigError(text);
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
}

Listener::Listener(Listener&& other) noexcept : fd_(std::exchange(other.fd_, -1)), port_(other.port_) {}

Listener& Listener::operator=(Listener&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = std::exchange(other.fd_, -1);
        port_ = other.port_;
    }
    return *this;
}

Listener::~Listener() {
    if (fd_ >= 0) ::close(fd_);
}

Connection Listener::accept(std::chrono::milliseconds timeout) {
    pollfd p{fd_, POLLIN, 0};
    while (true) {
        const int r = ::poll(&p, 1, static_cast<int>(timeout.count()));
        if (r < 0 && errno == EINTR) continue;
        if (r == 0) throw ProtocolError(ProtocolErrorKind::Timeout, "no node connected in time");
        if (r < 0) throw ProtocolError(ProtocolErrorKind::ConnectionLost, errno_text("poll"));
        break;
    }
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd < 0) throw ProtocolError(ProtocolErrorKind::ConnectionLost, errno_text("accept"));
    Connection c(fd);
    c.set_receive_timeout(timeout);
    return c;
}

}  // namespace lhv::net
