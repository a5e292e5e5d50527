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

#ifndef LHV_NETDEMO_WIRE_HPP
#define LHV_NETDEMO_WIRE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lhv/harness.hpp"

namespace lhv::net {

/// Binary protocol between the referee and the two nodes.
///
/// Every message is a frame: u32 payload length, then the payload. The first
/// payload byte is the message type. All integers are little-endian; reals
/// are IEEE-754 binary64 stored as their little-endian bit pattern.
///
///   Hello  (1): role u8 (0 alice, 1 bob), version u16
///   Start  (2): version u16, session_id u64, seed u64, variant u8,
///               schedule u8, n_trials u64, a[3] a'[3] b[3] b'[3] f64
///   Record (3): trial u64, setting u8 (0 or 1), outcome u8 (2-bit code:
///               0 no detection, 1 plus, 2 minus; upper bits zero)
///   Done   (4): record_count u64, checksum u64
///   Abort  (5): error kind u8, reason length u16, reason bytes (UTF-8)
///
/// The Done checksum is FNV-1a 64 over the 10 Record payload bytes after the
/// type byte, for every record in stream order.
inline constexpr std::uint16_t kProtocolVersion = 1;
inline constexpr std::size_t kMaxPayload = 1 << 16;

enum class MessageType : std::uint8_t { Hello = 1, Start = 2, Record = 3, Done = 4, Abort = 5 };

enum class ProtocolErrorKind : std::uint8_t {
    VersionMismatch = 1,
    DuplicateRole = 2,
    MissingTrials = 3,
    ChecksumMismatch = 4,
    OutOfOrder = 5,
    Malformed = 6,
    ConnectionLost = 7,
    Aborted = 8,
    Timeout = 9,
};

std::string_view to_string(ProtocolErrorKind kind);

class ProtocolError : public std::runtime_error {
public:
    ProtocolError(ProtocolErrorKind kind, const std::string& what,
                  std::optional<std::uint64_t> last_trial = std::nullopt)
        : std::runtime_error(what), kind_(kind), last_trial_(last_trial) {}

    ProtocolErrorKind kind() const { return kind_; }
    /// For ConnectionLost on a node: index of the last record handed to the
    /// transport before the failure.
    std::optional<std::uint64_t> last_trial() const { return last_trial_; }

private:
    ProtocolErrorKind kind_;
    std::optional<std::uint64_t> last_trial_;
};

struct SessionConfig {
    std::uint64_t session_id = 0;
    ExperimentConfig experiment;

    bool operator==(const SessionConfig&) const = default;
};

struct Hello {
    Party role = Party::Alice;
    std::uint16_t version = kProtocolVersion;
    bool operator==(const Hello&) const = default;
};

struct Start {
    std::uint16_t version = kProtocolVersion;
    SessionConfig session;
    bool operator==(const Start&) const = default;
};

struct Record {
    std::uint64_t trial = 0;
    std::uint8_t setting = 0;
    Outcome outcome = Outcome::NoDetection;
    bool operator==(const Record&) const = default;
};

struct Done {
    std::uint64_t record_count = 0;
    std::uint64_t checksum = 0;
    bool operator==(const Done&) const = default;
};

struct Abort {
    ProtocolErrorKind kind = ProtocolErrorKind::Aborted;
    std::string reason;
    bool operator==(const Abort&) const = default;
};

using Message = std::variant<Hello, Start, Record, Done, Abort>;

/// Appends the framed encoding of `message` to `out`.
void encode(const Message& message, std::vector<std::uint8_t>& out);
std::vector<std::uint8_t> encode(const Message& message);

/// Decodes one payload (without the length prefix). Throws ProtocolError
/// (Malformed) on unknown types, bad lengths or invalid field values.
Message decode_payload(std::span<const std::uint8_t> payload);

/// Running FNV-1a 64 over Record payloads.
class RecordChecksum {
public:
    void update(const Record& record);
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace lhv::net

#endif
