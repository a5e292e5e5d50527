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

#include "lhv/netdemo/wire.hpp"

#include <algorithm>
#include <bit>
#include <type_traits>

namespace lhv::net {

namespace {

class Writer {
public:
    explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { le(v, 2); }
    void u32(std::uint32_t v) { le(v, 4); }
    void u64(std::uint64_t v) { le(v, 8); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void vec(const UnitVector3& v) {
        f64(v.x());
        f64(v.y());
        f64(v.z());
    }

private:
    void le(std::uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    std::vector<std::uint8_t>& out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(le(2)); }
    std::uint64_t u64() { return le(8); }
    double f64() { return std::bit_cast<double>(u64()); }
    UnitVector3 vec() {
        const double x = f64(), y = f64(), z = f64();
        try {
            return UnitVector3::from_components(x, y, z);
        } catch (const std::exception&) {
            throw ProtocolError(ProtocolErrorKind::Malformed, "invalid setting vector in Start");
        }
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(in_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    void finish() const {
        if (pos_ != in_.size()) throw ProtocolError(ProtocolErrorKind::Malformed, "trailing bytes in message");
    }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw ProtocolError(ProtocolErrorKind::Malformed, "truncated message");
    }
    std::uint64_t le(int bytes) {
        need(static_cast<std::size_t>(bytes));
        std::uint64_t v = 0;
        for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
        pos_ += static_cast<std::size_t>(bytes);
        return v;
    }
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

void encode_record_body(Writer& w, const Record& r) {
    w.u64(r.trial);
    w.u8(r.setting);
    w.u8(static_cast<std::uint8_t>(r.outcome));
}

}  // namespace

std::string_view to_string(ProtocolErrorKind kind) {
    switch (kind) {
        case ProtocolErrorKind::VersionMismatch:
            return "version mismatch";
        case ProtocolErrorKind::DuplicateRole:
            return "duplicate role";
        case ProtocolErrorKind::MissingTrials:
            return "missing trials";
        case ProtocolErrorKind::ChecksumMismatch:
            return "checksum mismatch";
        case ProtocolErrorKind::OutOfOrder:
            return "out-of-order trial";
        case ProtocolErrorKind::Malformed:
            return "malformed message";
        case ProtocolErrorKind::ConnectionLost:
            return "connection lost";
        case ProtocolErrorKind::Aborted:
            return "session aborted";
        case ProtocolErrorKind::Timeout:
            return "timeout";
    }
    return "unknown";
}

void encode(const Message& message, std::vector<std::uint8_t>& out) {
    const std::size_t start = out.size();
    out.resize(start + 4);  // length, patched below
    Writer w(out);
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Hello>) {
                w.u8(static_cast<std::uint8_t>(MessageType::Hello));
                w.u8(static_cast<std::uint8_t>(m.role));
                w.u16(m.version);
            } else if constexpr (std::is_same_v<M, Start>) {
                const ExperimentConfig& c = m.session.experiment;
                w.u8(static_cast<std::uint8_t>(MessageType::Start));
                w.u16(m.version);
                w.u64(m.session.session_id);
                w.u64(c.seed);
                w.u8(static_cast<std::uint8_t>(c.variant));
                w.u8(static_cast<std::uint8_t>(c.schedule));
                w.u64(c.n_trials);
                w.vec(c.quad.a);
                w.vec(c.quad.a_prime);
                w.vec(c.quad.b);
                w.vec(c.quad.b_prime);
            } else if constexpr (std::is_same_v<M, Record>) {
                w.u8(static_cast<std::uint8_t>(MessageType::Record));
                encode_record_body(w, m);
            } else if constexpr (std::is_same_v<M, Done>) {
                w.u8(static_cast<std::uint8_t>(MessageType::Done));
                w.u64(m.record_count);
                w.u64(m.checksum);
            } else {
                w.u8(static_cast<std::uint8_t>(MessageType::Abort));
                w.u8(static_cast<std::uint8_t>(m.kind));
                const std::size_t n = std::min<std::size_t>(m.reason.size(), 1024);
                w.u16(static_cast<std::uint16_t>(n));
                out.insert(out.end(), m.reason.begin(), m.reason.begin() + static_cast<std::ptrdiff_t>(n));
            }
        },
        message);
    const auto len = static_cast<std::uint32_t>(out.size() - start - 4);
    for (int i = 0; i < 4; ++i) out[start + i] = static_cast<std::uint8_t>(len >> (8 * i));
}

std::vector<std::uint8_t> encode(const Message& message) {
    std::vector<std::uint8_t> out;
    encode(message, out);
    return out;
}

Message decode_payload(std::span<const std::uint8_t> payload) {
    Reader r(payload);
    const std::uint8_t type = r.u8();
    Message m;
    switch (static_cast<MessageType>(type)) {
        case MessageType::Hello: {
            Hello h;
            const std::uint8_t role = r.u8();
            if (role > 1) throw ProtocolError(ProtocolErrorKind::Malformed, "invalid role");
            h.role = static_cast<Party>(role);
            h.version = r.u16();
            m = h;
            break;
        }
        case MessageType::Start: {
            Start s;
            s.version = r.u16();
            s.session.session_id = r.u64();
            ExperimentConfig& c = s.session.experiment;
            c.seed = r.u64();
            const std::uint8_t variant = r.u8();
            const std::uint8_t schedule = r.u8();
            if (variant >= kAllVariants.size() || schedule > 2) {
                throw ProtocolError(ProtocolErrorKind::Malformed, "invalid variant or schedule");
            }
            c.variant = static_cast<ModelVariant>(variant);
            c.schedule = static_cast<Schedule>(schedule);
            c.n_trials = r.u64();
            c.quad.a = r.vec();
            c.quad.a_prime = r.vec();
            c.quad.b = r.vec();
            c.quad.b_prime = r.vec();
            m = s;
            break;
        }
        case MessageType::Record: {
            Record rec;
            rec.trial = r.u64();
            rec.setting = r.u8();
            const std::uint8_t outcome = r.u8();
            if (rec.setting > 1 || outcome > 2) throw ProtocolError(ProtocolErrorKind::Malformed, "invalid record");
            rec.outcome = static_cast<Outcome>(outcome);
            m = rec;
            break;
        }
        case MessageType::Done: {
            Done d;
            d.record_count = r.u64();
            d.checksum = r.u64();
            m = d;
            break;
        }
        case MessageType::Abort: {
            Abort a;
            a.kind = static_cast<ProtocolErrorKind>(r.u8());
            a.reason = r.bytes(r.u16());
            m = a;
            break;
        }
        default:
            throw ProtocolError(ProtocolErrorKind::Malformed, "unknown message type " + std::to_string(type));
    }
    r.finish();
    return m;
}

void RecordChecksum::update(const Record& record) {
    auto mix = [this](std::uint8_t byte) {
        hash_ ^= byte;
        hash_ *= 0x100000001b3ULL;
    };
    for (int i = 0; i < 8; ++i) mix(static_cast<std::uint8_t>(record.trial >> (8 * i)));
    mix(record.setting);
    mix(static_cast<std::uint8_t>(record.outcome));
}

}  // namespace lhv::net
