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

#include "lhv/netdemo/session.hpp"

#include <array>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "lhv/errors.hpp"

namespace lhv::net {

namespace {

struct Stream {
    std::vector<std::uint8_t> settings;
    std::vector<Outcome> outcomes;
    std::vector<Record> log;
};

class FirstError {
public:
    void capture(std::exception_ptr e) {
        std::lock_guard lock(mutex_);
        if (!error_) error_ = std::move(e);
    }
    std::exception_ptr get() const {
        std::lock_guard lock(mutex_);
        return error_;
    }

private:
    mutable std::mutex mutex_;
    std::exception_ptr error_;
};

[[noreturn]] void throw_error(ProtocolErrorKind kind, Party role, const std::string& detail) {
    throw ProtocolError(kind, std::string(to_string(role)) + ": " + std::string(to_string(kind)) + ": " + detail);
}

void read_stream(Connection& conn, Party role, std::uint64_t total, bool keep_log, Stream& out) {
    out.settings.reserve(total);
    out.outcomes.reserve(total);
    RecordChecksum checksum;
    std::uint64_t expected = 0;
    while (true) {
        std::optional<Message> m;
        try {
            m = conn.receive();
        } catch (const ProtocolError& e) {
            throw_error(e.kind(), role, e.what());
        }
        if (!m) throw_error(ProtocolErrorKind::ConnectionLost, role, "stream ended before Done (partial session)");
        if (const auto* r = std::get_if<Record>(&*m)) {
            if (r->trial >= total || r->trial < expected) {
                throw_error(ProtocolErrorKind::OutOfOrder, role,
                            "got trial " + std::to_string(r->trial) + ", expected " + std::to_string(expected));
            }
            if (r->trial > expected) {
                throw_error(ProtocolErrorKind::MissingTrials, role,
                            "trials " + std::to_string(expected) + ".." + std::to_string(r->trial - 1) + " missing");
            }
            checksum.update(*r);
            out.settings.push_back(r->setting);
            out.outcomes.push_back(r->outcome);
            if (keep_log) out.log.push_back(*r);
            ++expected;
        } else if (const auto* d = std::get_if<Done>(&*m)) {
            if (d->record_count != expected || expected != total) {
                throw_error(ProtocolErrorKind::MissingTrials, role,
                            "received " + std::to_string(expected) + " of " + std::to_string(total) +
                                " records, Done claims " + std::to_string(d->record_count));
            }
            if (d->checksum != checksum.value()) throw_error(ProtocolErrorKind::ChecksumMismatch, role, "stream");
            return;
        } else if (const auto* a = std::get_if<Abort>(&*m)) {
            throw_error(ProtocolErrorKind::Aborted, role, a->reason);
        } else {
            throw_error(ProtocolErrorKind::Malformed, role, "unexpected message during record stream");
        }
    }
}

void abort_all(std::array<std::optional<Connection>, 2>& conns, const std::exception& e, ProtocolErrorKind kind) {
    for (auto& c : conns) {
        if (!c) continue;
        try {
            c->send(Abort{kind, e.what()});
            c->flush();
        } catch (const std::exception&) {
            // The peer is gone already.
        }
    }
}

double two_proportion_z(double k0, double n0, double k1, double n1) {
    if (n0 <= 0.0 || n1 <= 0.0) return 0.0;
    const double pooled = (k0 + k1) / (n0 + n1);
    const double var = pooled * (1.0 - pooled) * (1.0 / n0 + 1.0 / n1);
    if (var <= 0.0) return 0.0;
    return std::abs(k0 / n0 - k1 / n1) / std::sqrt(var);
}

}  // namespace

Record node_record(const SessionConfig& session, Party role, std::uint64_t trial) {
    const ExperimentConfig& c = session.experiment;
    const int setting = setting_choice(role, c.schedule, c.seed, trial);
    const TrialVariates v = trial_variates(c.seed, trial, c.variant);
    return {trial, static_cast<std::uint8_t>(setting),
            party_outcome(c.variant, role, v, c.quad.setting(role, setting))};
}

Referee::Referee(const Endpoint& bind, RefereeOptions options) : listener_(bind), options_(options) {}

SessionOutcome Referee::run(const SessionConfig& session) {
    session.experiment.validate();
    const std::uint64_t total = session.experiment.total_trials();

    std::array<std::optional<Connection>, 2> conns;
    try {
        for (int accepted = 0; accepted < 2; ++accepted) {
            Connection conn = listener_.accept(options_.timeout);
            const std::optional<Message> m = conn.receive();
            const auto* hello = m ? std::get_if<Hello>(&*m) : nullptr;
            if (!hello) throw ProtocolError(ProtocolErrorKind::Malformed, "expected Hello from connecting node");
            if (hello->version != kProtocolVersion) {
                conn.send(Abort{ProtocolErrorKind::VersionMismatch, "unsupported protocol version"});
                conn.flush();
                throw ProtocolError(ProtocolErrorKind::VersionMismatch,
                                    "node speaks protocol version " + std::to_string(hello->version) +
                                        ", referee speaks " + std::to_string(kProtocolVersion));
            }
            auto& slot = conns[static_cast<std::size_t>(hello->role)];
            if (slot) {
                conn.send(Abort{ProtocolErrorKind::DuplicateRole, "role already taken"});
                conn.flush();
                throw ProtocolError(ProtocolErrorKind::DuplicateRole,
                                    std::string(to_string(hello->role)) + " connected twice");
            }
            slot = std::move(conn);
        }
        for (auto& c : conns) {
            c->send(Start{kProtocolVersion, session});
            c->flush();
        }
    } catch (const ProtocolError& e) {
        abort_all(conns, e, e.kind());
        throw;
    }

    std::array<Stream, 2> streams;
    FirstError first_error;
    {
        std::array<std::jthread, 2> readers;
        for (std::size_t i = 0; i < 2; ++i) {
            readers[i] = std::jthread([&, i] {
                try {
                    read_stream(*conns[i], static_cast<Party>(i), total, options_.keep_logs, streams[i]);
                } catch (...) {
                    first_error.capture(std::current_exception());
                    for (auto& c : conns) c->shutdown_read();
                }
            });
        }
    }
    if (const auto error = first_error.get()) {
        try {
            std::rethrow_exception(error);
        } catch (const ProtocolError& e) {
            abort_all(conns, e, e.kind());
            throw;
        }
    }

    CountsTable counts;
    const auto& alice = streams[0];
    const auto& bob = streams[1];
    for (std::uint64_t t = 0; t < total; ++t) {
        counts.pair(alice.settings[t], bob.settings[t]).record(alice.outcomes[t], bob.outcomes[t]);
    }
    SessionOutcome outcome{make_report(session.experiment, counts), std::move(streams[0].log),
                           std::move(streams[1].log)};
    return outcome;
}

ExperimentReport referee_serve(const Endpoint& bind, const SessionConfig& session) {
    Referee referee(bind);
    return referee.run(session).report;
}

NodeSummary node_run(Party role, const Endpoint& referee, NodeOptions options) {
    Connection conn = Connection::connect(referee, options.timeout);
    conn.send(Hello{role, kProtocolVersion});
    conn.flush();

    const std::optional<Message> m = conn.receive();
    if (!m) throw ProtocolError(ProtocolErrorKind::ConnectionLost, "referee closed before Start");
    if (const auto* a = std::get_if<Abort>(&*m)) throw ProtocolError(ProtocolErrorKind::Aborted, a->reason);
    const auto* start = std::get_if<Start>(&*m);
    if (!start) throw ProtocolError(ProtocolErrorKind::Malformed, "expected Start");
    if (start->version != kProtocolVersion) {
        throw ProtocolError(ProtocolErrorKind::VersionMismatch, "referee speaks another protocol version");
    }
    const SessionConfig& session = start->session;
    try {
        session.experiment.validate();
    } catch (const ConfigError& e) {
        throw ProtocolError(ProtocolErrorKind::Malformed, std::string("invalid session config: ") + e.what());
    }

    NodeSummary summary;
    summary.role = role;
    summary.session_id = session.session_id;
    RecordChecksum checksum;
    const std::uint64_t total = session.experiment.total_trials();
    std::optional<std::uint64_t> last_flushed;
    std::uint64_t t = 0;
    try {
        for (; t < total; ++t) {
            Record r = node_record(session, role, t);
            if (options.override_outcome) r.outcome = options.override_outcome(session, t, r.setting, r.outcome);
            if (r.outcome == Outcome::NoDetection) ++summary.no_detections;
            checksum.update(r);
            conn.send(r);
            if ((t & 0xfff) == 0xfff) {
                conn.flush();
                last_flushed = t;
            }
        }
        conn.send(Done{total, checksum.value()});
        conn.flush();
    } catch (const ProtocolError& e) {
        throw ProtocolError(ProtocolErrorKind::ConnectionLost,
                            std::string("partial session: ") + e.what() +
                                (last_flushed ? ", last sent trial " + std::to_string(*last_flushed) : ""),
                            last_flushed);
    }
    summary.records = total;
    summary.checksum = checksum.value();

    // The referee closes the connection once the session is merged, or
    // sends Abort if it rejected a stream.
    try {
        while (const std::optional<Message> reply = conn.receive()) {
            if (const auto* a = std::get_if<Abort>(&*reply)) {
                throw ProtocolError(ProtocolErrorKind::Aborted, a->reason);
            }
        }
    } catch (const ProtocolError& e) {
        if (e.kind() != ProtocolErrorKind::ConnectionLost) throw;
    }
    return summary;
}

NoSignalingResult verify_no_signaling(const ExperimentReport& report, double threshold_sigma) {
    NoSignalingResult result;
    const CountsTable& c = report.counts;
    for (const auto& p : c.pairs) {
        if (p.trials < 100) result.insufficient_statistics = true;
    }
    for (Party side : {Party::Alice, Party::Bob}) {
        for (int own = 0; own < 2; ++own) {
            const PairCounts& p0 = side == Party::Alice ? c.pair(own, 0) : c.pair(0, own);
            const PairCounts& p1 = side == Party::Alice ? c.pair(own, 1) : c.pair(1, own);
            auto tally = [&](const PairCounts& p, Outcome o) -> double {
                const std::uint64_t plus = side == Party::Alice ? p.alice_plus : p.bob_plus;
                const std::uint64_t minus = side == Party::Alice ? p.alice_minus : p.bob_minus;
                if (o == Outcome::Plus) return static_cast<double>(plus);
                if (o == Outcome::Minus) return static_cast<double>(minus);
                return static_cast<double>(p.trials - plus - minus);
            };
            for (Outcome o : {Outcome::Plus, Outcome::Minus, Outcome::NoDetection}) {
                const double z = two_proportion_z(tally(p0, o), static_cast<double>(p0.trials), tally(p1, o),
                                                  static_cast<double>(p1.trials));
                result.residuals.push_back({side, own, o, z});
                result.max_residual = std::max(result.max_residual, z);
            }
        }
    }
    result.passed = !result.insufficient_statistics && result.max_residual < threshold_sigma;
    return result;
}

}  // namespace lhv::net
