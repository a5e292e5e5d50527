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

#ifndef LHV_NETDEMO_SESSION_HPP
#define LHV_NETDEMO_SESSION_HPP

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "lhv/harness.hpp"
#include "lhv/netdemo/connection.hpp"
#include "lhv/netdemo/wire.hpp"

namespace lhv::net {

/// The record a node emits for `trial`: a pure function of the shared
/// hidden-variable stream for that trial and the node's own setting choice.
Record node_record(const SessionConfig& session, Party role, std::uint64_t trial);

struct RefereeOptions {
    std::chrono::milliseconds timeout{60000};
    bool keep_logs = false;
};

struct SessionOutcome {
    ExperimentReport report;
    std::vector<Record> alice_log;  // filled only with keep_logs
    std::vector<Record> bob_log;
};

/// Collects one session: waits for one Alice and one Bob, sends Start to
/// both, joins their record streams on trial index and evaluates the counts
/// exactly as run_experiment does. Any protocol error aborts the session for
/// both nodes and is rethrown as ProtocolError.
class Referee {
public:
    explicit Referee(const Endpoint& bind, RefereeOptions options = {});

    std::uint16_t port() const { return listener_.port(); }

    SessionOutcome run(const SessionConfig& session);

private:
    Listener listener_;
    RefereeOptions options_;
};

ExperimentReport referee_serve(const Endpoint& bind, const SessionConfig& session);

/// Test hook: replaces the outcome a node reports. Receives the honest
/// outcome; anything else it uses is up to the hook.
using OutcomeOverride =
    std::function<Outcome(const SessionConfig& session, std::uint64_t trial, int own_setting, Outcome honest)>;

struct NodeOptions {
    std::chrono::milliseconds timeout{60000};
    OutcomeOverride override_outcome;
};

struct NodeSummary {
    Party role = Party::Alice;
    std::uint64_t session_id = 0;
    std::uint64_t records = 0;
    std::uint64_t checksum = 0;
    std::uint64_t no_detections = 0;
};

/// Runs one side of a session against the referee at `referee`. Never talks
/// to the other node. Throws ProtocolError; ConnectionLost carries the last
/// trial index handed to the transport.
NodeSummary node_run(Party role, const Endpoint& referee, NodeOptions options = {});

struct SignalingResidual {
    Party side = Party::Alice;
    int own_setting = 0;
    Outcome category = Outcome::NoDetection;
    double z = 0.0;  // |p(other=0) - p(other=1)| in units of its standard error
};

struct NoSignalingResult {
    double max_residual = 0.0;
    bool insufficient_statistics = false;
    bool passed = false;
    std::vector<SignalingResidual> residuals;
};

/// For each side and each of its settings, compares the distribution of
/// that side's results (+, -, no detection) between the two settings of the
/// other side with a two-proportion z statistic. Flags insufficient
/// statistics when any setting pair has fewer than 100 trials.
NoSignalingResult verify_no_signaling(const ExperimentReport& report, double threshold_sigma = 5.0);

}  // namespace lhv::net

#endif
