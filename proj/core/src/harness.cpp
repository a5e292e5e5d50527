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

#include "lhv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "lhv/errors.hpp"

namespace lhv {

namespace {

constexpr std::array<std::string_view, 3> kScheduleNames = {"fixed-pair", "cycle-quadruple", "random-quadruple"};

double binomial_sigma(double p, double n) { return n > 0.0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / n) : 0.0; }

DetectionStats detection_stats(const CountsTable& counts) {
    double n = 0, a = 0, b = 0, j = 0, none = 0;
    for (const auto& p : counts.pairs) {
        n += static_cast<double>(p.trials);
        a += static_cast<double>(p.alice_detections());
        b += static_cast<double>(p.bob_detections());
        j += static_cast<double>(p.coincidences());
        none += static_cast<double>(p.neither);
    }
    DetectionStats s;
    if (n == 0.0) return s;
    s.alice_rate = a / n;
    s.bob_rate = b / n;
    s.joint_rate = j / n;
    s.alice_sigma = binomial_sigma(s.alice_rate, n);
    s.bob_sigma = binomial_sigma(s.bob_rate, n);
    s.joint_sigma = binomial_sigma(s.joint_rate, n);
    s.factorization_residual = s.joint_rate - s.alice_rate * s.bob_rate;
    s.residual_sigma =
        std::sqrt(std::max(0.0, s.alice_rate * (1.0 - s.alice_rate) * s.bob_rate * (1.0 - s.bob_rate)) / n);
    s.outcome_multiplicity = {none / n, (a + b - 2.0 * j) / n, j / n};
    for (std::size_t i = 0; i < 3; ++i) {
        s.outcome_multiplicity_sigma[i] = binomial_sigma(s.outcome_multiplicity[i], n);
    }
    if (a > 0.0) {
        const double r = j / a;
        s.relevant_efficiency = r;
        s.relevant_efficiency_sigma = binomial_sigma(r, a);
    }
    return s;
}

}  // namespace

std::string_view to_string(Schedule schedule) { return kScheduleNames.at(static_cast<std::size_t>(schedule)); }

std::optional<Schedule> parse_schedule(std::string_view name) {
    for (std::size_t i = 0; i < kScheduleNames.size(); ++i) {
        if (kScheduleNames[i] == name) return static_cast<Schedule>(i);
    }
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    if (n_trials < 1) throw ConfigError("n_trials must be at least 1");
    if (static_cast<std::size_t>(variant) >= kAllVariants.size()) throw ConfigError("unknown model variant");
    if (static_cast<std::size_t>(schedule) >= kScheduleNames.size()) throw ConfigError("unknown schedule");
    if (n_trials > std::numeric_limits<std::uint64_t>::max() / 4) throw ConfigError("n_trials too large");
    for (const auto* s : {&quad.a, &quad.a_prime, &quad.b, &quad.b_prime}) validate_setting(variant, *s);
}

std::uint64_t ExperimentConfig::total_trials() const {
    return schedule == Schedule::FixedPair ? n_trials : 4 * n_trials;
}

int setting_choice(Party party, Schedule schedule, std::uint64_t seed, std::uint64_t trial) {
    switch (schedule) {
        case Schedule::FixedPair:
            return 0;
        case Schedule::CycleQuadruple: {
            const int k = static_cast<int>(trial % 4);
            return party == Party::Alice ? alice_index_of_pair(k) : bob_index_of_pair(k);
        }
        case Schedule::RandomQuadruple: {
            const auto domain = party == Party::Alice ? StreamDomain::AliceChoice : StreamDomain::BobChoice;
            return Substream(seed, domain, trial).bit() ? 1 : 0;
        }
    }
    return 0;
}

ExperimentReport make_report(const ExperimentConfig& config, const CountsTable& counts) {
    ExperimentReport r;
    r.config = config;
    r.counts = counts;
    bool all_coincident = true, all_trials = true;
    for (int k = 0; k < 4; ++k) {
        const auto& p = counts.pairs[k];
        all_trials = all_trials && p.trials > 0;
        if (p.coincidences() > 0) {
            r.pairs[k].correlation = renormalized_correlation(p);
            r.pairs[k].sigma = correlation_sigma(p);
        } else {
            all_coincident = false;
        }
    }
    if (all_coincident) r.chsh = chsh_from_counts(counts);
    if (all_trials) r.ch = ch_evaluate(counts, config.quad);
    r.detection = detection_stats(counts);
    return r;
}

CountsTable simulate_range(const ExperimentConfig& config, std::uint64_t first, std::uint64_t last) {
    CountsTable counts;
    const auto& quad = config.quad;
    for (std::uint64_t t = first; t < last; ++t) {
        const int x = setting_choice(Party::Alice, config.schedule, config.seed, t);
        const int y = setting_choice(Party::Bob, config.schedule, config.seed, t);
        const TrialVariates v = trial_variates(config.seed, t, config.variant);
        counts.pair(x, y).record(party_outcome(config.variant, Party::Alice, v, quad.alice(x)),
                                 party_outcome(config.variant, Party::Bob, v, quad.bob(y)));
    }
    return counts;
}

ExperimentReport run_experiment(const ExperimentConfig& config, RunOptions options) {
    config.validate();
    const std::uint64_t total = config.total_trials();
    const std::uint64_t batches = std::clamp<std::uint64_t>(options.batches, 1, std::max<std::uint64_t>(total, 1));

    std::vector<CountsTable> partial(batches);
    {
        std::vector<std::jthread> workers;
        workers.reserve(batches);
        for (std::uint64_t i = 0; i < batches; ++i) {
            const std::uint64_t first = total / batches * i + std::min(i, total % batches);
            const std::uint64_t last = first + total / batches + (i < total % batches ? 1 : 0);
            workers.emplace_back([&, i, first, last] { partial[i] = simulate_range(config, first, last); });
        }
    }
    CountsTable merged;
    for (const auto& p : partial) merged += p;
    return make_report(config, merged);
}

std::vector<double> uniform_theta_grid(int points) {
    if (points < 2) throw ConfigError("a theta grid needs at least two points");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) grid[i] = kPi * i / (points - 1);
    grid.back() = kPi;
    return grid;
}

ScanResult scan_correlation(ModelVariant variant, const std::vector<double>& theta_grid, std::uint64_t n_trials,
                            std::uint64_t seed, RunOptions options) {
    if (theta_grid.empty()) throw ConfigError("empty theta grid");
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        if (!(theta_grid[i] >= 0.0 && theta_grid[i] <= kPi)) throw ConfigError("scan angles must lie in [0, pi]");
        if (i > 0 && !(theta_grid[i] > theta_grid[i - 1])) throw ConfigError("scan grid must be strictly increasing");
    }
    ScanResult scan;
    scan.variant = variant;
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const double theta = theta_grid[i];
        ExperimentConfig config;
        config.variant = variant;
        const auto a = UnitVector3::from_planar_angle(0.0);
        const auto b = UnitVector3::from_planar_angle(theta);
        config.quad = {a, a, b, b};
        config.n_trials = n_trials;
        config.seed = derive_seed(seed, StreamDomain::ScanPoint, i);
        config.schedule = Schedule::FixedPair;
        const ExperimentReport report = run_experiment(config, options);

        scan.theta.push_back(theta);
        scan.e_model.push_back(report.pairs[0].correlation.value_or(std::numeric_limits<double>::quiet_NaN()));
        scan.sigma.push_back(report.pairs[0].sigma.value_or(std::numeric_limits<double>::quiet_NaN()));
        scan.detected.push_back(report.counts.pairs[0].coincidences());
        scan.e_linear.push_back(correlation_no_loophole(theta));
        scan.e_quantum.push_back(correlation_quantum(a, b));
    }
    return scan;
}

}  // namespace lhv
