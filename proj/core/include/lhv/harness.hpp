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

#ifndef LHV_HARNESS_HPP
#define LHV_HARNESS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "lhv/counts.hpp"
#include "lhv/inequalities.hpp"
#include "lhv/model.hpp"

namespace lhv {

/// How trials are assigned to setting pairs.
///
///  - FixedPair: every trial uses (a, b).
///  - CycleQuadruple: trial t uses pair t mod 4, so every pair gets exactly
///    n_trials trials.
///  - RandomQuadruple: Alice and Bob each pick their setting from their own
///    substream; pair counts fluctuate around n_trials.
enum class Schedule : std::uint8_t { FixedPair = 0, CycleQuadruple = 1, RandomQuadruple = 2 };

std::string_view to_string(Schedule schedule);
std::optional<Schedule> parse_schedule(std::string_view name);

struct ExperimentConfig {
    ModelVariant variant = ModelVariant::Symmetric;
    SettingQuadruple quad = SettingQuadruple::chsh_optimal();
    std::uint64_t n_trials = 1;  // per setting pair
    std::uint64_t seed = 1;
    Schedule schedule = Schedule::CycleQuadruple;

    /// Throws ConfigError.
    void validate() const;

    /// n_trials for FixedPair, 4 n_trials otherwise.
    std::uint64_t total_trials() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Setting index (0 or 1) that `party` uses on trial t. Depends only on the
/// schedule, the seed and that party's own substream.
int setting_choice(Party party, Schedule schedule, std::uint64_t seed, std::uint64_t trial);

struct PairEstimate {
    std::optional<double> correlation;  // renormalized, absent without coincidences
    std::optional<double> sigma;        // 1 / sqrt(coincidences)

    bool operator==(const PairEstimate&) const = default;
};

/// Detection statistics pooled over all trials of a run. Every `*_sigma` is a
/// binomial standard error; `residual_sigma` is the standard error of
/// P(both) - P(A) P(B) under independent firing.
struct DetectionStats {
    double alice_rate = 0.0;
    double alice_sigma = 0.0;
    double bob_rate = 0.0;
    double bob_sigma = 0.0;
    double joint_rate = 0.0;
    double joint_sigma = 0.0;
    double factorization_residual = 0.0;
    double residual_sigma = 0.0;
    std::array<double, 3> outcome_multiplicity{};        // P(0), P(1), P(2) detections
    std::array<double, 3> outcome_multiplicity_sigma{};
    std::optional<double> relevant_efficiency;  // P(both) / P(A fires)
    std::optional<double> relevant_efficiency_sigma;

    bool operator==(const DetectionStats&) const = default;
};

/// Counts plus every quantity derived from them. Build with make_report so
/// the derived fields are always a function of (config, counts).
struct ExperimentReport {
    ExperimentConfig config;
    CountsTable counts;
    std::array<PairEstimate, 4> pairs{};
    std::optional<ChshResult> chsh;  // needs coincidences on all four pairs
    std::optional<ChResult> ch;      // needs trials on all four pairs
    DetectionStats detection;

    bool operator==(const ExperimentReport&) const = default;
};

ExperimentReport make_report(const ExperimentConfig& config, const CountsTable& counts);

struct RunOptions {
    /// Trials are split into this many contiguous index ranges, one worker
    /// thread each. Results do not depend on it.
    unsigned batches = 1;
};

/// Simulates trials [first, last) of the session.
CountsTable simulate_range(const ExperimentConfig& config, std::uint64_t first, std::uint64_t last);

ExperimentReport run_experiment(const ExperimentConfig& config, RunOptions options = {});

/// Fig.-1 style comparison of the model, the loss-free linear correlation and
/// the singlet correlation.
struct ScanResult {
    ModelVariant variant = ModelVariant::Symmetric;
    std::vector<double> theta;
    std::vector<double> e_model;
    std::vector<double> sigma;
    std::vector<std::uint64_t> detected;
    std::vector<double> e_linear;
    std::vector<double> e_quantum;

    bool operator==(const ScanResult&) const = default;
};

/// `points` equally spaced angles from 0 to pi inclusive.
std::vector<double> uniform_theta_grid(int points);

/// Each angle runs n_trials trials with a seed derived from (seed, index).
/// Throws ConfigError for an empty grid or angles outside [0, pi].
ScanResult scan_correlation(ModelVariant variant, const std::vector<double>& theta_grid, std::uint64_t n_trials,
                            std::uint64_t seed, RunOptions options = {});

}  // namespace lhv

#endif
