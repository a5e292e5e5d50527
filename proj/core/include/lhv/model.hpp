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

#ifndef LHV_MODEL_HPP
#define LHV_MODEL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "lhv/rng.hpp"
#include "lhv/vec.hpp"

namespace lhv {

/// Variants of the detection-loophole model.
///
///  - NoLoophole: both detectors always fire; E(theta) = -1 + 2 theta / pi.
///  - Asymmetric: Alice fires with probability |lambda . a|, Bob always.
///  - Symmetric: a shared swap bit picks which side is lossy (3/4 per side).
///  - IndependentDetectors: Symmetric plus a shared kill bit (probability
///    1/9) that silences both sides; detections then factorize at 2/3 each.
///  - PlanarSteiner: lambda uniform on the unit circle of the xy plane,
///    otherwise Symmetric. Settings must lie in that plane.
enum class ModelVariant : std::uint8_t {
    NoLoophole = 0,
    Asymmetric = 1,
    Symmetric = 2,
    IndependentDetectors = 3,
    PlanarSteiner = 4,
};

inline constexpr std::array<ModelVariant, 5> kAllVariants = {
    ModelVariant::NoLoophole, ModelVariant::Asymmetric, ModelVariant::Symmetric,
    ModelVariant::IndependentDetectors, ModelVariant::PlanarSteiner};

std::string_view to_string(ModelVariant variant);
std::optional<ModelVariant> parse_variant(std::string_view name);

enum class Party : std::uint8_t { Alice = 0, Bob = 1 };

std::string_view to_string(Party party);
std::optional<Party> parse_party(std::string_view name);

/// Result on one side of a trial. The numeric codes are the wire encoding.
enum class Outcome : std::uint8_t { NoDetection = 0, Plus = 1, Minus = 2 };

/// +1 / -1 for a detected outcome, 0 for NoDetection.
constexpr int spin_value(Outcome o) {
    return o == Outcome::Plus ? 1 : (o == Outcome::Minus ? -1 : 0);
}

/// sign(x) with sign(0) := +1.
constexpr Outcome sign_outcome(double x) { return x >= 0.0 ? Outcome::Plus : Outcome::Minus; }

/// Local quantum state of a single spin, by its Bloch vector <sigma>.
class SingleSpinState {
public:
    /// Maximally mixed state (the local state of either half of a singlet).
    constexpr SingleSpinState() = default;

    /// Throws ConfigError if |bloch| > 1 + 1e-12 or a component is not finite.
    static SingleSpinState from_bloch(const Vec3& bloch);

    constexpr const Vec3& bloch() const { return bloch_; }

private:
    constexpr explicit SingleSpinState(const Vec3& b) : bloch_(b) {}
    Vec3 bloch_{};
};

struct HiddenVariable {
    UnitVector3 lambda;  // Alice's arrow; Bob carries -lambda.
    bool swap_bit = false;
    bool kill_bit = false;
};

/// Everything a trial consumes: the shared hidden variable plus one detection
/// variate per side, always drawn in the order
/// (z, azimuth, swap, kill, u_alice, u_bob).
struct TrialVariates {
    HiddenVariable hidden;
    double u_alice = 0.0;
    double u_bob = 0.0;
};

inline constexpr double kKillProbability = 1.0 / 9.0;

/// Draws lambda uniformly on S^2 (z uniform on [-1, 1], azimuth uniform on
/// [0, 2 pi)) or on the xy circle for PlanarSteiner, then the swap and kill
/// bits. Always consumes exactly four variates.
HiddenVariable sample_hidden_variable(Substream& stream, ModelVariant variant);

TrialVariates draw_trial_variates(Substream& stream, ModelVariant variant);

/// Variates of trial `trial` in the session keyed by `seed`.
TrialVariates trial_variates(std::uint64_t seed, std::uint64_t trial, ModelVariant variant);

/// sign((bloch - lambda) . a).
Outcome local_outcome(const SingleSpinState& state, const UnitVector3& lambda, const MeasurementSetting& a);

/// True iff u < |lambda . a|.
bool detects(const UnitVector3& lambda, const MeasurementSetting& a, double u);

inline bool alice_detects(const UnitVector3& lambda, const MeasurementSetting& a, double u) {
    return detects(lambda, a, u);
}

/// Whether `party` is the side whose detector may fail on this trial.
bool is_lossy_side(ModelVariant variant, Party party, const HiddenVariable& hidden);

/// Outcome of one side computed from local information only: the shared
/// variates and that side's own setting.
Outcome party_outcome(ModelVariant variant, Party party, const TrialVariates& v, const MeasurementSetting& setting);

struct TrialRecord {
    std::uint64_t trial = 0;
    std::uint8_t pair = 0;
    Outcome alice = Outcome::NoDetection;
    Outcome bob = Outcome::NoDetection;

    bool operator==(const TrialRecord&) const = default;
};

/// Throws ConfigError if `setting` is not admissible for `variant`.
void validate_setting(ModelVariant variant, const MeasurementSetting& setting);

TrialRecord run_trial(ModelVariant variant, const MeasurementSetting& a, const MeasurementSetting& b,
                      const TrialVariates& variates);
TrialRecord run_trial(ModelVariant variant, const MeasurementSetting& a, const MeasurementSetting& b,
                      Substream& stream);

/// Density of lambda on S^2 given that a detector with setting a fired:
/// |a . lambda| / (2 pi).
double conditional_lambda_density(const UnitVector3& lambda, const MeasurementSetting& a);

/// Singlet correlation -a . b.
double correlation_quantum(const MeasurementSetting& a, const MeasurementSetting& b);

/// Correlation of the loss-free model, -1 + 2 theta / pi. Throws DomainError
/// for theta outside [0, pi].
double correlation_no_loophole(double theta_ab);

/// P[alice][bob] indexed by Outcome code, for a fixed lambda, averaged over
/// the swap, kill and detection variates.
using JointDistribution = std::array<std::array<double, 3>, 3>;

JointDistribution joint_distribution(ModelVariant variant, const UnitVector3& lambda, const MeasurementSetting& a,
                                     const MeasurementSetting& b);

/// Closed-form mean firing probability of one side.
double mean_detection_probability(ModelVariant variant, Party party);

/// Closed-form probability that both sides fire.
double coincidence_probability(ModelVariant variant);

struct PlanarEfficiencies {
    double mean_efficiency;      // (1 + 2/pi) / 2
    double relevant_efficiency;  // 4 / (pi + 2)
};

PlanarEfficiencies planar_efficiencies();

/// One PlanarSteiner trial with settings given as in-plane angles.
TrialRecord planar_model(double alpha_a, double alpha_b, Substream& stream);

}  // namespace lhv

#endif
