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

#include "lhv/model.hpp"

#include <cmath>
#include <string>

#include "lhv/errors.hpp"

namespace lhv {

namespace {

constexpr std::array<std::string_view, 5> kVariantNames = {"no-loophole", "asymmetric", "symmetric", "independent",
                                                           "planar"};

bool has_swap_bit(ModelVariant v) {
    return v == ModelVariant::Symmetric || v == ModelVariant::IndependentDetectors ||
           v == ModelVariant::PlanarSteiner;
}

std::size_t code(Outcome o) { return static_cast<std::size_t>(o); }

}  // namespace

std::string_view to_string(ModelVariant variant) { return kVariantNames.at(static_cast<std::size_t>(variant)); }

std::optional<ModelVariant> parse_variant(std::string_view name) {
    for (std::size_t i = 0; i < kVariantNames.size(); ++i) {
        if (kVariantNames[i] == name) return static_cast<ModelVariant>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Party party) { return party == Party::Alice ? "alice" : "bob"; }

std::optional<Party> parse_party(std::string_view name) {
    if (name == "alice") return Party::Alice;
    if (name == "bob") return Party::Bob;
    return std::nullopt;
}

SingleSpinState SingleSpinState::from_bloch(const Vec3& bloch) {
    const double n = norm(bloch);
    if (!std::isfinite(n) || n > 1.0 + 1e-12) {
        throw ConfigError("Bloch vector must have norm <= 1");
    }
    return SingleSpinState(bloch);
}

HiddenVariable sample_hidden_variable(Substream& stream, ModelVariant variant) {
    const double u_z = stream.uniform();
    const double u_phi = stream.uniform();
    const double u_swap = stream.uniform();
    const double u_kill = stream.uniform();

    HiddenVariable hv;
    const double phi = kTwoPi * u_phi;
    if (variant == ModelVariant::PlanarSteiner) {
        hv.lambda = UnitVector3::from_planar_angle(phi);
    } else {
        const double z = 2.0 * u_z - 1.0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        hv.lambda = UnitVector3::from_components(r * std::cos(phi), r * std::sin(phi), z);
    }
    hv.swap_bit = has_swap_bit(variant) && u_swap < 0.5;
    hv.kill_bit = variant == ModelVariant::IndependentDetectors && u_kill < kKillProbability;
    return hv;
}

TrialVariates draw_trial_variates(Substream& stream, ModelVariant variant) {
    TrialVariates v;
    v.hidden = sample_hidden_variable(stream, variant);
    v.u_alice = stream.uniform();
    v.u_bob = stream.uniform();
    return v;
}

TrialVariates trial_variates(std::uint64_t seed, std::uint64_t trial, ModelVariant variant) {
    Substream stream(seed, StreamDomain::HiddenVariables, trial);
    return draw_trial_variates(stream, variant);
}

Outcome local_outcome(const SingleSpinState& state, const UnitVector3& lambda, const MeasurementSetting& a) {
    return sign_outcome(dot(state.bloch() - lambda.vec(), a));
}

bool detects(const UnitVector3& lambda, const MeasurementSetting& a, double u) {
    return u < std::abs(dot(lambda, a));
}

bool is_lossy_side(ModelVariant variant, Party party, const HiddenVariable& hidden) {
    switch (variant) {
        case ModelVariant::NoLoophole:
            return false;
        case ModelVariant::Asymmetric:
            return party == Party::Alice;
        case ModelVariant::Symmetric:
        case ModelVariant::IndependentDetectors:
        case ModelVariant::PlanarSteiner:
            return (party == Party::Bob) == hidden.swap_bit;
    }
    return false;
}

Outcome party_outcome(ModelVariant variant, Party party, const TrialVariates& v, const MeasurementSetting& setting) {
    if (v.hidden.kill_bit) return Outcome::NoDetection;
    const UnitVector3 arrow = party == Party::Alice ? v.hidden.lambda : -v.hidden.lambda;
    if (is_lossy_side(variant, party, v.hidden)) {
        const double u = party == Party::Alice ? v.u_alice : v.u_bob;
        if (!detects(arrow, setting, u)) return Outcome::NoDetection;
    }
    return local_outcome(SingleSpinState{}, arrow, setting);
}

void validate_setting(ModelVariant variant, const MeasurementSetting& setting) {
    if (variant == ModelVariant::PlanarSteiner && !setting.is_planar()) {
        throw ConfigError("planar variant requires settings in the xy plane (z = 0)");
    }
}

TrialRecord run_trial(ModelVariant variant, const MeasurementSetting& a, const MeasurementSetting& b,
                      const TrialVariates& variates) {
    validate_setting(variant, a);
    validate_setting(variant, b);
    TrialRecord r;
    r.alice = party_outcome(variant, Party::Alice, variates, a);
    r.bob = party_outcome(variant, Party::Bob, variates, b);
    return r;
}

TrialRecord run_trial(ModelVariant variant, const MeasurementSetting& a, const MeasurementSetting& b,
                      Substream& stream) {
    return run_trial(variant, a, b, draw_trial_variates(stream, variant));
}

double conditional_lambda_density(const UnitVector3& lambda, const MeasurementSetting& a) {
    return std::abs(dot(a, lambda)) / kTwoPi;
}

double correlation_quantum(const MeasurementSetting& a, const MeasurementSetting& b) { return -dot(a, b); }

double correlation_no_loophole(double theta_ab) {
    if (!(theta_ab >= 0.0 && theta_ab <= kPi)) {
        throw DomainError("angle must lie in [0, pi], got " + std::to_string(theta_ab));
    }
    return -1.0 + 2.0 * theta_ab / kPi;
}

JointDistribution joint_distribution(ModelVariant variant, const UnitVector3& lambda, const MeasurementSetting& a,
                                     const MeasurementSetting& b) {
    JointDistribution p{};
    const std::size_t A = code(local_outcome(SingleSpinState{}, lambda, a));
    const std::size_t B = code(local_outcome(SingleSpinState{}, -lambda, b));
    constexpr std::size_t none = 0;
    const double pa = std::abs(dot(lambda, a));
    const double pb = std::abs(dot(lambda, b));

    switch (variant) {
        case ModelVariant::NoLoophole:
            p[A][B] = 1.0;
            break;
        case ModelVariant::Asymmetric:
            p[A][B] = pa;
            p[none][B] = 1.0 - pa;
            break;
        case ModelVariant::Symmetric:
        case ModelVariant::PlanarSteiner:
        case ModelVariant::IndependentDetectors: {
            const double live = variant == ModelVariant::IndependentDetectors ? 1.0 - kKillProbability : 1.0;
            p[A][B] = 0.5 * live * (pa + pb);
            p[none][B] += 0.5 * live * (1.0 - pa);
            p[A][none] += 0.5 * live * (1.0 - pb);
            p[none][none] += 1.0 - live;
            break;
        }
    }
    return p;
}

double mean_detection_probability(ModelVariant variant, Party party) {
    switch (variant) {
        case ModelVariant::NoLoophole:
            return 1.0;
        case ModelVariant::Asymmetric:
            return party == Party::Alice ? 0.5 : 1.0;
        case ModelVariant::Symmetric:
            return 0.75;
        case ModelVariant::IndependentDetectors:
            return (1.0 - kKillProbability) * 0.75;
        case ModelVariant::PlanarSteiner:
            return 0.5 * (1.0 + 2.0 / kPi);
    }
    return 0.0;
}

double coincidence_probability(ModelVariant variant) {
    switch (variant) {
        case ModelVariant::NoLoophole:
            return 1.0;
        case ModelVariant::Asymmetric:
        case ModelVariant::Symmetric:
            return 0.5;
        case ModelVariant::IndependentDetectors:
            return (1.0 - kKillProbability) * 0.5;
        case ModelVariant::PlanarSteiner:
            return 2.0 / kPi;
    }
    return 0.0;
}

PlanarEfficiencies planar_efficiencies() {
    // Mean |cos| over the circle is 2/pi; the lossy side fires at that rate.
    const double p = 2.0 / kPi;
    return {0.5 * (p + 1.0), p / (0.5 * (p + 1.0))};
}

TrialRecord planar_model(double alpha_a, double alpha_b, Substream& stream) {
    return run_trial(ModelVariant::PlanarSteiner, UnitVector3::from_planar_angle(alpha_a),
                     UnitVector3::from_planar_angle(alpha_b), stream);
}

}  // namespace lhv
