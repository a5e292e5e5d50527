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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lhv/errors.hpp"
#include "lhv/model.hpp"
#include "lhv/rng.hpp"
#include "test_util.hpp"

namespace lhv {
namespace {

using testing::binomial_sigma;
using testing::random_direction;

constexpr int kDraws = 1'000'000;

TEST(UnitVector, NormalizesAndBuildsFromSpherical) {
    const UnitVector3 v = UnitVector3::from_components(3.0, 0.0, 4.0);
    EXPECT_DOUBLE_EQ(v.x(), 0.6);
    EXPECT_DOUBLE_EQ(v.z(), 0.8);
    const UnitVector3 s = UnitVector3::from_spherical(kPi / 2, kPi / 2);
    EXPECT_NEAR(s.x(), 0.0, 1e-15);
    EXPECT_NEAR(s.y(), 1.0, 1e-15);
    EXPECT_NEAR(s.z(), 0.0, 1e-15);
    EXPECT_THROW(UnitVector3::from_components(0.0, 0.0, 0.0), ConfigError);
    EXPECT_THROW(UnitVector3::from_components(NAN, 0.0, 1.0), ConfigError);
}

TEST(UnitVector, AngleBetween) {
    const auto a = UnitVector3::from_planar_angle(0.3);
    const auto b = UnitVector3::from_planar_angle(0.3 + kPi / 3);
    EXPECT_NEAR(angle_between(a, b), kPi / 3, 1e-14);
    EXPECT_NEAR(angle_between(a, -a), kPi, 1e-14);
}

TEST(Substream, DeterministicAndIndependentOfDrawOrder) {
    Substream s1(42, StreamDomain::HiddenVariables, 7);
    Substream s2(42, StreamDomain::HiddenVariables, 7);
    Substream other(42, StreamDomain::AliceChoice, 7);
    for (int i = 0; i < 100; ++i) {
        const double u = s1.uniform();
        EXPECT_EQ(u, s2.uniform());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
    EXPECT_NE(Substream(42, StreamDomain::HiddenVariables, 7).next_u64(), other.next_u64());
}

TEST(SampleHiddenVariable, MeanZIsZero) {
    Substream s(1, StreamDomain::HiddenVariables, 0);
    double sum = 0.0;
    for (int i = 0; i < kDraws; ++i) sum += sample_hidden_variable(s, ModelVariant::Asymmetric).lambda.z();
    EXPECT_NEAR(sum / kDraws, 0.0, 5e-3);
}

TEST(SampleHiddenVariable, MeanAbsProjectionIsOneHalf) {
    // |lambda.a| is uniform on [0,1] for uniform lambda: mean 1/2, sd 1/sqrt(12).
    const auto a = UnitVector3::from_components(1.0, -2.0, 0.5);
    Substream s(2, StreamDomain::HiddenVariables, 0);
    double sum = 0.0;
    for (int i = 0; i < kDraws; ++i) sum += std::abs(dot(sample_hidden_variable(s, ModelVariant::Symmetric).lambda, a));
    EXPECT_NEAR(sum / kDraws, 0.5, 3.0 / std::sqrt(12.0 * kDraws));
}

TEST(SampleHiddenVariable, KillBitRate) {
    Substream s(3, StreamDomain::HiddenVariables, 0);
    int kills = 0;
    for (int i = 0; i < kDraws; ++i) kills += sample_hidden_variable(s, ModelVariant::IndependentDetectors).kill_bit;
    EXPECT_NEAR(static_cast<double>(kills) / kDraws, 1.0 / 9.0, 3.0 * binomial_sigma(1.0 / 9.0, kDraws));
}

TEST(SampleHiddenVariable, AuxiliaryBitsFollowVariant) {
    for (ModelVariant v : kAllVariants) {
        Substream s(4, StreamDomain::HiddenVariables, 0);
        int swaps = 0;
        int kills = 0;
        constexpr int n = 100'000;
        for (int i = 0; i < n; ++i) {
            const HiddenVariable h = sample_hidden_variable(s, v);
            swaps += h.swap_bit;
            kills += h.kill_bit;
            ASSERT_NEAR(norm(h.lambda.vec()), 1.0, 1e-12);
            if (v == ModelVariant::PlanarSteiner) ASSERT_EQ(h.lambda.z(), 0.0);
        }
        const bool symmetrized = v == ModelVariant::Symmetric || v == ModelVariant::IndependentDetectors ||
                                 v == ModelVariant::PlanarSteiner;
        if (symmetrized) {
            EXPECT_NEAR(static_cast<double>(swaps) / n, 0.5, 5.0 * binomial_sigma(0.5, n)) << to_string(v);
        } else {
            EXPECT_EQ(swaps, 0) << to_string(v);
        }
        if (v != ModelVariant::IndependentDetectors) EXPECT_EQ(kills, 0) << to_string(v);
    }
}

TEST(LocalOutcome, PureStateAlongSettingIsCertain) {
    std::mt19937_64 g(5);
    const auto a = random_direction(g);
    const SingleSpinState pure = SingleSpinState::from_bloch(a.vec());
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(local_outcome(pure, random_direction(g), a), Outcome::Plus);
}

TEST(LocalOutcome, TieResolvesToPlus) {
    const auto a = UnitVector3::from_components(0.0, 1.0, 0.0);
    EXPECT_EQ(local_outcome(SingleSpinState{}, -a, a), Outcome::Plus);
    EXPECT_EQ(local_outcome(SingleSpinState{}, a, a), Outcome::Minus);
    const auto perp = UnitVector3::from_components(1.0, 0.0, 0.0);
    EXPECT_EQ(local_outcome(SingleSpinState{}, perp, a), Outcome::Plus);
}

TEST(LocalOutcome, MixedStateMatchesBornRule) {
    const Vec3 m{0.3, -0.2, 0.5};
    const auto a = UnitVector3::from_components(0.0, 0.6, 0.8);
    const SingleSpinState state = SingleSpinState::from_bloch(m);
    Substream s(6, StreamDomain::HiddenVariables, 0);
    int plus = 0;
    for (int i = 0; i < kDraws; ++i) {
        plus += local_outcome(state, sample_hidden_variable(s, ModelVariant::NoLoophole).lambda, a) == Outcome::Plus;
    }
    const double expected = 0.5 * (1.0 + dot(m, a));
    EXPECT_NEAR(static_cast<double>(plus) / kDraws, expected, 3.0 * binomial_sigma(expected, kDraws));
}

TEST(LocalOutcome, RejectsBlochVectorOutsideBall) {
    EXPECT_THROW(SingleSpinState::from_bloch({0.8, 0.8, 0.0}), ConfigError);
    EXPECT_NO_THROW(SingleSpinState::from_bloch({0.0, 0.0, 1.0}));
}

TEST(AliceDetects, ExtremeProjections) {
    const auto a = UnitVector3::from_components(1.0, 1.0, 1.0);
    const auto perp = UnitVector3::from_components(1.0, -1.0, 0.0);
    for (double u : {0.0, 0.25, 0.5, 0.999999, std::nextafter(1.0, 0.0)}) {
        EXPECT_TRUE(alice_detects(a, a, u));
        EXPECT_TRUE(alice_detects(-a, a, u));
        EXPECT_FALSE(alice_detects(perp, a, u));
    }
}

TEST(AliceDetects, MeanRateIsOneHalf) {
    const auto a = UnitVector3::from_components(-0.2, 0.4, 1.0);
    Substream s(7, StreamDomain::HiddenVariables, 0);
    int fired = 0;
    for (int i = 0; i < kDraws; ++i) {
        const UnitVector3 lambda = sample_hidden_variable(s, ModelVariant::Asymmetric).lambda;
        fired += alice_detects(lambda, a, s.uniform());
    }
    EXPECT_NEAR(static_cast<double>(fired) / kDraws, 0.5, 3.0 * binomial_sigma(0.5, kDraws));
}

TEST(RunTrial, NoLoopholeEqualSettingsAlwaysOpposite) {
    std::mt19937_64 g(8);
    const auto a = random_direction(g);
    for (std::uint64_t t = 0; t < 10'000; ++t) {
        const TrialRecord r = run_trial(ModelVariant::NoLoophole, a, a, trial_variates(8, t, ModelVariant::NoLoophole));
        ASSERT_NE(r.alice, Outcome::NoDetection);
        ASSERT_EQ(spin_value(r.alice) * spin_value(r.bob), -1);
    }
}

TEST(RunTrial, DetectionStructurePerVariant) {
    std::mt19937_64 g(9);
    const auto a = random_direction(g);
    const auto b = random_direction(g);
    for (std::uint64_t t = 0; t < 50'000; ++t) {
        const auto asym = run_trial(ModelVariant::Asymmetric, a, b, trial_variates(9, t, ModelVariant::Asymmetric));
        ASSERT_NE(asym.bob, Outcome::NoDetection);
        const auto sym = run_trial(ModelVariant::Symmetric, a, b, trial_variates(9, t, ModelVariant::Symmetric));
        ASSERT_TRUE(sym.alice != Outcome::NoDetection || sym.bob != Outcome::NoDetection);
        const auto nl = run_trial(ModelVariant::NoLoophole, a, b, trial_variates(9, t, ModelVariant::NoLoophole));
        ASSERT_NE(nl.alice, Outcome::NoDetection);
        ASSERT_NE(nl.bob, Outcome::NoDetection);
    }
}

TEST(RunTrial, KillBitSilencesBothSides) {
    std::mt19937_64 g(10);
    int killed = 0;
    for (std::uint64_t t = 0; t < 20'000; ++t) {
        const TrialVariates v = trial_variates(10, t, ModelVariant::IndependentDetectors);
        if (!v.hidden.kill_bit) continue;
        ++killed;
        const auto r = run_trial(ModelVariant::IndependentDetectors, random_direction(g), random_direction(g), v);
        ASSERT_EQ(r.alice, Outcome::NoDetection);
        ASSERT_EQ(r.bob, Outcome::NoDetection);
    }
    EXPECT_GT(killed, 0);
}

TEST(RunTrial, IndependentDetectorsOutcomeMultiplicity) {
    std::mt19937_64 g(11);
    const auto a = random_direction(g);
    const auto b = random_direction(g);
    constexpr int n = kDraws;
    std::array<int, 3> hist{};
    for (std::uint64_t t = 0; t < n; ++t) {
        const auto r = run_trial(ModelVariant::IndependentDetectors, a, b,
                                 trial_variates(11, t, ModelVariant::IndependentDetectors));
        ++hist[(r.alice != Outcome::NoDetection) + (r.bob != Outcome::NoDetection)];
    }
    const std::array<double, 3> expected = {1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0};
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(static_cast<double>(hist[k]) / n, expected[k], 3.0 * binomial_sigma(expected[k], n)) << k;
    }
}

TEST(RunTrial, PlanarRejectsOutOfPlaneSetting) {
    const auto in_plane = UnitVector3::from_planar_angle(0.2);
    const auto tilted = UnitVector3::from_components(1.0, 0.0, 0.1);
    EXPECT_THROW(run_trial(ModelVariant::PlanarSteiner, in_plane, tilted,
                           trial_variates(1, 0, ModelVariant::PlanarSteiner)),
                 ConfigError);
    EXPECT_NO_THROW(run_trial(ModelVariant::Symmetric, in_plane, tilted, trial_variates(1, 0, ModelVariant::Symmetric)));
}

TEST(RunTrial, StreamOverloadMatchesVariateOverload) {
    std::mt19937_64 g(12);
    const auto a = random_direction(g);
    const auto b = random_direction(g);
    for (ModelVariant v : {ModelVariant::Asymmetric, ModelVariant::Symmetric, ModelVariant::IndependentDetectors}) {
        for (std::uint64_t t = 0; t < 1000; ++t) {
            Substream s(12, StreamDomain::HiddenVariables, t);
            const TrialRecord via_stream = run_trial(v, a, b, s);
            const TrialRecord via_variates = run_trial(v, a, b, trial_variates(12, t, v));
            ASSERT_EQ(via_stream.alice, via_variates.alice);
            ASSERT_EQ(via_stream.bob, via_variates.bob);
        }
    }
}

TEST(ConditionalDensity, Examples) {
    const auto a = UnitVector3::from_components(0.0, 0.0, 1.0);
    EXPECT_DOUBLE_EQ(conditional_lambda_density(a, a), 1.0 / kTwoPi);
    EXPECT_DOUBLE_EQ(conditional_lambda_density(UnitVector3::from_planar_angle(1.0), a), 0.0);
}

TEST(Correlations, QuantumExamples) {
    const auto a = UnitVector3::from_planar_angle(0.4);
    EXPECT_DOUBLE_EQ(correlation_quantum(a, a), -1.0);
    EXPECT_NEAR(correlation_quantum(a, UnitVector3::from_planar_angle(0.4 + kPi / 2)), 0.0, 1e-15);
    EXPECT_NEAR(correlation_quantum(a, UnitVector3::from_planar_angle(0.4 + kPi / 3)), -0.5, 1e-15);
}

TEST(Correlations, LinearExamples) {
    EXPECT_DOUBLE_EQ(correlation_no_loophole(0.0), -1.0);
    EXPECT_DOUBLE_EQ(correlation_no_loophole(kPi / 2), 0.0);
    EXPECT_DOUBLE_EQ(correlation_no_loophole(kPi), 1.0);
    EXPECT_THROW(correlation_no_loophole(-1e-9), DomainError);
    EXPECT_THROW(correlation_no_loophole(kPi + 1e-9), DomainError);
}

TEST(JointDistribution, RowsSumToOne) {
    std::mt19937_64 g(13);
    for (ModelVariant v : kAllVariants) {
        for (int i = 0; i < 200; ++i) {
            const bool planar = v == ModelVariant::PlanarSteiner;
            const auto lambda = planar ? UnitVector3::from_planar_angle(testing::random_angle(g)) : random_direction(g);
            const auto a = planar ? UnitVector3::from_planar_angle(testing::random_angle(g)) : random_direction(g);
            const auto b = planar ? UnitVector3::from_planar_angle(testing::random_angle(g)) : random_direction(g);
            const JointDistribution j = joint_distribution(v, lambda, a, b);
            double total = 0.0;
            for (const auto& row : j) {
                for (double p : row) {
                    ASSERT_GE(p, 0.0);
                    total += p;
                }
            }
            ASSERT_NEAR(total, 1.0, 1e-14);
        }
    }
}

TEST(ClosedForms, EfficienciesPerVariant) {
    EXPECT_DOUBLE_EQ(mean_detection_probability(ModelVariant::Asymmetric, Party::Alice), 0.5);
    EXPECT_DOUBLE_EQ(mean_detection_probability(ModelVariant::Asymmetric, Party::Bob), 1.0);
    EXPECT_DOUBLE_EQ(mean_detection_probability(ModelVariant::Symmetric, Party::Bob), 0.75);
    EXPECT_DOUBLE_EQ(mean_detection_probability(ModelVariant::IndependentDetectors, Party::Alice), 2.0 / 3.0);
    EXPECT_NEAR(coincidence_probability(ModelVariant::IndependentDetectors), 4.0 / 9.0, 1e-15);
    EXPECT_DOUBLE_EQ(coincidence_probability(ModelVariant::NoLoophole), 1.0);
}

TEST(PlanarModel, MeanEfficiencyAndOrthogonalCorrelation) {
    const double alpha_a = 0.7;
    const double alpha_b = 0.7 + kPi / 2;
    constexpr int n = kDraws;
    int alice = 0;
    int bob = 0;
    long long product = 0;
    int coincidences = 0;
    for (std::uint64_t t = 0; t < n; ++t) {
        Substream s(14, StreamDomain::HiddenVariables, t);
        const TrialRecord r = planar_model(alpha_a, alpha_b, s);
        alice += r.alice != Outcome::NoDetection;
        bob += r.bob != Outcome::NoDetection;
        if (r.alice != Outcome::NoDetection && r.bob != Outcome::NoDetection) {
            ++coincidences;
            product += spin_value(r.alice) * spin_value(r.bob);
        }
    }
    const double mean_eff = 0.5 * (1.0 + 2.0 / kPi);
    EXPECT_NEAR(static_cast<double>(alice) / n, mean_eff, 3.0 * binomial_sigma(mean_eff, n));
    EXPECT_NEAR(static_cast<double>(bob) / n, mean_eff, 3.0 * binomial_sigma(mean_eff, n));
    EXPECT_NEAR(static_cast<double>(product) / coincidences, 0.0, 3.0 / std::sqrt(coincidences));
    const PlanarEfficiencies pe = planar_efficiencies();
    EXPECT_NEAR(pe.mean_efficiency, 0.81831, 1e-5);
    EXPECT_NEAR(pe.relevant_efficiency, 0.77797, 1e-5);
}

TEST(Determinism, TrialVariatesDependOnlyOnSeedAndIndex) {
    for (std::uint64_t t : {0ULL, 1ULL, 999'999ULL, 1ULL << 40}) {
        const TrialVariates x = trial_variates(77, t, ModelVariant::IndependentDetectors);
        const TrialVariates y = trial_variates(77, t, ModelVariant::IndependentDetectors);
        EXPECT_EQ(x.hidden.lambda, y.hidden.lambda);
        EXPECT_EQ(x.u_alice, y.u_alice);
        EXPECT_EQ(x.u_bob, y.u_bob);
        EXPECT_EQ(x.hidden.kill_bit, y.hidden.kill_bit);
    }
    EXPECT_NE(trial_variates(77, 0, ModelVariant::Symmetric).hidden.lambda,
              trial_variates(78, 0, ModelVariant::Symmetric).hidden.lambda);
}

TEST(Names, VariantAndPartyRoundTrip) {
    for (ModelVariant v : kAllVariants) EXPECT_EQ(parse_variant(to_string(v)), v);
    EXPECT_FALSE(parse_variant("steiner-3d"));
    EXPECT_EQ(parse_party("alice"), Party::Alice);
    EXPECT_EQ(parse_party("bob"), Party::Bob);
    EXPECT_FALSE(parse_party("carol"));
}

}  // namespace
}  // namespace lhv
