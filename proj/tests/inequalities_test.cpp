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

#include <algorithm>
#include <cmath>
#include <random>

#include "lhv/errors.hpp"
#include "lhv/harness.hpp"
#include "lhv/inequalities.hpp"
#include "lhv/quadrature.hpp"
#include "test_util.hpp"

namespace lhv {
namespace {

const double kSqrt2 = std::sqrt(2.0);

PairCounts coincidences_only(std::uint64_t pp, std::uint64_t mm, std::uint64_t pm, std::uint64_t mp) {
    PairCounts c;
    c.pp = pp;
    c.mm = mm;
    c.pm = pm;
    c.mp = mp;
    c.alice_plus = pp + pm;
    c.alice_minus = mp + mm;
    c.bob_plus = pp + mp;
    c.bob_minus = pm + mm;
    c.trials = pp + mm + pm + mp;
    return c;
}

TEST(RenormalizedCorrelation, Examples) {
    EXPECT_DOUBLE_EQ(renormalized_correlation(coincidences_only(0, 0, 5000, 5000)), -1.0);
    EXPECT_DOUBLE_EQ(renormalized_correlation(coincidences_only(7, 7, 7, 7)), 0.0);
    EXPECT_THROW(renormalized_correlation(PairCounts{}), DomainError);
    EXPECT_THROW(correlation_sigma(PairCounts{}), DomainError);
}

TEST(RenormalizedCorrelation, MonteCarloAtQuarterPi) {
    ExperimentConfig c;
    c.variant = ModelVariant::Symmetric;
    c.schedule = Schedule::FixedPair;
    c.quad = SettingQuadruple::planar(0.0, 0.0, kPi / 4, kPi / 4);
    c.n_trials = 1'000'000;
    c.seed = 31;
    const ExperimentReport r = run_experiment(c, {4});
    const double e = renormalized_correlation(r.counts.pairs[0]);
    EXPECT_NEAR(e, -std::cos(kPi / 4), 5.0 * correlation_sigma(r.counts.pairs[0]));
}

TEST(Chsh, Examples) {
    const ChshResult max = chsh_value(1, 1, 1, -1);
    EXPECT_DOUBLE_EQ(max.s, 4.0);
    EXPECT_TRUE(max.violated);
    const ChshResult boundary = chsh_value(-1, -1, -1, -1);
    EXPECT_DOUBLE_EQ(boundary.s, -2.0);
    EXPECT_FALSE(boundary.violated);

    const SettingQuadruple q = SettingQuadruple::chsh_optimal();
    const ChshResult singlet = chsh_value(correlation_quantum(q.a, q.b), correlation_quantum(q.a, q.b_prime),
                                          correlation_quantum(q.a_prime, q.b),
                                          correlation_quantum(q.a_prime, q.b_prime));
    EXPECT_NEAR(std::abs(singlet.s), 2.0 * kSqrt2, 1e-12);
    EXPECT_TRUE(singlet.violated);
}

TEST(Chsh, AntisymmetryAndRelabeling) {
    std::mt19937_64 g(32);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10'000; ++i) {
        const std::array<double, 4> e = {u(g), u(g), u(g), u(g)};
        const ChshResult r = chsh_value(e[0], e[1], e[2], e[3]);
        const ChshResult neg = chsh_value(-e[0], -e[1], -e[2], -e[3]);
        ASSERT_EQ(neg.s, -r.s);
        ASSERT_EQ(neg.violated, r.violated);
        ASSERT_EQ(r.violated, std::abs(r.s) > 2.0);

        auto images = chsh_images(e);
        ASSERT_NEAR(images[3], r.s, 1e-15);
        std::sort(images.begin(), images.end());
        // a <-> a' maps (ab, ab', a'b, a'b') to (a'b, a'b', ab, ab'); b <-> b' to (ab', ab, a'b', a'b).
        const std::array<std::array<double, 4>, 3> relabeled = {{{e[2], e[3], e[0], e[1]},
                                                                 {e[1], e[0], e[3], e[2]},
                                                                 {e[3], e[2], e[1], e[0]}}};
        for (const auto& f : relabeled) {
            auto other = chsh_images(f);
            std::sort(other.begin(), other.end());
            for (int k = 0; k < 4; ++k) ASSERT_NEAR(other[k], images[k], 1e-15);
            ASSERT_EQ(chsh_violated_any_image(f), chsh_violated_any_image(e));
        }
    }
}

TEST(BinaryIdentity, ExhaustiveAndExamples) {
    EXPECT_TRUE(binary_identity_check());
    auto lhs = [](int x, int xp, int y, int yp) { return x * y + x * yp + xp * y - xp * yp - (x + y); };
    EXPECT_EQ(lhs(1, 0, 1, 0), -1);
    EXPECT_EQ(lhs(0, 0, 0, 0), 0);
    int max = -100;
    for (int bits = 0; bits < 16; ++bits) max = std::max(max, lhs(bits & 1, bits >> 1 & 1, bits >> 2 & 1, bits >> 3 & 1));
    EXPECT_EQ(max, 0);
}

TEST(ChEvaluate, AllZeroCounts) {
    const ChResult r = ch_evaluate(CountsTable{}, SettingQuadruple::chsh_optimal());
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_FALSE(r.violated);
}

TEST(ChEvaluate, QuantumCountsAtOptimum) {
    constexpr double n = 1e6;
    const double expected_margin = n * (kSqrt2 - 1.0) / 2.0;
    // The CHSH-optimal quadruple has negative singlet CHSH value; the Bob-flipped
    // orientation is the one quantum counts violate.
    const SettingQuadruple q = SettingQuadruple::chsh_optimal();
    const ChResult r = ch_evaluate(quantum_predicted_counts(q, EfficiencyModel(1.0), n), q);
    EXPECT_EQ(r.orientation, ChOrientation::BobFlipped);
    EXPECT_NEAR(r.margin(), expected_margin, 1e-6 * n);
    EXPECT_TRUE(r.violated);

    // Rotating Bob's settings by pi gives positive S_q; the standard form violates.
    const SettingQuadruple rotated = SettingQuadruple::planar(0.0, kPi / 2, kPi / 4 + kPi, -kPi / 4 + kPi);
    const ChResult s = ch_evaluate(quantum_predicted_counts(rotated, EfficiencyModel(1.0), n), rotated);
    EXPECT_EQ(s.orientation, ChOrientation::Standard);
    EXPECT_NEAR(s.margin(), expected_margin, 1e-6 * n);
    EXPECT_TRUE(s.violated);
    const ChResult forced = ch_evaluate(quantum_predicted_counts(rotated, EfficiencyModel(1.0), n), rotated,
                                        ChOrientation::Standard);
    EXPECT_EQ(forced, s);
}

TEST(ChEvaluate, QuantumViolationVanishesBelowThreshold) {
    const SettingQuadruple q = SettingQuadruple::chsh_optimal();
    const double t = ch_threshold(q);
    EXPECT_TRUE(ch_evaluate(quantum_predicted_counts(q, EfficiencyModel(t + 1e-6), 1e6), q).violated);
    EXPECT_FALSE(ch_evaluate(quantum_predicted_counts(q, EfficiencyModel(t - 1e-6), 1e6), q).violated);
}

TEST(ChEvaluate, ModelExpectedCountsNeverViolate) {
    std::mt19937_64 g(33);
    constexpr double n = 1e6;
    for (int i = 0; i < 40; ++i) {
        for (ModelVariant v : kAllVariants) {
            const SettingQuadruple q =
                v == ModelVariant::PlanarSteiner ? testing::random_planar_quadruple(g) : testing::random_quadruple(g);
            const ExpectedCountsTable e = expected_counts(v, q, n, 64);
            for (ChOrientation o : {ChOrientation::Standard, ChOrientation::BobFlipped}) {
                const ChResult r = ch_evaluate(e, q, o);
                ASSERT_LE(r.margin(), 1e-6 * n) << to_string(v) << ' ' << i << ' ' << to_string(o);
            }
        }
    }
}

TEST(ChEvaluate, SimulatedCountsNotViolated) {
    for (ModelVariant v : kAllVariants) {
        ExperimentConfig c;
        c.variant = v;
        c.n_trials = 100'000;
        c.seed = 34;
        const ExperimentReport r = run_experiment(c, {4});
        ASSERT_TRUE(r.ch);
        EXPECT_FALSE(r.ch->violated) << to_string(v);
        EXPECT_LT(r.ch->margin(), 5.0 * r.ch->sigma) << to_string(v);
    }
}

TEST(ChEvaluate, UnequalTrialsUseRates) {
    // Doubling one pair's counts must not change the rate-normalized result.
    const SettingQuadruple q = SettingQuadruple::chsh_optimal();
    const ExpectedCountsTable base = quantum_predicted_counts(q, EfficiencyModel(0.9), 1000.0);
    ExpectedCountsTable scaled = base;
    scaled.pairs[2] += base.pairs[2];
    const ChResult a = ch_evaluate(base, q);
    const ChResult b = ch_evaluate(scaled, q);
    EXPECT_NEAR(b.margin() / (scaled.total_trials() / 4.0), a.margin() / 1000.0, 1e-12);
}

TEST(QuantumPredictedCounts, Examples) {
    const auto a = UnitVector3::from_planar_angle(0.0);
    const SettingQuadruple anti{a, a, -a, -a};
    const ExpectedCountsTable t = quantum_predicted_counts(anti, EfficiencyModel(1.0), 1000.0);
    EXPECT_DOUBLE_EQ(t.pairs[0].pp, 500.0);

    const SettingQuadruple perp{a, a, UnitVector3::from_planar_angle(kPi / 2), a};
    EXPECT_NEAR(quantum_predicted_counts(perp, EfficiencyModel(1.0), 1000.0).pairs[0].pp, 250.0, 1e-12);

    const ExpectedCountsTable blind = quantum_predicted_counts(perp, EfficiencyModel(0.0, 0.7), 1000.0);
    for (const auto& p : blind.pairs) {
        EXPECT_EQ(p.coincidences(), 0.0);
        EXPECT_EQ(p.alice_plus, 0.0);
        EXPECT_EQ(p.alice_minus, 0.0);
        EXPECT_GT(p.bob_plus, 0.0);
    }
}

TEST(QuantumPredictedCounts, Homogeneity) {
    std::mt19937_64 g(35);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int i = 0; i < 200; ++i) {
        const SettingQuadruple q = testing::random_quadruple(g);
        const double ea = u(g), eb = u(g), n = 1000.0 * u(g), s = u(g);
        const auto base = quantum_predicted_counts(q, EfficiencyModel(ea, eb), n);
        const auto more = quantum_predicted_counts(q, EfficiencyModel(ea, eb), s * n);
        const auto weaker_a = quantum_predicted_counts(q, EfficiencyModel(s * ea, eb), n);
        const auto weaker_b = quantum_predicted_counts(q, EfficiencyModel(ea, s * eb), n);
        for (int k = 0; k < 4; ++k) {
            ASSERT_NEAR(more.pairs[k].pp, s * base.pairs[k].pp, 1e-9);
            ASSERT_NEAR(more.pairs[k].alice_plus, s * base.pairs[k].alice_plus, 1e-9);
            ASSERT_NEAR(weaker_a.pairs[k].pp, s * base.pairs[k].pp, 1e-9);
            ASSERT_NEAR(weaker_a.pairs[k].alice_plus, s * base.pairs[k].alice_plus, 1e-9);
            ASSERT_NEAR(weaker_a.pairs[k].bob_plus, base.pairs[k].bob_plus, 1e-9);
            ASSERT_NEAR(weaker_b.pairs[k].pm, s * base.pairs[k].pm, 1e-9);
            ASSERT_NEAR(weaker_b.pairs[k].bob_minus, s * base.pairs[k].bob_minus, 1e-9);
        }
        ASSERT_NO_THROW(validate_counts(base, 1e-9));
    }
}

TEST(Efficiency, RangeChecked) {
    EXPECT_THROW(EfficiencyModel(1.1), ConfigError);
    EXPECT_THROW(EfficiencyModel(0.5, -0.1), ConfigError);
    EXPECT_NO_THROW(EfficiencyModel(0.0, 1.0));
}

TEST(Threshold, ClosedFormAtOptimum) {
    const double closed = 2.0 / (1.0 + kSqrt2);
    EXPECT_NEAR(ch_threshold(SettingQuadruple::chsh_optimal()), closed, 1e-12);
    EXPECT_NEAR(ch_threshold(SettingQuadruple::chsh_optimal(), ChOrientation::BobFlipped), closed, 1e-12);
    // Standard orientation at this quadruple has a negative denominator.
    EXPECT_THROW(ch_threshold(SettingQuadruple::chsh_optimal(), ChOrientation::Standard), DomainError);
}

TEST(Threshold, DegenerateQuadrupleCannotViolate) {
    std::mt19937_64 g(36);
    for (int i = 0; i < 1000; ++i) {
        const auto a = testing::random_direction(g);
        const auto b = testing::random_direction(g);
        const SettingQuadruple q{a, a, b, b};
        const double p_pp = (1.0 - dot(a, b)) / 4.0;
        if (p_pp > 1e-6) {
            const double t = ch_threshold(q, ChOrientation::Standard);
            ASSERT_NEAR(t, 1.0 / (2.0 * p_pp), 1e-9 * t);
            ASSERT_GE(t, 1.0);
        }
        ASSERT_GE(ch_threshold(q), 1.0);
    }
}

TEST(Threshold, OptimizerFindsChshOptimalSettings) {
    const ThresholdOptimum best = optimize_threshold();
    EXPECT_NEAR(best.threshold, 2.0 / (1.0 + kSqrt2), 1e-3);
    EXPECT_NEAR(std::abs(quantum_chsh_value(best.quad)), 2.0 * kSqrt2, 1e-6);
    // Up to symmetry: adjacent settings 45 degrees apart, a orthogonal to a', b orthogonal to b'.
    EXPECT_NEAR(std::abs(dot(best.quad.a, best.quad.a_prime)), 0.0, 1e-4);
    EXPECT_NEAR(std::abs(dot(best.quad.b, best.quad.b_prime)), 0.0, 1e-4);
    for (int k = 0; k < 4; ++k) {
        const double c = std::abs(dot(best.quad.alice(alice_index_of_pair(k)), best.quad.bob(bob_index_of_pair(k))));
        EXPECT_NEAR(c, std::cos(kPi / 4), 1e-4) << k;
    }
}

TEST(Threshold, FullSphereFindsNothingBetter) {
    const ThresholdOptimum best = optimize_threshold(true);
    EXPECT_GE(best.threshold, 2.0 / (1.0 + kSqrt2) - 1e-9);
    EXPECT_NEAR(best.threshold, 2.0 / (1.0 + kSqrt2), 1e-3);
}

TEST(RelevantEfficiency, Examples) {
    EXPECT_DOUBLE_EQ(relevant_efficiency(0.5), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(relevant_efficiency(1.0), 1.0);
    EXPECT_NEAR(relevant_efficiency(2.0 / kPi), 4.0 / (kPi + 2.0), 1e-15);
    EXPECT_THROW(relevant_efficiency(0.0), DomainError);
    EXPECT_THROW(relevant_efficiency(1.5), DomainError);
}

TEST(RelevantEfficiency, BelowSinglesEfficiency) {
    for (int i = 1; i < 1000; ++i) {
        const double p = i / 1000.0;
        ASSERT_LT(relevant_efficiency(p), 0.5 * (p + 1.0)) << p;
    }
}

}  // namespace
}  // namespace lhv
