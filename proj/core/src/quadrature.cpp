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

#include "lhv/quadrature.hpp"

#include <algorithm>
#include <string>

#include "lhv/errors.hpp"

namespace lhv {

namespace detail {

void check_resolution(int resolution) {
    if (resolution < kMinGridResolution) {
        throw DomainError("quadrature resolution " + std::to_string(resolution) + " is below the minimum of " +
                          std::to_string(kMinGridResolution) + " cells per dimension");
    }
}

}  // namespace detail

namespace {

// 3-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 3> kGaussNodes = {-0.7745966692414833770359, 0.0, 0.7745966692414833770359};
constexpr std::array<double, 3> kGaussWeights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

struct JointSum {
    std::array<double, 9> p{};

    JointSum& operator+=(const JointSum& o) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += o.p[i];
        return *this;
    }
    JointSum operator*(double w) const {
        JointSum r = *this;
        for (double& x : r.p) x *= w;
        return r;
    }
};

JointSum flatten(const JointDistribution& j) {
    JointSum s;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) s.p[3 * a + b] = j[a][b];
    }
    return s;
}

JointDistribution unflatten(const JointSum& s) {
    JointDistribution j{};
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) j[a][b] = s.p[3 * a + b];
    }
    return j;
}

}  // namespace

QuadratureRule piecewise_gauss_rule(double lo, double hi, int cells, std::vector<double> breakpoints) {
    std::vector<double> edges;
    edges.reserve(static_cast<std::size_t>(cells) + 1 + breakpoints.size());
    const double h = (hi - lo) / cells;
    for (int i = 0; i <= cells; ++i) edges.push_back(lo + h * i);
    edges.back() = hi;
    for (double bp : breakpoints) {
        if (bp > lo && bp < hi) edges.push_back(bp);
    }
    std::sort(edges.begin(), edges.end());

    QuadratureRule rule;
    rule.nodes.reserve(3 * edges.size());
    rule.weights.reserve(3 * edges.size());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double half = 0.5 * (edges[i + 1] - edges[i]);
        if (half <= 0.0) continue;
        const double mid = 0.5 * (edges[i + 1] + edges[i]);
        for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
            rule.nodes.push_back(mid + half * kGaussNodes[g]);
            rule.weights.push_back(half * kGaussWeights[g]);
        }
    }
    return rule;
}

PairFrame::PairFrame(const UnitVector3& a, const UnitVector3& b) : e1(a.vec()) {
    Vec3 n = cross(a, b);
    double len = norm(n);
    if (len < 1e-12) {
        // a and b (anti)parallel: any normal of a will do.
        const Vec3 trial = std::abs(a.x()) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
        n = cross(a, trial);
        len = norm(n);
    }
    normal = n * (1.0 / len);
    e2 = cross(normal, e1);
    theta = std::atan2(dot(b, e2), dot(b, e1));
}

std::vector<double> PairFrame::sign_change_azimuths() const {
    std::vector<double> out;
    for (double base : {0.0, theta}) {
        for (double offset : {0.5 * kPi, 1.5 * kPi}) {
            out.push_back(std::fmod(base + offset + kTwoPi, kTwoPi));
        }
    }
    return out;
}

JointDistribution quadrature_joint(ModelVariant variant, const MeasurementSetting& a, const MeasurementSetting& b,
                                   int resolution) {
    auto integrand = [&](const UnitVector3& lambda) { return flatten(joint_distribution(variant, lambda, a, b)); };
    if (variant == ModelVariant::PlanarSteiner) {
        validate_setting(variant, a);
        validate_setting(variant, b);
        return unflatten(integrate_circle(a, b, resolution, integrand));
    }
    return unflatten(integrate_sphere(a, b, resolution, integrand));
}

double quadrature_correlation(ModelVariant variant, const MeasurementSetting& a, const MeasurementSetting& b,
                              int resolution) {
    const JointDistribution p = quadrature_joint(variant, a, b, resolution);
    constexpr std::size_t plus = 1, minus = 2;
    const double same = p[plus][plus] + p[minus][minus];
    const double diff = p[plus][minus] + p[minus][plus];
    if (same + diff <= 0.0) throw DomainError("no coincidences: correlation undefined");
    return (same - diff) / (same + diff);
}

double quadrature_density_normalization(const MeasurementSetting& a, int resolution) {
    // integrate_sphere averages over S^2; the density is per steradian.
    return 4.0 * kPi *
           integrate_sphere(a, a, resolution, [&](const UnitVector3& l) { return conditional_lambda_density(l, a); });
}

ExpectedPairCounts expected_pair_counts(const JointDistribution& joint, double n_trials) {
    constexpr std::size_t none = 0, plus = 1, minus = 2;
    ExpectedPairCounts c;
    c.trials = n_trials;
    c.pp = n_trials * joint[plus][plus];
    c.pm = n_trials * joint[plus][minus];
    c.mp = n_trials * joint[minus][plus];
    c.mm = n_trials * joint[minus][minus];
    c.alice_plus = n_trials * (joint[plus][none] + joint[plus][plus] + joint[plus][minus]);
    c.alice_minus = n_trials * (joint[minus][none] + joint[minus][plus] + joint[minus][minus]);
    c.bob_plus = n_trials * (joint[none][plus] + joint[plus][plus] + joint[minus][plus]);
    c.bob_minus = n_trials * (joint[none][minus] + joint[plus][minus] + joint[minus][minus]);
    c.neither = n_trials * joint[none][none];
    return c;
}

ExpectedCountsTable expected_counts(ModelVariant variant, const SettingQuadruple& quad, double n_trials,
                                    int resolution) {
    ExpectedCountsTable table;
    for (int k = 0; k < 4; ++k) {
        const auto& a = quad.alice(alice_index_of_pair(k));
        const auto& b = quad.bob(bob_index_of_pair(k));
        table.pairs[k] = expected_pair_counts(quadrature_joint(variant, a, b, resolution), n_trials);
    }
    return table;
}

}  // namespace lhv
