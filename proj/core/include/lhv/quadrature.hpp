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

#ifndef LHV_QUADRATURE_HPP
#define LHV_QUADRATURE_HPP

#include <cstdint>
#include <vector>

#include "lhv/counts.hpp"
#include "lhv/model.hpp"

namespace lhv {

inline constexpr int kMinGridResolution = 64;
inline constexpr int kDefaultGridResolution = 512;

/// Nodes and weights of a 1-D rule on [lo, hi]: `cells` uniform cells, each
/// further split at the given breakpoints, with 3-point Gauss-Legendre on
/// every piece. Exact to high order for integrands that are smooth between
/// breakpoints.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

QuadratureRule piecewise_gauss_rule(double lo, double hi, int cells, std::vector<double> breakpoints);

/// Orthonormal frame adapted to a pair of directions: e1 = a, e2 in span(a, b)
/// with b . e2 >= 0, normal = e1 x e2. In this frame
///   lambda = sin(psi) (cos(phi) e1 + sin(phi) e2) + cos(psi) normal
/// and lambda . a, lambda . b change sign only on fixed phi lines.
struct PairFrame {
    Vec3 e1;
    Vec3 e2;
    Vec3 normal;
    double theta;  // angle between a and b

    PairFrame(const UnitVector3& a, const UnitVector3& b);

    /// phi values where lambda . a or lambda . b vanishes, in [0, 2 pi).
    std::vector<double> sign_change_azimuths() const;
};

/// Integrates f(lambda) over S^2 against the uniform probability measure
/// dOmega / (4 pi). `f` may jump or kink where lambda . a = 0 or
/// lambda . b = 0. Throws DomainError when resolution < kMinGridResolution.
template <class F>
auto integrate_sphere(const UnitVector3& a, const UnitVector3& b, int resolution, F&& f) -> decltype(f(a));

/// Same over the unit circle of the xy plane against dphi / (2 pi).
template <class F>
auto integrate_circle(const UnitVector3& a, const UnitVector3& b, int resolution, F&& f) -> decltype(f(a));

/// Exact (to quadrature accuracy) joint outcome table for one setting pair.
JointDistribution quadrature_joint(ModelVariant variant, const MeasurementSetting& a, const MeasurementSetting& b,
                                   int resolution = kDefaultGridResolution);

/// Correlation over coincidences, E = sum_ij ij P_ij / sum_ij P_ij.
double quadrature_correlation(ModelVariant variant, const MeasurementSetting& a, const MeasurementSetting& b,
                              int resolution = kDefaultGridResolution);

/// Integral over S^2 of conditional_lambda_density(., a); equals 1.
double quadrature_density_normalization(const MeasurementSetting& a, int resolution = kDefaultGridResolution);

/// Expected counts of an n_trials-per-pair session; free of sampling noise.
ExpectedPairCounts expected_pair_counts(const JointDistribution& joint, double n_trials);
ExpectedCountsTable expected_counts(ModelVariant variant, const SettingQuadruple& quad, double n_trials,
                                    int resolution = kDefaultGridResolution);

namespace detail {
void check_resolution(int resolution);
}

template <class F>
auto integrate_sphere(const UnitVector3& a, const UnitVector3& b, int resolution, F&& f) -> decltype(f(a)) {
    detail::check_resolution(resolution);
    const PairFrame frame(a, b);
    const QuadratureRule polar = piecewise_gauss_rule(0.0, kPi, resolution, {});
    const QuadratureRule azimuth = piecewise_gauss_rule(0.0, kTwoPi, resolution, frame.sign_change_azimuths());

    std::vector<double> cos_phi(azimuth.nodes.size());
    std::vector<double> sin_phi(azimuth.nodes.size());
    for (std::size_t j = 0; j < azimuth.nodes.size(); ++j) {
        cos_phi[j] = std::cos(azimuth.nodes[j]);
        sin_phi[j] = std::sin(azimuth.nodes[j]);
    }

    decltype(f(a)) total{};
    for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
        const double s = std::sin(polar.nodes[i]);
        const double c = std::cos(polar.nodes[i]);
        const double row_weight = polar.weights[i] * s / (4.0 * kPi);
        decltype(f(a)) row{};
        for (std::size_t j = 0; j < azimuth.nodes.size(); ++j) {
            const Vec3 v = (frame.e1 * cos_phi[j] + frame.e2 * sin_phi[j]) * s + frame.normal * c;
            row += f(UnitVector3::from_vec(v)) * azimuth.weights[j];
        }
        total += row * row_weight;
    }
    return total;
}

template <class F>
auto integrate_circle(const UnitVector3& a, const UnitVector3& b, int resolution, F&& f) -> decltype(f(a)) {
    detail::check_resolution(resolution);
    std::vector<double> breaks;
    for (const UnitVector3* s : {&a, &b}) {
        const double alpha = std::atan2(s->y(), s->x());
        for (double offset : {0.5 * kPi, 1.5 * kPi}) {
            breaks.push_back(std::fmod(alpha + offset + 2.0 * kTwoPi, kTwoPi));
        }
    }
    const QuadratureRule rule = piecewise_gauss_rule(0.0, kTwoPi, resolution, std::move(breaks));
    decltype(f(a)) total{};
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        total += f(UnitVector3::from_planar_angle(rule.nodes[j])) * (rule.weights[j] / kTwoPi);
    }
    return total;
}

}  // namespace lhv

#endif
