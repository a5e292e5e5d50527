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

#ifndef LHV_TESTS_TEST_UTIL_HPP
#define LHV_TESTS_TEST_UTIL_HPP

#include <cmath>
#include <random>

#include "lhv/counts.hpp"
#include "lhv/vec.hpp"

namespace lhv::testing {

/// Uniform direction from Gaussian components (independent of the library's
/// Archimedes sampler).
inline UnitVector3 random_direction(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    return UnitVector3::from_components(n(g), n(g), n(g));
}

inline double random_angle(std::mt19937_64& g) { return std::uniform_real_distribution<double>(0.0, kTwoPi)(g); }

inline SettingQuadruple random_quadruple(std::mt19937_64& g) {
    return {random_direction(g), random_direction(g), random_direction(g), random_direction(g)};
}

inline SettingQuadruple random_planar_quadruple(std::mt19937_64& g) {
    return SettingQuadruple::planar(random_angle(g), random_angle(g), random_angle(g), random_angle(g));
}

inline double binomial_sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace lhv::testing

#endif
