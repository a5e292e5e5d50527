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

#include "lhv/vec.hpp"

#include <algorithm>

#include "lhv/errors.hpp"

namespace lhv {

UnitVector3 UnitVector3::from_components(double x, double y, double z) {
    const Vec3 v{x, y, z};
    const double n = norm(v);
    if (!std::isfinite(n) || n == 0.0) {
        throw ConfigError("direction vector must be finite and nonzero");
    }
    // Already-unit input is kept verbatim so serialized settings read back
    // bit-identically.
    if (std::abs(n - 1.0) <= 1e-14) return UnitVector3(v);
    return UnitVector3(v * (1.0 / n));
}

UnitVector3 UnitVector3::from_spherical(double theta, double phi) {
    const double s = std::sin(theta);
    return from_components(s * std::cos(phi), s * std::sin(phi), std::cos(theta));
}

UnitVector3 UnitVector3::from_planar_angle(double alpha) {
    return from_components(std::cos(alpha), std::sin(alpha), 0.0);
}

double angle_between(const UnitVector3& u, const UnitVector3& v) {
    // atan2 keeps precision near 0 and pi where acos does not.
    return std::atan2(norm(cross(u, v)), dot(u, v));
}

}  // namespace lhv
