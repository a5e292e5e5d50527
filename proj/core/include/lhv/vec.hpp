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

#ifndef LHV_VEC_HPP
#define LHV_VEC_HPP

#include <array>
#include <cmath>
#include <numbers>

namespace lhv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const Vec3&) const = default;
};

constexpr double dot(const Vec3& u, const Vec3& v) { return u.x * v.x + u.y * v.y + u.z * v.z; }

constexpr Vec3 cross(const Vec3& u, const Vec3& v) {
    return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Direction on S^2. Holds |v| = 1 to within 1e-12; every factory normalizes.
class UnitVector3 {
public:
    static constexpr double kNormTolerance = 1e-12;

    /// +z.
    constexpr UnitVector3() = default;

    /// Normalizes (x, y, z). Throws ConfigError for a zero or non-finite vector.
    static UnitVector3 from_components(double x, double y, double z);
    static UnitVector3 from_vec(const Vec3& v) { return from_components(v.x, v.y, v.z); }

    /// Polar angle theta from +z, azimuth phi from +x.
    static UnitVector3 from_spherical(double theta, double phi);

    /// In-plane direction (cos alpha, sin alpha, 0).
    static UnitVector3 from_planar_angle(double alpha);

    constexpr double x() const { return v_.x; }
    constexpr double y() const { return v_.y; }
    constexpr double z() const { return v_.z; }
    constexpr const Vec3& vec() const { return v_; }
    constexpr operator const Vec3&() const { return v_; }

    constexpr UnitVector3 operator-() const { return UnitVector3(-v_); }
    constexpr bool operator==(const UnitVector3&) const = default;

    bool is_planar() const { return std::abs(v_.z) <= kNormTolerance; }

private:
    constexpr explicit UnitVector3(const Vec3& v) : v_(v) {}
    Vec3 v_{0.0, 0.0, 1.0};
};

/// Measurement direction of an analyzer.
using MeasurementSetting = UnitVector3;

/// Angle between two directions, in [0, pi].
double angle_between(const UnitVector3& u, const UnitVector3& v);

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

}  // namespace lhv

#endif
