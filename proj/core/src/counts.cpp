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

#include "lhv/counts.hpp"

namespace lhv {

SettingQuadruple SettingQuadruple::planar(double a, double a_prime, double b, double b_prime) {
    return {UnitVector3::from_planar_angle(a), UnitVector3::from_planar_angle(a_prime),
            UnitVector3::from_planar_angle(b), UnitVector3::from_planar_angle(b_prime)};
}

SettingQuadruple SettingQuadruple::chsh_optimal() {
    return planar(0.0, deg_to_rad(90.0), deg_to_rad(45.0), deg_to_rad(-45.0));
}

}  // namespace lhv
