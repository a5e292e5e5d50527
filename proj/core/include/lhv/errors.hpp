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

#ifndef LHV_ERRORS_HPP
#define LHV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lhv {

/// Invalid experiment or session configuration (bad settings, out-of-plane
/// vectors for the planar variant, nonpositive trial counts, ...).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A quantity that is mathematically undefined for the given input, e.g. a
/// correlation over zero coincidences or a CH threshold with a nonpositive
/// denominator.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Malformed report or config document.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lhv

#endif
