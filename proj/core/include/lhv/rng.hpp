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

#ifndef LHV_RNG_HPP
#define LHV_RNG_HPP

#include <cstdint>

namespace lhv {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Independent randomness domains derived from one session seed. Alice's and
/// Bob's setting choices come from their own domains so neither depends on
/// the other's stream.
enum class StreamDomain : std::uint64_t {
    HiddenVariables = 0x48494444454e0001ULL,
    AliceChoice = 0x414c494345000002ULL,
    BobChoice = 0x424f420000000003ULL,
    ScanPoint = 0x5343414e00000004ULL,
};

/// Counter-addressed substream: the variates of trial t depend only on
/// (seed, domain, t), never on how trials are batched across workers.
class Substream {
public:
    constexpr Substream(std::uint64_t seed, StreamDomain domain, std::uint64_t index)
        : state_(mix64(mix64(seed ^ static_cast<std::uint64_t>(domain)) + mix64(index + 0x9e3779b97f4a7c15ULL))) {}

    constexpr std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    constexpr bool bit() { return (next_u64() >> 63) != 0; }

private:
    std::uint64_t state_;
};

/// Derives a child seed, e.g. one per scan angle.
constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamDomain domain, std::uint64_t index) {
    return Substream(seed, domain, index).next_u64();
}

}  // namespace lhv

#endif
