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

#ifndef LHV_COUNTS_HPP
#define LHV_COUNTS_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <type_traits>

#include "lhv/errors.hpp"
#include "lhv/model.hpp"
#include "lhv/vec.hpp"

namespace lhv {

/// Analyzer directions a, a' (Alice) and b, b' (Bob).
///
/// Setting pairs are indexed k = 2 x + y with x the Alice index (0 = a,
/// 1 = a') and y the Bob index (0 = b, 1 = b'): ab, ab', a'b, a'b'.
struct SettingQuadruple {
    MeasurementSetting a;
    MeasurementSetting a_prime;
    MeasurementSetting b;
    MeasurementSetting b_prime;

    const MeasurementSetting& alice(int x) const { return x == 0 ? a : a_prime; }
    const MeasurementSetting& bob(int y) const { return y == 0 ? b : b_prime; }
    const MeasurementSetting& setting(Party party, int index) const {
        return party == Party::Alice ? alice(index) : bob(index);
    }

    bool is_planar() const { return a.is_planar() && a_prime.is_planar() && b.is_planar() && b_prime.is_planar(); }

    /// In-plane settings from angles in radians.
    static SettingQuadruple planar(double a, double a_prime, double b, double b_prime);

    /// a = 0, a' = 90, b = 45, b' = -45 degrees.
    static SettingQuadruple chsh_optimal();

    bool operator==(const SettingQuadruple&) const = default;
};

inline constexpr std::array<std::string_view, 4> kPairLabels = {"ab", "ab'", "a'b", "a'b'"};

constexpr int alice_index_of_pair(int k) { return k >> 1; }
constexpr int bob_index_of_pair(int k) { return k & 1; }
constexpr int pair_index(int x, int y) { return 2 * x + y; }

/// Tallies for one setting pair. Singles (alice_*/bob_*) count every trial
/// where that side fired, coincident or not; `neither` counts trials where
/// neither fired.
template <class T>
struct BasicPairCounts {
    T trials{};
    T pp{};
    T pm{};
    T mp{};
    T mm{};
    T alice_plus{};
    T alice_minus{};
    T bob_plus{};
    T bob_minus{};
    T neither{};

    T coincidences() const { return pp + pm + mp + mm; }
    T alice_detections() const { return alice_plus + alice_minus; }
    T bob_detections() const { return bob_plus + bob_minus; }
    T alice_only() const { return alice_detections() - coincidences(); }
    T bob_only() const { return bob_detections() - coincidences(); }

    void record(Outcome alice, Outcome bob) {
        ++trials;
        if (alice == Outcome::Plus) ++alice_plus;
        if (alice == Outcome::Minus) ++alice_minus;
        if (bob == Outcome::Plus) ++bob_plus;
        if (bob == Outcome::Minus) ++bob_minus;
        if (alice == Outcome::NoDetection || bob == Outcome::NoDetection) {
            if (alice == bob) ++neither;
            return;
        }
        if (alice == Outcome::Plus) {
            ++(bob == Outcome::Plus ? pp : pm);
        } else {
            ++(bob == Outcome::Plus ? mp : mm);
        }
    }

    BasicPairCounts& operator+=(const BasicPairCounts& o) {
        trials += o.trials;
        pp += o.pp;
        pm += o.pm;
        mp += o.mp;
        mm += o.mm;
        alice_plus += o.alice_plus;
        alice_minus += o.alice_minus;
        bob_plus += o.bob_plus;
        bob_minus += o.bob_minus;
        neither += o.neither;
        return *this;
    }

    bool operator==(const BasicPairCounts&) const = default;
};

template <class T>
struct BasicCountsTable {
    std::array<BasicPairCounts<T>, 4> pairs{};

    BasicPairCounts<T>& pair(int x, int y) { return pairs[pair_index(x, y)]; }
    const BasicPairCounts<T>& pair(int x, int y) const { return pairs[pair_index(x, y)]; }

    T total_trials() const {
        T n{};
        for (const auto& p : pairs) n += p.trials;
        return n;
    }

    /// N_{+.}(x): Alice's + singles, taken from pair (x, b).
    T plus_dot(int x) const { return pair(x, 0).alice_plus; }
    /// N_{.+}(y): Bob's + singles, taken from pair (a, y).
    T dot_plus(int y) const { return pair(0, y).bob_plus; }

    BasicCountsTable& operator+=(const BasicCountsTable& o) {
        for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k] += o.pairs[k];
        return *this;
    }

    bool operator==(const BasicCountsTable&) const = default;
};

using PairCounts = BasicPairCounts<std::uint64_t>;
using CountsTable = BasicCountsTable<std::uint64_t>;

/// Real-valued expected counts, e.g. N times an exact probability table.
using ExpectedPairCounts = BasicPairCounts<double>;
using ExpectedCountsTable = BasicCountsTable<double>;

/// Checks coincidences <= singles <= trials and that coincidences, one-sided
/// detections and `neither` add up to `trials`. Throws FormatError.
template <class T>
void validate_counts(const BasicPairCounts<T>& c, double tolerance = 0.0) {
    auto le = [&](T x, T y) { return static_cast<double>(x) <= static_cast<double>(y) + tolerance; };
    auto neg = [&](T x) {
        if constexpr (std::is_floating_point_v<T>) return x < -tolerance || !std::isfinite(x);
        return false;
    };
    if (neg(c.trials) || neg(c.pp) || neg(c.pm) || neg(c.mp) || neg(c.mm) || neg(c.alice_plus) ||
        neg(c.alice_minus) || neg(c.bob_plus) || neg(c.bob_minus) || neg(c.neither)) {
        throw FormatError("counts must be nonnegative");
    }
    const bool ok = le(c.pp + c.pm, c.alice_plus) && le(c.mp + c.mm, c.alice_minus) && le(c.pp + c.mp, c.bob_plus) &&
                    le(c.pm + c.mm, c.bob_minus) && le(c.alice_detections(), c.trials) &&
                    le(c.bob_detections(), c.trials) &&
                    le(c.alice_detections() + c.bob_detections() - c.coincidences() + c.neither, c.trials) &&
                    le(c.trials, c.alice_detections() + c.bob_detections() - c.coincidences() + c.neither);
    if (!ok) throw FormatError("inconsistent pair counts");
}

template <class T>
void validate_counts(const BasicCountsTable<T>& table, double tolerance = 0.0) {
    for (const auto& p : table.pairs) validate_counts(p, tolerance);
}

}  // namespace lhv

#endif
