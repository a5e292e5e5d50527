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

#include "lhv/inequalities.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "lhv/errors.hpp"

namespace lhv {

EfficiencyModel::EfficiencyModel(double eta_alice, double eta_bob) : eta_alice_(eta_alice), eta_bob_(eta_bob) {
    auto ok = [](double e) { return e >= 0.0 && e <= 1.0; };
    if (!ok(eta_alice) || !ok(eta_bob)) throw ConfigError("detector efficiencies must lie in [0, 1]");
}

std::string_view to_string(ChOrientation o) {
    switch (o) {
        case ChOrientation::Auto:
            return "auto";
        case ChOrientation::Standard:
            return "standard";
        case ChOrientation::BobFlipped:
            return "bob-flipped";
    }
    return "?";
}

template <class T>
double renormalized_correlation(const BasicPairCounts<T>& c) {
    const double total = static_cast<double>(c.coincidences());
    if (!(total > 0.0)) throw DomainError("no coincidences: renormalized correlation undefined");
    const double same = static_cast<double>(c.pp) + static_cast<double>(c.mm);
    const double diff = static_cast<double>(c.pm) + static_cast<double>(c.mp);
    return (same - diff) / total;
}

template <class T>
double correlation_sigma(const BasicPairCounts<T>& c) {
    const double total = static_cast<double>(c.coincidences());
    if (!(total > 0.0)) throw DomainError("no coincidences: correlation uncertainty undefined");
    return 1.0 / std::sqrt(total);
}

ChshResult chsh_value(double e_ab, double e_ab_prime, double e_a_prime_b, double e_a_prime_b_prime) {
    ChshResult r;
    r.correlations = {e_ab, e_ab_prime, e_a_prime_b, e_a_prime_b_prime};
    r.s = e_ab + e_ab_prime + e_a_prime_b - e_a_prime_b_prime;
    r.violated = std::abs(r.s) > 2.0;
    return r;
}

std::array<double, 4> chsh_images(const std::array<double, 4>& e) {
    const double sum = e[0] + e[1] + e[2] + e[3];
    return {sum - 2.0 * e[0], sum - 2.0 * e[1], sum - 2.0 * e[2], sum - 2.0 * e[3]};
}

bool chsh_violated_any_image(const std::array<double, 4>& e) {
    for (double s : chsh_images(e)) {
        if (std::abs(s) > 2.0) return true;
    }
    return false;
}

template <class T>
ChshResult chsh_from_counts(const BasicCountsTable<T>& counts) {
    std::array<double, 4> e{};
    double var = 0.0;
    for (int k = 0; k < 4; ++k) {
        e[k] = renormalized_correlation(counts.pairs[k]);
        var += 1.0 / static_cast<double>(counts.pairs[k].coincidences());
    }
    ChshResult r = chsh_value(e[0], e[1], e[2], e[3]);
    r.sigma = std::sqrt(var);
    return r;
}

bool binary_identity_check() {
    for (int bits = 0; bits < 16; ++bits) {
        const int x = bits & 1, xp = (bits >> 1) & 1, y = (bits >> 2) & 1, yp = (bits >> 3) & 1;
        const int a = 2 * x - 1, ap = 2 * xp - 1, b = 2 * y - 1, bp = 2 * yp - 1;
        const int count_form = x * y + x * yp + xp * y - xp * yp - (x + y);
        const int spin_form = a * b + a * bp + ap * b - ap * bp - 2;
        if (count_form > 0 || spin_form > 0) return false;
        if (spin_form != 4 * count_form) return false;
    }
    return true;
}

double quantum_chsh_value(const SettingQuadruple& q) {
    return -dot(q.a, q.b) - dot(q.a, q.b_prime) - dot(q.a_prime, q.b) + dot(q.a_prime, q.b_prime);
}

ChOrientation resolve_orientation(const SettingQuadruple& quad, ChOrientation requested) {
    if (requested != ChOrientation::Auto) return requested;
    return quantum_chsh_value(quad) >= 0.0 ? ChOrientation::Standard : ChOrientation::BobFlipped;
}

template <class T>
ChResult ch_evaluate(const BasicCountsTable<T>& counts, const SettingQuadruple& quad, ChOrientation orientation) {
    ChResult r;
    r.orientation = resolve_orientation(quad, orientation);
    const bool flipped = r.orientation == ChOrientation::BobFlipped;

    auto coincident = [&](const BasicPairCounts<T>& p) { return flipped ? p.pm : p.pp; };
    auto bob_single = [&](const BasicPairCounts<T>& p) { return flipped ? p.bob_minus : p.bob_plus; };
    constexpr std::array<double, 4> sign = {1.0, 1.0, 1.0, -1.0};

    const auto& p0 = counts.pairs[0];
    bool equal_trials = true;
    for (const auto& p : counts.pairs) equal_trials = equal_trials && p.trials == p0.trials;

    if (equal_trials) {
        for (int k = 0; k < 4; ++k) r.lhs += sign[k] * static_cast<double>(coincident(counts.pairs[k]));
        r.rhs = static_cast<double>(p0.alice_plus) + static_cast<double>(bob_single(p0));
    } else {
        const double n_ref = static_cast<double>(counts.total_trials()) / 4.0;
        auto rate = [](auto x, auto n) {
            return n > 0 ? static_cast<double>(x) / static_cast<double>(n) : 0.0;
        };
        for (int k = 0; k < 4; ++k) {
            r.lhs += sign[k] * n_ref * rate(coincident(counts.pairs[k]), counts.pairs[k].trials);
        }
        r.rhs = n_ref * (rate(p0.alice_plus, p0.trials) + rate(bob_single(p0), p0.trials));
    }
    r.violated = r.lhs > r.rhs;

    if constexpr (std::is_integral_v<T>) {
        // Per-trial contributions are independent across trials. On pair
        // (a, b) the contribution [A+ B+] - [A+] - [B+] squares to
        // [A+ or B+]; on the other pairs it is +-[A+ B+].
        const double n_ref = static_cast<double>(counts.total_trials()) / 4.0;
        double var = 0.0;
        for (int k = 0; k < 4; ++k) {
            const auto& p = counts.pairs[k];
            if (p.trials == 0) continue;
            const double n = static_cast<double>(p.trials);
            const double c = static_cast<double>(coincident(p)) / n;
            double mean = c, second = c;
            if (k == 0) {
                const double either = (static_cast<double>(p.alice_plus) + static_cast<double>(bob_single(p))) / n - c;
                mean = c - (static_cast<double>(p.alice_plus) + static_cast<double>(bob_single(p))) / n;
                second = either;
            }
            var += n_ref * n_ref / n * (second - mean * mean);
        }
        r.sigma = std::sqrt(std::max(0.0, var));
    }
    return r;
}

ExpectedCountsTable quantum_predicted_counts(const SettingQuadruple& quad, const EfficiencyModel& eff,
                                             double n_trials) {
    const double ea = eff.eta_alice(), eb = eff.eta_bob();
    ExpectedCountsTable t;
    for (int k = 0; k < 4; ++k) {
        const double ab = dot(quad.alice(alice_index_of_pair(k)), quad.bob(bob_index_of_pair(k)));
        const double same = (1.0 - ab) / 4.0;
        const double diff = (1.0 + ab) / 4.0;
        auto& c = t.pairs[k];
        c.trials = n_trials;
        c.pp = same * ea * eb * n_trials;
        c.mm = same * ea * eb * n_trials;
        c.pm = diff * ea * eb * n_trials;
        c.mp = diff * ea * eb * n_trials;
        c.alice_plus = 0.5 * ea * n_trials;
        c.alice_minus = 0.5 * ea * n_trials;
        c.bob_plus = 0.5 * eb * n_trials;
        c.bob_minus = 0.5 * eb * n_trials;
        c.neither = (1.0 - ea) * (1.0 - eb) * n_trials;
    }
    return t;
}

namespace {

std::optional<double> threshold_or_none(const SettingQuadruple& quad, ChOrientation orientation) {
    const bool flipped = resolve_orientation(quad, orientation) == ChOrientation::BobFlipped;
    auto p_coincident = [&](const MeasurementSetting& x, const MeasurementSetting& y) {
        // P++ = (1 - x.y) / 4, P+- = (1 + x.y) / 4 for the singlet.
        return (1.0 + (flipped ? 1.0 : -1.0) * dot(x, y)) / 4.0;
    };
    const double denom = p_coincident(quad.a, quad.b) + p_coincident(quad.a, quad.b_prime) +
                         p_coincident(quad.a_prime, quad.b) - p_coincident(quad.a_prime, quad.b_prime);
    if (!(denom > 0.0)) return std::nullopt;
    constexpr double p_alice_plus = 0.5, p_bob_single = 0.5;
    return (p_alice_plus + p_bob_single) / denom;
}

/// Compass search: shrink the step whenever no coordinate move improves.
std::vector<double> pattern_search(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> x, double step, double min_step) {
    double best = f(x);
    while (step > min_step) {
        bool improved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (double dir : {1.0, -1.0}) {
                std::vector<double> trial = x;
                trial[i] += dir * step;
                const double v = f(trial);
                if (v < best) {
                    best = v;
                    x = std::move(trial);
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return x;
}

constexpr double kUndefined = std::numeric_limits<double>::infinity();

SettingQuadruple planar_quad(const std::vector<double>& x) { return SettingQuadruple::planar(0.0, x[0], x[1], x[2]); }

SettingQuadruple sphere_quad(const std::vector<double>& x) {
    return {UnitVector3{}, UnitVector3::from_spherical(x[0], x[1]), UnitVector3::from_spherical(x[2], x[3]),
            UnitVector3::from_spherical(x[4], x[5])};
}

}  // namespace

double ch_threshold(const SettingQuadruple& quad, ChOrientation orientation) {
    const auto t = threshold_or_none(quad, orientation);
    if (!t) {
        throw DomainError("CH threshold undefined: nonpositive coincidence denominator in " +
                          std::string(to_string(resolve_orientation(quad, orientation))) + " orientation");
    }
    return *t;
}

ThresholdOptimum optimize_threshold(bool full_sphere) {
    if (!full_sphere) {
        auto objective = [](const std::vector<double>& x) {
            return threshold_or_none(planar_quad(x), ChOrientation::Auto).value_or(kUndefined);
        };
        constexpr int kSteps = 72;  // 5 degrees
        const double h = kTwoPi / kSteps;
        std::vector<double> best_x(3, 0.0);
        double best = kUndefined;
        std::vector<double> x(3);
        for (int i = 0; i < kSteps; ++i) {
            for (int j = 0; j < kSteps; ++j) {
                for (int k = 0; k < kSteps; ++k) {
                    x = {h * i, h * j, h * k};
                    const double v = objective(x);
                    if (v < best) {
                        best = v;
                        best_x = x;
                    }
                }
            }
        }
        best_x = pattern_search(objective, best_x, 0.5 * h, 1e-10);
        return {objective(best_x), planar_quad(best_x)};
    }

    auto objective = [](const std::vector<double>& x) {
        return threshold_or_none(sphere_quad(x), ChOrientation::Auto).value_or(kUndefined);
    };
    std::mt19937_64 engine(20260101);
    std::uniform_real_distribution<double> polar(0.0, kPi);
    std::uniform_real_distribution<double> azimuth(0.0, kTwoPi);
    ThresholdOptimum best{kUndefined, SettingQuadruple::chsh_optimal()};
    for (int start = 0; start < 64; ++start) {
        std::vector<double> x = {polar(engine), azimuth(engine), polar(engine),
                                 azimuth(engine), polar(engine), azimuth(engine)};
        x = pattern_search(objective, x, 0.25, 1e-10);
        const double v = objective(x);
        if (v < best.threshold) best = {v, sphere_quad(x)};
    }
    return best;
}

double relevant_efficiency(double p) {
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("mean detection probability must lie in (0, 1]");
    return p / (0.5 * (p + 1.0));
}

template double renormalized_correlation(const BasicPairCounts<std::uint64_t>&);
template double renormalized_correlation(const BasicPairCounts<double>&);
template double correlation_sigma(const BasicPairCounts<std::uint64_t>&);
template double correlation_sigma(const BasicPairCounts<double>&);
template ChshResult chsh_from_counts(const BasicCountsTable<std::uint64_t>&);
template ChshResult chsh_from_counts(const BasicCountsTable<double>&);
template ChResult ch_evaluate(const BasicCountsTable<std::uint64_t>&, const SettingQuadruple&, ChOrientation);
template ChResult ch_evaluate(const BasicCountsTable<double>&, const SettingQuadruple&, ChOrientation);

}  // namespace lhv
