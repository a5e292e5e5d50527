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

#ifndef LHV_INEQUALITIES_HPP
#define LHV_INEQUALITIES_HPP

#include <array>
#include <string_view>

#include "lhv/counts.hpp"

namespace lhv {

/// Detector efficiencies of the two sides, each in [0, 1].
class EfficiencyModel {
public:
    EfficiencyModel(double eta_alice, double eta_bob);
    explicit EfficiencyModel(double eta) : EfficiencyModel(eta, eta) {}

    double eta_alice() const { return eta_alice_; }
    double eta_bob() const { return eta_bob_; }

private:
    double eta_alice_;
    double eta_bob_;
};

struct ChshResult {
    std::array<double, 4> correlations{};  // E(ab), E(ab'), E(a'b), E(a'b')
    double s = 0.0;
    double sigma = 0.0;  // 0 when the E values carry no uncertainty
    bool violated = false;

    bool operator==(const ChshResult&) const = default;
};

/// Which relabeling of the CH inequality to test.
///
/// Standard is N++(ab) + N++(ab') + N++(a'b) - N++(a'b') <= N+.(a) + N.+(b).
/// BobFlipped relabels Bob's outcomes (+ <-> -), replacing N++ by N+- and
/// N.+ by N.-. Auto picks Standard when the singlet CHSH value
/// -a.b - a.b' - a'.b + a'.b' of the quadruple is >= 0 and BobFlipped
/// otherwise, i.e. the orientation in which quantum counts can violate.
enum class ChOrientation : std::uint8_t { Auto = 0, Standard = 1, BobFlipped = 2 };

std::string_view to_string(ChOrientation o);

struct ChResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double sigma = 0.0;  // standard error of lhs - rhs; 0 for expected counts
    bool violated = false;
    ChOrientation orientation = ChOrientation::Standard;

    double margin() const { return lhs - rhs; }
    bool operator==(const ChResult&) const = default;
};

/// (N++ + N-- - N+- - N-+) / (N++ + N-- + N+- + N-+). Throws DomainError
/// when there are no coincidences.
template <class T>
double renormalized_correlation(const BasicPairCounts<T>& counts);

/// 1 / sqrt(coincidences).
template <class T>
double correlation_sigma(const BasicPairCounts<T>& counts);

/// S = E(ab) + E(ab') + E(a'b) - E(a'b'); violated iff |S| > 2.
ChshResult chsh_value(double e_ab, double e_ab_prime, double e_a_prime_b, double e_a_prime_b_prime);

/// The four CHSH combinations of E(ab), E(ab'), E(a'b), E(a'b'); image k
/// carries the minus sign on term k, so image 3 is chsh_value's S.
/// Swapping a with a' or b with b' permutes the images.
std::array<double, 4> chsh_images(const std::array<double, 4>& e);

/// True iff some image exceeds 2 in magnitude. Unlike ChshResult::violated
/// this does not depend on which settings carry the prime.
bool chsh_violated_any_image(const std::array<double, 4>& e);

/// CHSH from renormalized correlations of all four pairs, with
/// sigma = sqrt(sum_k 1 / coincidences_k).
template <class T>
ChshResult chsh_from_counts(const BasicCountsTable<T>& counts);

/// Exhaustive check that x y + x y' + x' y - x' y' - (x + y) <= 0 on {0,1}^4
/// and that it matches a b + a b' + a' b - a' b' <= 2 on {-1,1}^4 under
/// x = (1 + a) / 2, y = (1 + b) / 2.
bool binary_identity_check();

/// -a.b - a.b' - a'.b + a'.b', the CHSH value of the singlet correlation.
double quantum_chsh_value(const SettingQuadruple& quad);

ChOrientation resolve_orientation(const SettingQuadruple& quad, ChOrientation requested);

/// CH inequality on counts. Pair terms are normalized to a common number of
/// trials per pair; with equal trials per pair these are the raw counts.
template <class T>
ChResult ch_evaluate(const BasicCountsTable<T>& counts, const SettingQuadruple& quad,
                     ChOrientation orientation = ChOrientation::Auto);

/// Singlet predictions N+. = eta_A N / 2, N.+ = eta_B N / 2,
/// N_ij(a, b) = P_ij eta_A eta_B N with P++ = P-- = (1 - a.b) / 4.
ExpectedCountsTable quantum_predicted_counts(const SettingQuadruple& quad, const EfficiencyModel& eff,
                                             double n_trials);

/// Efficiency above which singlet counts violate CH at this quadruple:
/// (P+. + P.+) / (P++(ab) + P++(ab') + P++(a'b) - P++(a'b')), in the chosen
/// orientation. Throws DomainError when the denominator is not positive.
double ch_threshold(const SettingQuadruple& quad, ChOrientation orientation = ChOrientation::Auto);

struct ThresholdOptimum {
    double threshold;
    SettingQuadruple quad;
};

/// Minimizes ch_threshold over quadruples: a coarse grid followed by pattern
/// search. Planar quadruples by default; full_sphere searches S^2 from
/// several seeded starts.
ThresholdOptimum optimize_threshold(bool full_sphere = false);

/// p / ((p + 1) / 2): coincidence efficiency seen from one side when the
/// lossy side fires with mean probability p and the other always fires.
/// Throws DomainError unless p is in (0, 1].
double relevant_efficiency(double p);

}  // namespace lhv

#endif
