#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "measinv/measure.hpp"

namespace measinv {

/// Slack for inequality checks and for norm comparisons.
inline constexpr double kInequalitySlack = 1e-12;
inline constexpr double kNormSlack = 1e-9;

/// (-1 + sqrt(33)) / 8: below it the refined dominant-atom bound of the
/// infinite-order theorem is not above 1/2.
double refined_threshold();

// ---------------------------------------------------------------------------
// Sequence lemmas

/// Conclusions of the square-sum lemma for a non-increasing non-negative
/// sequence with sum <= 1 and sum of squares >= delta^2:
/// x1 >= delta^2 and x1 + x2 >= delta.
struct SumkiCheck {
  double x1_min;    // delta^2
  double pair_min;  // delta
  bool holds;
};
SumkiCheck check_sumki(std::span<const double> x, double delta);

/// The same two conclusions for the sorted atom moduli of a measure with
/// ||mu|| <= 1 and certified inf |mu^| >= delta > 1/2.
bool check_sumadw(const DiscreteMeasure& mu, double delta);

/// x1 >= delta + sum_{n>=2} x_n for a finite non-increasing sequence whose
/// alternating sum and head-minus-tail both have modulus >= delta.
bool check_pocz(std::span<const double> x, double delta);

// ---------------------------------------------------------------------------
// Closed-form bounds

struct NiesBound {
  double a1_min;         // (1 - d + sqrt(17 d^2 + 6 d - 7)) / 4
  double a1_min_linear;  // 3/2 d - 1/2
  std::optional<double> norm_bound_linear;   // 1 / (3d - 2), d > 2/3
  std::optional<double> norm_bound_refined;  // 2 / (-(1+d) + sqrt(...)), d > (-1+sqrt 33)/8
};
NiesBound bound_nies(double delta);

/// Finite order n of tau_2 - tau_1:
/// f(d) = d - (1 - d) / (2 (1 - sin(pi / 2n))), bound 1 / (2 f - 1) when f > 1/2.
struct SkonczoBound {
  double f;
  std::optional<double> norm_bound;
};
SkonczoBound bound_skonczo(double delta, std::int64_t n);

/// Independent support of infinite-order points on Z^d.
struct NornzCertificate {
  bool applies = false;
  std::optional<double> bound;    // 1 / (2 delta - 1)
  std::optional<double> refined;  // 1 / (2 (||mu|| + delta - |a1|) - 1)
  std::string reason;             // why it does not apply
};
NornzCertificate certify_nornz(const DiscreteMeasure& mu, double delta);

/// ||mu|| <= 1 and inf |mu^| > 1/2 imply invertibility.
bool qualitative_invertible(const DiscreteMeasure& mu, double delta);

// ---------------------------------------------------------------------------
// Report

enum class Theorem {
  Qualitative,        // inf |mu^| > 1/2 implies invertible
  DominantAtom,       // |lambda| > 1/2 : 1 / (2|lambda| - 1)
  SelfConvolution,    // delta > 1/sqrt 2 : 1 / (2 delta^2 - 1)
  InfiniteOrderGap,   // tau2 - tau1 of infinite order
  FiniteOrderGap,     // tau2 - tau1 of finite order n
  IndependentSupport,
  IndependentSupportRefined,
  ExponentTwo,        // real measures on Z_2^n
};
std::string_view to_string(Theorem t);

struct TheoremVerdict {
  Theorem theorem;
  bool applies = false;
  std::string reason;                // set when !applies
  std::optional<double> predicted;   // norm bound; never set for Qualitative
};

struct BoundReport {
  double delta = 0.0;  // certified lower bound on inf |mu^|
  double tv = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  std::vector<TheoremVerdict> verdicts;
  std::optional<double> observed_inverse_norm;

  const TheoremVerdict& verdict(Theorem t) const;

  /// Verdicts that apply but whose prediction is below the observed norm
  /// by more than kNormSlack. Empty for a sound report.
  std::vector<Theorem> violations() const;
};

/// Evaluates every theorem against mu with the certified delta. The caller
/// supplies the observed inverse norm when one is known.
BoundReport build_report(const DiscreteMeasure& mu, double delta,
                         std::optional<double> observed_inverse_norm = std::nullopt);

}  // namespace measinv
