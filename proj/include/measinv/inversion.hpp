#pragma once

#include <optional>
#include <string_view>

#include "measinv/measure.hpp"

namespace measinv {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr std::size_t kDefaultDenseCap = 4096;
inline constexpr std::size_t kDefaultMaxTerms = 1'000'000;

enum class InversionMethod { DenseSolve, Neumann, Nikolski };
std::string_view to_string(InversionMethod m);

struct InversionResult {
  DiscreteMeasure inverse;
  InversionMethod method;
  double inverse_norm = 0.0;
  double residual = 0.0;  // ||mu * inverse - delta_0||
  bool truncated = false;
  std::optional<double> guarantee;
};

/// ||mu * nu - delta_0||.
double inversion_residual(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Both routes of the dense oracle, before cross-checking.
struct DenseInversePaths {
  DiscreteMeasure by_solve;     // LU solve of the |G| x |G| convolution system
  DiscreteMeasure by_division;  // pointwise 1/mu^ on the dual, transformed back
  double max_difference = 0.0;  // sup-norm distance of the two amplitude vectors
};

/// Throws Singular when some |mu^(gamma)| < 1e-12.
DenseInversePaths dense_inverse_paths(const DiscreteMeasure& mu, std::size_t cap = kDefaultDenseCap);

/// Exact inverse on a finite group. Both routes are computed and must agree;
/// the dual-division result is returned.
InversionResult dense_invert(const DiscreteMeasure& mu, std::size_t cap = kDefaultDenseCap);

/// Neumann series around the dominant atom. After normalizing the largest
/// atom to lambda*delta_0 with lambda > 0, inverts lambda*(delta_0 + nu/lambda)
/// by the truncated geometric series; the number of terms is chosen from the
/// exact tail bound. Throws NotApplicable when ||nu|| >= lambda.
InversionResult neumann_invert(const DiscreteMeasure& mu, double tol = kDefaultTolerance,
                               std::size_t max_terms = kDefaultMaxTerms);

/// Inverts through mu^{-1} = (mu * mu~)^{-1} * mu~. `delta` must be a
/// certified lower bound on inf |mu^| with delta > 1/sqrt(2).
InversionResult nikolski_invert(const DiscreteMeasure& mu, double delta,
                                double tol = kDefaultTolerance,
                                std::size_t max_terms = kDefaultMaxTerms);

}  // namespace measinv
