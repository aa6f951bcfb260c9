#include "measinv/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "measinv/error.hpp"
#include "measinv/spectra.hpp"

namespace measinv {

namespace {

// Noise floor for amplitudes produced by the dense routes.
constexpr double kDensePrune = 1e-14;
constexpr double kSingularThreshold = 1e-12;
constexpr double kTvSlack = 1e-12;

}  // namespace

std::string_view to_string(InversionMethod m) {
  switch (m) {
    case InversionMethod::DenseSolve: return "dense";
    case InversionMethod::Neumann: return "neumann";
    case InversionMethod::Nikolski: return "nikolski";
  }
  return "unknown";
}

double inversion_residual(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return distance_to_identity(convolve(mu, nu));
}

DenseInversePaths dense_inverse_paths(const DiscreteMeasure& mu, std::size_t cap) {
  const GroupSpec& g = mu.group();
  if (!g.is_finite()) throw Error(ErrorKind::GroupMismatch, "dense inversion needs a finite group");
  const std::uint64_t order = g.order();
  if (order > cap) {
    throw Error(ErrorKind::PreconditionViolated,
                "group order " + std::to_string(order) + " exceeds dense cap " + std::to_string(cap));
  }
  const auto n = static_cast<std::size_t>(order);

  // Dual division.
  const SpectrumProfile spectrum = transform(mu);
  if (spectrum.observed_min < kSingularThreshold) {
    throw Error(ErrorKind::Singular, "0 lies in the spectrum: min |mu^| = " +
                                         std::to_string(spectrum.observed_min));
  }
  std::vector<std::complex<double>> reciprocal(n);
  for (std::size_t i = 0; i < n; ++i) reciprocal[i] = 1.0 / spectrum.values[i];
  const std::vector<std::complex<double>> divided = inverse_transform(g, std::move(reciprocal));

  // Convolution operator: (A v)(z) = sum_y mu(z - y) v(y).
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t y = 0; y < n; ++y) {
    const GroupElement ye = g.element_at(y);
    for (const auto& atom : mu.atoms()) {
      const std::size_t z = g.index_of(add(g, atom.element, ye));
      a(static_cast<Eigen::Index>(z), static_cast<Eigen::Index>(y)) = atom.amplitude;
    }
  }
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  rhs(0) = 1.0;
  const Eigen::VectorXcd solved = a.partialPivLu().solve(rhs);

  double diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff = std::max(diff, std::abs(solved(static_cast<Eigen::Index>(i)) - divided[i]));
  }
  return DenseInversePaths{
      DiscreteMeasure::from_dense(g, std::span<const std::complex<double>>(solved.data(), n), kDensePrune),
      DiscreteMeasure::from_dense(g, divided, kDensePrune), diff};
}

InversionResult dense_invert(const DiscreteMeasure& mu, std::size_t cap) {
  DenseInversePaths paths = dense_inverse_paths(mu, cap);
  // Both routes lose accuracy with the conditioning of the operator, which
  // is max|mu^| / min|mu^|; the agreement test scales with it.
  const SpectrumProfile spectrum = transform(mu);
  double largest = 0.0;
  for (const auto& v : spectrum.values) largest = std::max(largest, std::abs(v));
  const double condition = largest / spectrum.observed_min;
  if (paths.max_difference > 1e-9 * std::max(1.0, condition)) {
    throw Error(ErrorKind::Internal, "dense inversion routes disagree by " +
                                         std::to_string(paths.max_difference));
  }
  InversionResult result{std::move(paths.by_division), InversionMethod::DenseSolve, 0.0, 0.0, false, std::nullopt};
  result.inverse_norm = result.inverse.tv_norm();
  result.residual = inversion_residual(mu, result.inverse);
  return result;
}

InversionResult neumann_invert(const DiscreteMeasure& mu, double tol, std::size_t max_terms) {
  if (mu.empty()) throw Error(ErrorKind::NotApplicable, "the zero measure is not invertible");
  if (!(tol > 0.0)) throw Error(ErrorKind::PreconditionViolated, "tolerance must be positive");
  const GroupSpec& g = mu.group();

  const Atom head = sorted_atoms(mu).front();
  const double lambda = std::abs(head.amplitude);
  const std::complex<double> phase = std::conj(head.amplitude) / lambda;
  const DiscreteMeasure normalized = translate(mu, head.element, phase);

  std::vector<Atom> rest_atoms;
  const GroupElement zero = g.zero();
  for (const auto& a : normalized.atoms()) {
    if (a.element != zero) rest_atoms.push_back(a);
  }
  const DiscreteMeasure rest(g, std::move(rest_atoms));
  const double ratio = rest.tv_norm() / lambda;
  if (ratio >= 1.0) {
    throw Error(ErrorKind::NotApplicable,
                "dominant-atom hypothesis fails: ||mu - a1 delta_tau1|| / |a1| = " + std::to_string(ratio) +
                    " >= 1");
  }

  // Smallest K with ratio^(K+1) / (1 - ratio) / lambda <= tol.
  std::size_t terms = 0;
  if (ratio > 0.0) {
    const double target = tol * lambda * (1.0 - ratio);
    const double estimate = std::ceil(std::log(target) / std::log(ratio)) - 1.0;
    if (estimate > static_cast<double>(max_terms)) {
      throw Error(ErrorKind::BudgetExceeded,
                  "Neumann series needs more than " + std::to_string(max_terms) + " terms");
    }
    terms = static_cast<std::size_t>(std::max(0.0, estimate));
    while (std::pow(ratio, static_cast<double>(terms + 1)) > target) ++terms;
  }

  // Horner: S <- delta_0 + w * S with w = -rest / lambda.
  const DiscreteMeasure step = scale(rest, -1.0 / lambda);
  const DiscreteMeasure identity = DiscreteMeasure::dirac(g, zero);
  DiscreteMeasure series = identity;
  for (std::size_t k = 0; k < terms; ++k) series = combine(identity, 1.0, convolve(step, series), 1.0);

  InversionResult result{translate(scale(series, 1.0 / lambda), head.element, phase),
                         InversionMethod::Neumann, 0.0, 0.0, false, std::nullopt};
  result.inverse_norm = result.inverse.tv_norm();
  result.residual = inversion_residual(mu, result.inverse);
  result.truncated = !rest.empty();
  if (lambda > 0.5 && mu.tv_norm() <= 1.0 + kTvSlack) result.guarantee = 1.0 / (2.0 * lambda - 1.0);
  return result;
}

InversionResult nikolski_invert(const DiscreteMeasure& mu, double delta, double tol,
                                std::size_t max_terms) {
  if (!(delta > std::numbers::sqrt2 / 2.0)) {
    throw Error(ErrorKind::NotApplicable,
                "self-convolution route needs delta > 1/sqrt(2), got " + std::to_string(delta));
  }
  if (mu.tv_norm() > 1.0 + kTvSlack) {
    throw Error(ErrorKind::PreconditionViolated, "self-convolution route needs ||mu|| <= 1");
  }
  const double mass_at_zero = point_mass_at_zero_of_selfconv(mu);
  if (mass_at_zero < delta * delta - kTvSlack) {
    throw Error(ErrorKind::PreconditionViolated,
                "delta is not a lower bound on |mu^|: sum |a_x|^2 = " + std::to_string(mass_at_zero) +
                    " < delta^2");
  }
  const DiscreteMeasure adjoint = involute(mu);
  const DiscreteMeasure hermitian = convolve(mu, adjoint);
  const InversionResult inner = neumann_invert(hermitian, tol / 4.0, max_terms);

  InversionResult result{convolve(inner.inverse, adjoint), InversionMethod::Nikolski, 0.0, 0.0, false, std::nullopt};
  result.inverse_norm = result.inverse.tv_norm();
  result.residual = inversion_residual(mu, result.inverse);
  result.truncated = inner.truncated;
  result.guarantee = 1.0 / (2.0 * delta * delta - 1.0);
  return result;
}

}  // namespace measinv
