#include "measinv/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "measinv/error.hpp"
#include "measinv/fourier.hpp"

namespace measinv {

namespace {

constexpr double kAtomSlack = 1e-9;
constexpr double kHypothesisSlack = 1e-12;

// Index of an atom of modulus >= delta, found by halving: the transforms of
// b and c are the two halves of the transform of a, each inherits the
// hypotheses, and the norm bound forces both halves to point at the same k.
std::optional<std::size_t> locate(const std::vector<double>& a, double delta) {
  if (a.size() == 1) {
    return std::abs(a[0]) >= delta - kAtomSlack ? std::optional<std::size_t>{0} : std::nullopt;
  }
  const std::size_t half = a.size() / 2;
  std::size_t k = 0;
  if (half > 1) {
    std::vector<double> b(half), c(half);
    for (std::size_t i = 0; i < half; ++i) {
      b[i] = a[i] + a[i + half];
      c[i] = a[i] - a[i + half];
    }
    const auto kb = locate(b, delta);
    const auto kc = locate(c, delta);
    if (!kb || !kc || *kb != *kc) return std::nullopt;
    k = *kb;
  }
  // Two reals with |x + y|, |x - y| >= delta: one of them has modulus >= delta.
  const std::size_t pick = std::abs(a[k]) >= std::abs(a[k + half]) ? k : k + half;
  if (std::abs(a[pick]) < delta - kAtomSlack) return std::nullopt;
  return pick;
}

}  // namespace

DyadicMeasure::DyadicMeasure(int n, std::vector<double> amplitudes)
    : n_(n), amplitudes_(std::move(amplitudes)) {
  if (n < 1 || n > 30) throw Error(ErrorKind::PreconditionViolated, "dyadic rank must be in [1, 30]");
  if (amplitudes_.size() != (std::size_t{1} << n)) {
    throw Error(ErrorKind::DimensionMismatch, "dyadic measure needs 2^n amplitudes");
  }
}

double DyadicMeasure::tv_norm() const noexcept {
  double total = 0.0;
  for (double a : amplitudes_) total += std::abs(a);
  return total;
}

std::size_t colex_index(const GroupElement& x) {
  std::size_t index = 0;
  for (std::size_t j = 0; j < x.coords.size(); ++j) {
    if (x.coords[j] & 1) index |= std::size_t{1} << j;
  }
  return index;
}

GroupElement colex_element(std::size_t index, int n) {
  GroupElement x{std::vector<std::int64_t>(static_cast<std::size_t>(n))};
  for (int j = 0; j < n; ++j) x.coords[static_cast<std::size_t>(j)] = (index >> j) & 1;
  return x;
}

DyadicMeasure DyadicMeasure::from_measure(const DiscreteMeasure& mu) {
  if (!mu.group().is_exponent_two()) {
    throw Error(ErrorKind::GroupMismatch, "group " + mu.group().to_string() + " is not of exponent two");
  }
  if (!mu.is_real()) throw Error(ErrorKind::PreconditionViolated, "measure is not real");
  const int n = static_cast<int>(mu.group().dimension());
  std::vector<double> amplitudes(std::size_t{1} << n, 0.0);
  for (const auto& a : mu.atoms()) amplitudes[colex_index(a.element)] = a.amplitude.real();
  return DyadicMeasure(n, std::move(amplitudes));
}

DiscreteMeasure DyadicMeasure::to_measure() const {
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
    if (amplitudes_[k] != 0.0) atoms.push_back({colex_element(k, n_), amplitudes_[k]});
  }
  return DiscreteMeasure(GroupSpec::finite_product(std::vector<std::int64_t>(static_cast<std::size_t>(n_), 2)),
                         std::move(atoms));
}

std::vector<double> wht(const DyadicMeasure& m) {
  std::vector<double> out = m.amplitudes();
  fwht(std::span<double>(out));
  return out;
}

std::pair<DyadicMeasure, DyadicMeasure> skondwa_split(const DyadicMeasure& m) {
  if (m.n() < 2) throw Error(ErrorKind::PreconditionViolated, "split needs n >= 2");
  const auto& a = m.amplitudes();
  const std::size_t half = a.size() / 2;
  std::vector<double> b(half), c(half);
  for (std::size_t k = 0; k < half; ++k) {
    b[k] = a[k] + a[k + half];
    c[k] = a[k] - a[k + half];
  }
  return {DyadicMeasure(m.n() - 1, std::move(b)), DyadicMeasure(m.n() - 1, std::move(c))};
}

AtomCertificate greatest_atom_certificate(const DyadicMeasure& m, double delta) {
  if (!(delta > 0.5)) throw Error(ErrorKind::PreconditionViolated, "delta must exceed 1/2");
  if (m.tv_norm() > 1.0 + kHypothesisSlack) throw Error(ErrorKind::PreconditionViolated, "||mu|| > 1");
  const std::vector<double> spectrum = wht(m);
  double smallest = std::abs(spectrum[0]);
  for (double v : spectrum) smallest = std::min(smallest, std::abs(v));
  if (smallest < delta - kHypothesisSlack) {
    throw Error(ErrorKind::PreconditionViolated, "min |mu^| < delta");
  }

  const auto& a = m.amplitudes();
  AtomCertificate cert;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k]) > cert.max_atom) {
      cert.max_atom = std::abs(a[k]);
      cert.argmax = k;
    }
  }
  cert.holds = cert.max_atom >= delta - kAtomSlack;
  cert.recursive_index = locate(a, delta);
  cert.recursive_agrees = cert.recursive_index && std::abs(a[*cert.recursive_index]) == cert.max_atom;
  return cert;
}

AtomCertificate greatest_atom_certificate(const DiscreteMeasure& mu, double delta) {
  return greatest_atom_certificate(DyadicMeasure::from_measure(mu), delta);
}

}  // namespace measinv
