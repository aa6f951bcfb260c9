#include "measinv/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "measinv/error.hpp"

namespace measinv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::GroupMismatch: return "GroupMismatch";
    case ErrorKind::DependentSupport: return "DependentSupport";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

void require_member(const GroupSpec& g, const GroupElement& x) {
  if (x.coords.size() != g.dimension()) {
    throw Error(ErrorKind::DimensionMismatch,
                "element has " + std::to_string(x.coords.size()) + " coordinates, group " +
                    g.to_string() + " expects " + std::to_string(g.dimension()));
  }
}

}  // namespace

AnglePoint::AnglePoint(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double& t : theta_) {
    t = std::fmod(t, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
  }
}

GroupSpec GroupSpec::finite_product(std::vector<std::int64_t> moduli) {
  if (moduli.empty()) {
    throw Error(ErrorKind::PreconditionViolated, "finite product needs at least one factor");
  }
  std::uint64_t order = 1;
  for (std::int64_t n : moduli) {
    if (n < 2) {
      throw Error(ErrorKind::PreconditionViolated,
                  "cyclic factor Z" + std::to_string(n) + " must have modulus >= 2");
    }
    if (order > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n)) {
      throw Error(ErrorKind::PreconditionViolated, "group order overflows 64 bits");
    }
    order *= static_cast<std::uint64_t>(n);
  }
  GroupSpec g;
  g.kind_ = GroupKind::FiniteProduct;
  g.moduli_ = std::move(moduli);
  return g;
}

GroupSpec GroupSpec::lattice(int rank) {
  if (rank < 1) throw Error(ErrorKind::PreconditionViolated, "lattice rank must be >= 1");
  GroupSpec g;
  g.kind_ = GroupKind::Lattice;
  g.rank_ = rank;
  return g;
}

std::size_t GroupSpec::dimension() const noexcept {
  return is_finite() ? moduli_.size() : static_cast<std::size_t>(rank_);
}

std::uint64_t GroupSpec::order() const {
  if (!is_finite()) throw Error(ErrorKind::GroupMismatch, "lattice " + to_string() + " is infinite");
  std::uint64_t order = 1;
  for (std::int64_t n : moduli_) order *= static_cast<std::uint64_t>(n);
  return order;
}

bool GroupSpec::is_exponent_two() const noexcept {
  return is_finite() && std::all_of(moduli_.begin(), moduli_.end(), [](auto n) { return n == 2; });
}

GroupElement GroupSpec::zero() const { return GroupElement{std::vector<std::int64_t>(dimension(), 0)}; }

GroupElement GroupSpec::element(std::vector<std::int64_t> coords) const {
  GroupElement x{std::move(coords)};
  require_member(*this, x);
  if (is_finite()) {
    for (std::size_t j = 0; j < x.coords.size(); ++j) x.coords[j] = mod(x.coords[j], moduli_[j]);
  }
  return x;
}

bool GroupSpec::contains(const GroupElement& x) const noexcept {
  if (x.coords.size() != dimension()) return false;
  if (!is_finite()) return true;
  for (std::size_t j = 0; j < x.coords.size(); ++j) {
    if (x.coords[j] < 0 || x.coords[j] >= moduli_[j]) return false;
  }
  return true;
}

std::size_t GroupSpec::index_of(const GroupElement& x) const {
  if (!is_finite()) throw Error(ErrorKind::GroupMismatch, "lattice elements have no linear index");
  require_member(*this, x);
  std::size_t index = 0;
  for (std::size_t j = 0; j < moduli_.size(); ++j) {
    index = index * static_cast<std::size_t>(moduli_[j]) +
            static_cast<std::size_t>(mod(x.coords[j], moduli_[j]));
  }
  return index;
}

GroupElement GroupSpec::element_at(std::size_t index) const {
  if (!is_finite()) throw Error(ErrorKind::GroupMismatch, "lattice elements have no linear index");
  GroupElement x{std::vector<std::int64_t>(moduli_.size(), 0)};
  for (std::size_t j = moduli_.size(); j-- > 0;) {
    const auto n = static_cast<std::size_t>(moduli_[j]);
    x.coords[j] = static_cast<std::int64_t>(index % n);
    index /= n;
  }
  return x;
}

std::string GroupSpec::to_string() const {
  if (!is_finite()) return "Z^" + std::to_string(rank_);
  std::ostringstream out;
  for (std::size_t j = 0; j < moduli_.size();) {
    std::size_t run = 1;
    while (j + run < moduli_.size() && moduli_[j + run] == moduli_[j]) ++run;
    if (j > 0) out << 'x';
    out << 'Z' << moduli_[j];
    if (run > 1) out << '^' << run;
    j += run;
  }
  return out.str();
}

GroupElement add(const GroupSpec& g, const GroupElement& x, const GroupElement& y) {
  require_member(g, x);
  require_member(g, y);
  GroupElement z{x.coords};
  for (std::size_t j = 0; j < z.coords.size(); ++j) {
    z.coords[j] += y.coords[j];
    if (g.is_finite()) z.coords[j] = mod(z.coords[j], g.moduli()[j]);
  }
  return z;
}

GroupElement negate(const GroupSpec& g, const GroupElement& x) {
  require_member(g, x);
  GroupElement z{x.coords};
  for (std::size_t j = 0; j < z.coords.size(); ++j) {
    z.coords[j] = g.is_finite() ? mod(-z.coords[j], g.moduli()[j]) : -z.coords[j];
  }
  return z;
}

GroupElement subtract(const GroupSpec& g, const GroupElement& x, const GroupElement& y) {
  return add(g, x, negate(g, y));
}

ElementOrder element_order(const GroupSpec& g, const GroupElement& x) {
  require_member(g, x);
  if (!g.is_finite()) {
    const bool is_zero = std::all_of(x.coords.begin(), x.coords.end(), [](auto c) { return c == 0; });
    return is_zero ? ElementOrder{1} : std::nullopt;
  }
  std::uint64_t order = 1;
  for (std::size_t j = 0; j < x.coords.size(); ++j) {
    const std::int64_t n = g.moduli()[j];
    const std::int64_t r = mod(x.coords[j], n);
    const auto component = static_cast<std::uint64_t>(n / std::gcd(r, n));
    order = std::lcm(order, component);
  }
  return order;
}

std::complex<double> unit_root(std::int64_t k, std::int64_t n) {
  k = mod(k, n);
  // Quarter turns are represented exactly.
  if ((4 * k) % n == 0) {
    switch ((4 * k) / n) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  // Evaluate on the short side of the circle for accuracy.
  const long double kk = (2 * k > n) ? static_cast<long double>(k - n) : static_cast<long double>(k);
  const long double angle = 2.0L * std::numbers::pi_v<long double> * kk / static_cast<long double>(n);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
}

std::complex<double> character_eval(const GroupSpec& g, const DualPoint& gamma,
                                    const GroupElement& x) {
  require_member(g, x);
  if (g.is_finite()) {
    const auto* y = std::get_if<GroupElement>(&gamma);
    if (y == nullptr) throw Error(ErrorKind::DimensionMismatch, "finite group needs a group-element dual point");
    require_member(g, *y);
    // Accumulate the phase as a fraction over lcm(n_j) when it fits.
    std::int64_t denom = 1;
    bool fits = true;
    for (std::int64_t n : g.moduli()) {
      denom = std::lcm(denom, n);
      if (denom > (std::int64_t{1} << 30)) {
        fits = false;
        break;
      }
    }
    if (fits) {
      std::int64_t numer = 0;
      for (std::size_t j = 0; j < x.coords.size(); ++j) {
        const std::int64_t n = g.moduli()[j];
        const std::int64_t term = mod(mod(x.coords[j], n) * mod(y->coords[j], n), n);
        numer = mod(numer + term * (denom / n), denom);
      }
      return unit_root(numer, denom);
    }
    long double turns = 0.0L;
    for (std::size_t j = 0; j < x.coords.size(); ++j) {
      const std::int64_t n = g.moduli()[j];
      turns += static_cast<long double>(mod(x.coords[j], n) * mod(y->coords[j], n) % n) /
               static_cast<long double>(n);
    }
    turns -= std::floor(turns);
    const long double angle = 2.0L * std::numbers::pi_v<long double> * turns;
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
  }
  const auto* theta = std::get_if<AnglePoint>(&gamma);
  if (theta == nullptr || theta->theta().size() != g.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "lattice character needs " +
                                                  std::to_string(g.dimension()) + " angles");
  }
  long double phase = 0.0L;
  for (std::size_t j = 0; j < x.coords.size(); ++j) {
    phase += static_cast<long double>(theta->theta()[j]) * static_cast<long double>(x.coords[j]);
  }
  phase = std::fmod(phase, 2.0L * std::numbers::pi_v<long double>);
  return {static_cast<double>(std::cos(phase)), static_cast<double>(std::sin(phase))};
}

CharacterValueSet character_value_set(const GroupSpec& g, const GroupElement& x) {
  const ElementOrder order = element_order(g, x);
  if (!order) return {CharacterValueSet::Kind::Dense, 0};
  return {CharacterValueSet::Kind::RootsOfUnity, *order};
}

std::size_t integer_rank(std::span<const GroupElement> points) {
  using boost::multiprecision::cpp_rational;
  if (points.empty()) return 0;
  const std::size_t cols = points.front().coords.size();
  std::vector<std::vector<cpp_rational>> m;
  m.reserve(points.size());
  for (const auto& p : points) {
    if (p.coords.size() != cols) throw Error(ErrorKind::DimensionMismatch, "points of unequal dimension");
    m.emplace_back(p.coords.begin(), p.coords.end());
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t i = rank + 1; i < m.size(); ++i) {
      if (m[i][col] == 0) continue;
      const cpp_rational factor = m[i][col] / m[rank][col];
      for (std::size_t j = col; j < cols; ++j) m[i][j] -= factor * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

bool rationally_independent(std::span<const GroupElement> points) {
  return integer_rank(points) == points.size();
}

AnglePoint kronecker_solve(const GroupSpec& g, std::span<const GroupElement> points,
                           std::span<const std::complex<double>> targets) {
  if (!g.is_lattice()) throw Error(ErrorKind::GroupMismatch, "phase realization needs a lattice group");
  if (points.size() != targets.size()) {
    throw Error(ErrorKind::DimensionMismatch, "points and targets differ in length");
  }
  for (const auto& p : points) require_member(g, p);
  for (const auto& t : targets) {
    if (std::abs(std::abs(t) - 1.0) > 1e-9) {
      throw Error(ErrorKind::PreconditionViolated, "phase targets must be unimodular");
    }
  }
  if (!rationally_independent(points)) {
    throw Error(ErrorKind::DependentSupport,
                "points are rationally dependent; independent-set phase realization does not apply");
  }
  const auto d = static_cast<Eigen::Index>(g.dimension());
  if (points.empty()) return AnglePoint(std::vector<double>(static_cast<std::size_t>(d), 0.0));

  const auto m = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd x(m, d);
  Eigen::VectorXd phase(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index j = 0; j < d; ++j) x(k, j) = static_cast<double>(points[k].coords[j]);
    phase(k) = std::arg(targets[k]);
  }
  const Eigen::VectorXd theta = x.completeOrthogonalDecomposition().solve(phase);
  AnglePoint result(std::vector<double>(theta.data(), theta.data() + d));

  for (std::size_t k = 0; k < points.size(); ++k) {
    const double err = std::abs(character_eval(g, result, points[k]) - targets[k]);
    if (err > 1e-9) {
      throw Error(ErrorKind::Internal, "phase realization residual " + std::to_string(err));
    }
  }
  return result;
}

}  // namespace measinv
