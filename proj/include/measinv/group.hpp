#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace measinv {

/// A point of the ambient group. For finite products the coordinates are
/// canonical residues 0 <= x_j < n_j; for the lattice they are unbounded.
struct GroupElement {
  std::vector<std::int64_t> coords;

  auto operator<=>(const GroupElement&) const = default;
};

/// A point of the dual torus T^d, angles reduced to [0, 2*pi).
class AnglePoint {
 public:
  AnglePoint() = default;
  explicit AnglePoint(std::vector<double> theta);

  const std::vector<double>& theta() const noexcept { return theta_; }

 private:
  std::vector<double> theta_;
};

/// Finite duals are identified with the group itself through the pairing
/// exp(2*pi*i * sum x_j y_j / n_j); lattice duals are angle tuples.
using DualPoint = std::variant<GroupElement, AnglePoint>;

enum class GroupKind { FiniteProduct, Lattice };

class GroupSpec {
 public:
  static GroupSpec finite_product(std::vector<std::int64_t> moduli);
  static GroupSpec cyclic(std::int64_t n) { return finite_product({n}); }
  static GroupSpec lattice(int rank);

  GroupKind kind() const noexcept { return kind_; }
  bool is_finite() const noexcept { return kind_ == GroupKind::FiniteProduct; }
  bool is_lattice() const noexcept { return kind_ == GroupKind::Lattice; }

  /// Empty for lattices.
  const std::vector<std::int64_t>& moduli() const noexcept { return moduli_; }

  /// Number of coordinates of an element.
  std::size_t dimension() const noexcept;

  /// |G|; throws for lattices.
  std::uint64_t order() const;

  /// True for Z_2^n.
  bool is_exponent_two() const noexcept;

  GroupElement zero() const;

  /// Builds a canonical element, reducing finite coordinates mod n_j.
  GroupElement element(std::vector<std::int64_t> coords) const;

  bool contains(const GroupElement& x) const noexcept;

  // Linear indexing of finite groups, last coordinate fastest. Sorting
  // elements by coords and by index gives the same order.
  std::size_t index_of(const GroupElement& x) const;
  GroupElement element_at(std::size_t index) const;

  std::string to_string() const;

  bool operator==(const GroupSpec&) const = default;

 private:
  GroupKind kind_ = GroupKind::FiniteProduct;
  std::vector<std::int64_t> moduli_;
  int rank_ = 0;
};

GroupElement add(const GroupSpec& g, const GroupElement& x, const GroupElement& y);
GroupElement negate(const GroupSpec& g, const GroupElement& x);
GroupElement subtract(const GroupSpec& g, const GroupElement& x, const GroupElement& y);

/// Least k >= 1 with k*x = 0; std::nullopt means infinite order.
using ElementOrder = std::optional<std::uint64_t>;
ElementOrder element_order(const GroupSpec& g, const GroupElement& x);

/// exp(2*pi*i*k/n) with exact values at multiples of a quarter turn.
std::complex<double> unit_root(std::int64_t k, std::int64_t n);

std::complex<double> character_eval(const GroupSpec& g, const DualPoint& gamma,
                                    const GroupElement& x);

/// The set { gamma(x) : gamma in dual }: the k-th roots of unity when x has
/// finite order k, otherwise a dense subgroup of the circle.
struct CharacterValueSet {
  enum class Kind { RootsOfUnity, Dense };
  Kind kind;
  std::uint64_t roots = 0;  // k for RootsOfUnity

  bool operator==(const CharacterValueSet&) const = default;
};
CharacterValueSet character_value_set(const GroupSpec& g, const GroupElement& x);

/// Rank of the integer matrix whose rows are the coordinates of the points,
/// computed in exact arithmetic.
std::size_t integer_rank(std::span<const GroupElement> points);

/// True iff the lattice points admit no nontrivial integer relation.
bool rationally_independent(std::span<const GroupElement> points);

/// Finds theta with exp(i theta.x_k) = target_k for every k. Requires the
/// points to be rationally independent lattice elements and the targets to
/// be unimodular; throws DependentSupport otherwise.
AnglePoint kronecker_solve(const GroupSpec& g, std::span<const GroupElement> points,
                           std::span<const std::complex<double>> targets);

}  // namespace measinv
