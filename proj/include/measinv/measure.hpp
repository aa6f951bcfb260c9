#pragma once

#include <complex>
#include <span>
#include <vector>

#include "measinv/group.hpp"

namespace measinv {

using Amplitude = std::complex<double>;

struct Atom {
  GroupElement element;
  Amplitude amplitude;

  bool operator==(const Atom&) const = default;
};

/// Amplitudes at or below this modulus are dropped after a convolution.
inline constexpr double kConvolutionPrune = 1e-15;

/// A finitely supported complex measure sum_x a_x delta_x on a GroupSpec.
/// Atoms are stored sorted by coordinates with nonzero amplitudes only.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(GroupSpec group);

  /// Canonicalizes coordinates, merges repeated support points and drops
  /// atoms with modulus <= prune (exact zeros when prune == 0).
  DiscreteMeasure(GroupSpec group, std::vector<Atom> atoms, double prune = 0.0);

  static DiscreteMeasure dirac(GroupSpec group, GroupElement x, Amplitude a = 1.0);

  /// Finite groups only; amplitudes indexed by GroupSpec::index_of.
  static DiscreteMeasure from_dense(GroupSpec group, std::span<const Amplitude> values,
                                    double prune = 0.0);

  const GroupSpec& group() const noexcept { return group_; }
  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t support_size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  Amplitude at(const GroupElement& x) const;
  double tv_norm() const noexcept { return tv_norm_; }
  bool is_real() const noexcept;

  /// Finite groups only.
  std::vector<Amplitude> dense() const;

  bool operator==(const DiscreteMeasure& other) const {
    return group_ == other.group_ && atoms_ == other.atoms_;
  }

 private:
  GroupSpec group_;
  std::vector<Atom> atoms_;
  double tv_norm_ = 0.0;
};

/// Atoms ordered by |amplitude| descending, ties by coordinates ascending.
using AtomList = std::vector<Atom>;

double tv_norm(const DiscreteMeasure& mu);

DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// conj(mu({-x})) at x.
DiscreteMeasure involute(const DiscreteMeasure& mu);

/// c * mu * delta_{-tau}: moves the atom at tau to the origin and rotates
/// every amplitude by the unimodular factor c.
DiscreteMeasure translate(const DiscreteMeasure& mu, const GroupElement& tau, Amplitude c);

DiscreteMeasure scale(const DiscreteMeasure& mu, Amplitude c);

/// alpha*mu + beta*nu.
DiscreteMeasure combine(const DiscreteMeasure& mu, Amplitude alpha, const DiscreteMeasure& nu,
                        Amplitude beta);

AtomList sorted_atoms(const DiscreteMeasure& mu);

/// (mu * mu~)({0}) = sum_x |mu({x})|^2.
double point_mass_at_zero_of_selfconv(const DiscreteMeasure& mu);

/// ||mu - delta_0||.
double distance_to_identity(const DiscreteMeasure& mu);

}  // namespace measinv
