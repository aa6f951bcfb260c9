#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "measinv/measure.hpp"

namespace measinv {

/// Real measure on Z_2^n stored densely in colexicographic order: the bit
/// string x_1 x_2 ... x_n has index sum_j x_j 2^(j-1), so the last written
/// digit is the most significant one. For n = 3 the order is
/// 000 < 100 < 010 < 110 < 001 < 101 < 011 < 111, and the string ending in 1
/// that matches index k < 2^(n-1) sits at k + 2^(n-1).
class DyadicMeasure {
 public:
  DyadicMeasure(int n, std::vector<double> amplitudes);

  /// Requires an exponent-two group and real amplitudes.
  static DyadicMeasure from_measure(const DiscreteMeasure& mu);
  DiscreteMeasure to_measure() const;

  int n() const noexcept { return n_; }
  const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
  double tv_norm() const noexcept;

 private:
  int n_;
  std::vector<double> amplitudes_;
};

std::size_t colex_index(const GroupElement& x);
GroupElement colex_element(std::size_t index, int n);

/// mu^(y) = sum_x a_x (-1)^<x,y>, in colex order of y.
std::vector<double> wht(const DyadicMeasure& m);

/// b_k = a_k + a_{k+2^(n-1)}, c_k = a_k - a_{k+2^(n-1)}. The transform of b
/// is the transform of m on duals ending in 0, that of c on duals ending in 1.
std::pair<DyadicMeasure, DyadicMeasure> skondwa_split(const DyadicMeasure& m);

struct AtomCertificate {
  double max_atom = 0.0;
  std::size_t argmax = 0;
  bool holds = false;  // max_atom >= delta - 1e-9
  /// Index produced by the inductive halving argument; empty when the
  /// argument broke down at some level.
  std::optional<std::size_t> recursive_index;
  bool recursive_agrees = false;
};

/// Certifies that a real measure with ||m|| <= 1 and min |m^| >= delta > 1/2
/// has an atom of mass >= delta, both directly and by the recursive split.
AtomCertificate greatest_atom_certificate(const DyadicMeasure& m, double delta);
AtomCertificate greatest_atom_certificate(const DiscreteMeasure& mu, double delta);

}  // namespace measinv
