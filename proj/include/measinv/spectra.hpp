#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "measinv/error.hpp"
#include "measinv/measure.hpp"

namespace measinv {

/// Values of the Fourier-Stieltjes transform on a finite dual (exact) or on
/// a uniform grid of T^d (sampled, with a Lipschitz certificate).
///
/// Values are stored in dual linear order: for finite groups the index of
/// the dual element, for grids the multi-index (k_1, ..., k_d) with the last
/// axis fastest and theta_j = 2*pi*k_j / mesh_j.
struct SpectrumProfile {
  GroupSpec group = GroupSpec::cyclic(2);
  std::vector<std::int64_t> mesh;  // lattice grids only
  std::vector<std::complex<double>> values;
  bool exact = false;
  double observed_min = 0.0;
  double certified_min = 0.0;
  double certified_max_gap = 0.0;

  std::size_t size() const noexcept { return values.size(); }
  DualPoint point(std::size_t i) const;
};

/// Exact transform on the full finite dual, spot-checked against the naive
/// character sum.
SpectrumProfile transform(const DiscreteMeasure& mu);

/// Transform on the uniform grid of T^d with the given points per axis.
/// Samples are evaluated independently, so `workers` only affects speed.
SpectrumProfile transform_grid(const DiscreteMeasure& mu, std::vector<std::int64_t> mesh,
                               unsigned workers = 1);
SpectrumProfile transform_grid(const DiscreteMeasure& mu, std::int64_t mesh, unsigned workers = 1);

/// Naive single-point evaluation sum_x a_x gamma(x).
std::complex<double> transform_at(const DiscreteMeasure& mu, const DualPoint& gamma);

/// sum_x |a_x| * ||x||_1, a Lipschitz constant of theta -> mu^(theta) in
/// the sup-norm on angles.
double lipschitz_constant(const DiscreteMeasure& mu);

struct SpectralMin {
  double lower;     // certified lower bound on inf |mu^|
  double observed;  // min over the sampled values
};
SpectralMin spectral_min(const SpectrumProfile& p);

class BudgetExceededError : public Error {
 public:
  BudgetExceededError(const std::string& message, SpectrumProfile best)
      : Error(ErrorKind::BudgetExceeded, message), best_(std::move(best)) {}

  const SpectrumProfile& best() const noexcept { return best_; }

 private:
  SpectrumProfile best_;
};

/// Doubles the mesh (starting from 2 per axis) until the certificate gap is
/// at most target_gap. Throws BudgetExceededError with the finest profile
/// when the next mesh would exceed max_mesh.
SpectrumProfile refine_until(const DiscreteMeasure& mu, double target_gap, std::int64_t max_mesh,
                             unsigned workers = 1);

/// Inverse of the finite transform: amplitudes (dense, group index order)
/// of the measure whose transform is `values`.
std::vector<std::complex<double>> inverse_transform(const GroupSpec& g,
                                                    std::vector<std::complex<double>> values);

}  // namespace measinv
