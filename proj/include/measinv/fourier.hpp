#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace measinv {

/// In-place Walsh-Hadamard butterflies; length must be a power of two.
void fwht(std::span<std::complex<double>> data);
void fwht(std::span<double> data);

/// Multi-dimensional DFT over a product of cyclic groups with the pairing
/// exp(+2*pi*i * sum x_j y_j / n_j). Data is laid out with the last axis
/// fastest. Each axis uses a mixed-radix Cooley-Tukey recursion (prime
/// radices, naive kernel for prime lengths); when every axis has length 2
/// the whole transform collapses to a single Walsh-Hadamard pass.
///
/// A plan caches the root-of-unity tables for repeated transforms of one
/// shape and is safe to share between threads.
class DftPlan {
 public:
  explicit DftPlan(std::vector<std::int64_t> shape);

  std::size_t size() const noexcept { return size_; }
  const std::vector<std::int64_t>& shape() const noexcept { return shape_; }

  /// y(k) = sum_x a(x) exp(+2 pi i <x,k>).
  void forward(std::span<std::complex<double>> data) const;

  /// Exact inverse of forward, including the 1/|G| factor.
  void inverse(std::span<std::complex<double>> data) const;

 private:
  void transform(std::span<std::complex<double>> data, bool conjugate_roots) const;

  std::vector<std::int64_t> shape_;
  std::size_t size_ = 1;
  bool all_two_ = true;
  std::vector<std::vector<std::complex<double>>> roots_;  // per axis, exp(2 pi i k / n)
};

}  // namespace measinv
