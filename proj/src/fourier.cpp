#include "measinv/fourier.hpp"

#include "measinv/error.hpp"
#include "measinv/group.hpp"

namespace measinv {

namespace {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t smallest_prime_factor(std::size_t n) {
  if (n % 2 == 0) return 2;
  for (std::size_t p = 3; p * p <= n; p += 2) {
    if (n % p == 0) return p;
  }
  return n;
}

template <typename T>
void butterflies(std::span<T> data) {
  if (!is_power_of_two(data.size())) {
    throw Error(ErrorKind::DimensionMismatch, "Walsh-Hadamard length must be a power of two");
  }
  for (std::size_t h = 1; h < data.size(); h *= 2) {
    for (std::size_t i = 0; i < data.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const T x = data[j];
        const T y = data[j + h];
        data[j] = x + y;
        data[j + h] = x - y;
      }
    }
  }
}

struct Kernel {
  const cplx* roots;  // exp(+-2 pi i k / big_n), k < big_n
  std::size_t big_n;

  cplx root(std::size_t exponent, std::size_t n) const {
    // exp(2 pi i exponent / n) with n | big_n
    return roots[(exponent % n) * (big_n / n)];
  }

  // Decimation in time by the smallest prime factor of n.
  void run(const cplx* in, std::size_t stride, std::size_t n, cplx* out) const {
    if (n == 1) {
      out[0] = in[0];
      return;
    }
    const std::size_t p = smallest_prime_factor(n);
    if (p == n) {
      for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < n; ++j) acc += in[j * stride] * root(j * k, n);
        out[k] = acc;
      }
      return;
    }
    const std::size_t m = n / p;
    for (std::size_t r = 0; r < p; ++r) run(in + r * stride, stride * p, m, out + r * m);
    std::vector<cplx> combined(n);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t q = 0; q < p; ++q) {
        const std::size_t idx = k + m * q;
        cplx acc = out[k];
        for (std::size_t r = 1; r < p; ++r) acc += root(r * idx, n) * out[r * m + k];
        combined[idx] = acc;
      }
    }
    std::copy(combined.begin(), combined.end(), out);
  }
};

}  // namespace

void fwht(std::span<std::complex<double>> data) { butterflies(data); }
void fwht(std::span<double> data) { butterflies(data); }

DftPlan::DftPlan(std::vector<std::int64_t> shape) : shape_(std::move(shape)) {
  for (std::int64_t n : shape_) {
    if (n < 1) throw Error(ErrorKind::DimensionMismatch, "DFT axis length must be positive");
    size_ *= static_cast<std::size_t>(n);
    all_two_ = all_two_ && n == 2;
    std::vector<cplx> table(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) table[static_cast<std::size_t>(k)] = unit_root(k, n);
    roots_.push_back(std::move(table));
  }
}

void DftPlan::forward(std::span<std::complex<double>> data) const { transform(data, false); }

void DftPlan::inverse(std::span<std::complex<double>> data) const {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : data) v *= scale;
}

void DftPlan::transform(std::span<std::complex<double>> data, bool conjugate_roots) const {
  if (data.size() != size_) throw Error(ErrorKind::DimensionMismatch, "DFT input does not match plan");
  if (all_two_) {
    fwht(data);
    return;
  }
  std::size_t inner = size_;
  std::vector<cplx> line, out, conj_table;
  for (std::size_t axis = 0; axis < shape_.size(); ++axis) {
    const auto n = static_cast<std::size_t>(shape_[axis]);
    inner /= n;
    if (n == 1) continue;
    const std::vector<cplx>* table = &roots_[axis];
    if (conjugate_roots) {
      conj_table.resize(n);
      for (std::size_t k = 0; k < n; ++k) conj_table[k] = std::conj(roots_[axis][k]);
      table = &conj_table;
    }
    const Kernel kernel{table->data(), n};
    line.resize(n);
    out.resize(n);
    const std::size_t outer = size_ / (n * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i) {
        const std::size_t base = o * n * inner + i;
        for (std::size_t k = 0; k < n; ++k) line[k] = data[base + k * inner];
        kernel.run(line.data(), 1, n, out.data());
        for (std::size_t k = 0; k < n; ++k) data[base + k * inner] = out[k];
      }
    }
  }
}

}  // namespace measinv
