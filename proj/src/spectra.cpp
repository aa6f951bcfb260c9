#include "measinv/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "measinv/fourier.hpp"

namespace measinv {

namespace {

double min_modulus(const std::vector<std::complex<double>>& values) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : values) best = std::min(best, std::abs(v));
  return best;
}

void require_finite(const GroupSpec& g, const char* what) {
  if (!g.is_finite()) throw Error(ErrorKind::GroupMismatch, std::string(what) + " needs a finite group");
}

}  // namespace

DualPoint SpectrumProfile::point(std::size_t i) const {
  if (group.is_finite()) return group.element_at(i);
  std::vector<double> theta(mesh.size());
  for (std::size_t j = mesh.size(); j-- > 0;) {
    const auto m = static_cast<std::size_t>(mesh[j]);
    theta[j] = 2.0 * std::numbers::pi * static_cast<double>(i % m) / static_cast<double>(m);
    i /= m;
  }
  return AnglePoint(std::move(theta));
}

std::complex<double> transform_at(const DiscreteMeasure& mu, const DualPoint& gamma) {
  std::complex<double> acc{};
  for (const auto& a : mu.atoms()) acc += a.amplitude * character_eval(mu.group(), gamma, a.element);
  return acc;
}

SpectrumProfile transform(const DiscreteMeasure& mu) {
  const GroupSpec& g = mu.group();
  require_finite(g, "exact transform");
  SpectrumProfile p;
  p.group = g;
  p.values = mu.dense();
  DftPlan(g.moduli()).forward(p.values);

  // Spot validation against the character sum.
  const std::size_t n = p.values.size();
  const std::size_t probes = std::min<std::size_t>(n, 8);
  const double tol = 1e-9 * std::max(1.0, mu.tv_norm());
  for (std::size_t s = 0; s < probes; ++s) {
    const std::size_t i = (s * (n - 1)) / std::max<std::size_t>(probes - 1, 1);
    const double err = std::abs(transform_at(mu, g.element_at(i)) - p.values[i]);
    if (err > tol) {
      throw Error(ErrorKind::Internal, "fast transform disagrees with character sum at dual index " +
                                           std::to_string(i));
    }
  }
  p.exact = true;
  p.observed_min = min_modulus(p.values);
  p.certified_min = p.observed_min;
  p.certified_max_gap = 0.0;
  return p;
}

double lipschitz_constant(const DiscreteMeasure& mu) {
  double total = 0.0;
  for (const auto& a : mu.atoms()) {
    double l1 = 0.0;
    for (std::int64_t c : a.element.coords) l1 += std::abs(static_cast<double>(c));
    total += std::abs(a.amplitude) * l1;
  }
  return total;
}

SpectrumProfile transform_grid(const DiscreteMeasure& mu, std::vector<std::int64_t> mesh,
                               unsigned workers) {
  const GroupSpec& g = mu.group();
  if (!g.is_lattice()) throw Error(ErrorKind::GroupMismatch, "grid transform needs a lattice group");
  if (mesh.size() != g.dimension()) throw Error(ErrorKind::DimensionMismatch, "one mesh size per axis");
  std::size_t total = 1;
  std::int64_t common = 1;
  double spacing = 0.0;
  for (std::int64_t m : mesh) {
    if (m < 2) throw Error(ErrorKind::PreconditionViolated, "mesh must be >= 2 per axis");
    total *= static_cast<std::size_t>(m);
    common = std::lcm(common, m);
    spacing = std::max(spacing, 2.0 * std::numbers::pi / static_cast<double>(m));
  }
  if (common > (std::int64_t{1} << 26)) {
    throw Error(ErrorKind::PreconditionViolated, "per-axis meshes have too large a common multiple");
  }

  // Phase of atom x at grid index k is exp(2 pi i sum_j k_j x_j / mesh_j),
  // accumulated as an integer numerator over lcm(mesh).
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(common));
  for (std::int64_t k = 0; k < common; ++k) roots[static_cast<std::size_t>(k)] = unit_root(k, common);

  struct Term {
    std::vector<std::int64_t> coeff;  // x_j * (common / mesh_j) mod common
    std::complex<double> amplitude;
  };
  std::vector<Term> terms;
  for (const auto& a : mu.atoms()) {
    Term t{std::vector<std::int64_t>(mesh.size()), a.amplitude};
    for (std::size_t j = 0; j < mesh.size(); ++j) {
      const std::int64_t r = a.element.coords[j] % mesh[j];
      t.coeff[j] = ((r < 0 ? r + mesh[j] : r) * (common / mesh[j])) % common;
    }
    terms.push_back(std::move(t));
  }

  SpectrumProfile p;
  p.group = g;
  p.mesh = mesh;
  p.values.resize(total);

  auto evaluate = [&](std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> k(mesh.size());
    for (std::size_t i = begin; i < end; ++i) {
      std::size_t rest = i;
      for (std::size_t j = mesh.size(); j-- > 0;) {
        k[j] = static_cast<std::int64_t>(rest % static_cast<std::size_t>(mesh[j]));
        rest /= static_cast<std::size_t>(mesh[j]);
      }
      std::complex<double> acc{};
      for (const auto& t : terms) {
        std::int64_t numer = 0;
        for (std::size_t j = 0; j < mesh.size(); ++j) numer = (numer + k[j] * t.coeff[j]) % common;
        acc += t.amplitude * roots[static_cast<std::size_t>(numer)];
      }
      p.values[i] = acc;
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1 || total < 4096) {
    evaluate(0, total);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(total, w * chunk);
      const std::size_t end = std::min(total, begin + chunk);
      pool.emplace_back(evaluate, begin, end);
    }
  }

  p.exact = false;
  p.observed_min = min_modulus(p.values);
  p.certified_max_gap = lipschitz_constant(mu) * spacing / 2.0;
  p.certified_min = std::max(0.0, p.observed_min - p.certified_max_gap);
  return p;
}

SpectrumProfile transform_grid(const DiscreteMeasure& mu, std::int64_t mesh, unsigned workers) {
  return transform_grid(mu, std::vector<std::int64_t>(mu.group().dimension(), mesh), workers);
}

SpectralMin spectral_min(const SpectrumProfile& p) { return {p.certified_min, p.observed_min}; }

SpectrumProfile refine_until(const DiscreteMeasure& mu, double target_gap, std::int64_t max_mesh,
                             unsigned workers) {
  if (max_mesh < 2) throw Error(ErrorKind::PreconditionViolated, "max_mesh must be >= 2");
  std::int64_t mesh = 2;
  for (;;) {
    SpectrumProfile p = transform_grid(mu, mesh, workers);
    if (p.certified_max_gap <= target_gap) return p;
    if (mesh * 2 > max_mesh) {
      throw BudgetExceededError("certificate gap " + std::to_string(p.certified_max_gap) +
                                    " still above target at mesh " + std::to_string(mesh),
                                std::move(p));
    }
    mesh *= 2;
  }
}

std::vector<std::complex<double>> inverse_transform(const GroupSpec& g,
                                                    std::vector<std::complex<double>> values) {
  require_finite(g, "inverse transform");
  DftPlan(g.moduli()).inverse(values);
  return values;
}

}  // namespace measinv
