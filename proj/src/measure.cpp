#include "measinv/measure.hpp"

#include <algorithm>
#include <map>

#include "measinv/error.hpp"

namespace measinv {

namespace {

// Dense accumulation is used for finite groups up to this order.
constexpr std::uint64_t kDenseOrderLimit = std::uint64_t{1} << 22;

void require_same_group(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (!(mu.group() == nu.group())) {
    throw Error(ErrorKind::GroupMismatch,
                "measures live on " + mu.group().to_string() + " and " + nu.group().to_string());
  }
}

double sum_moduli(std::span<const Atom> atoms) {
  double total = 0.0;
  for (const auto& a : atoms) total += std::abs(a.amplitude);
  return total;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(GroupSpec group) : group_(std::move(group)) {}

DiscreteMeasure::DiscreteMeasure(GroupSpec group, std::vector<Atom> atoms, double prune)
    : group_(std::move(group)) {
  for (auto& a : atoms) a.element = group_.element(std::move(a.element.coords));
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& x, const Atom& y) { return x.element < y.element; });
  for (auto& a : atoms) {
    if (!atoms_.empty() && atoms_.back().element == a.element) {
      atoms_.back().amplitude += a.amplitude;
    } else {
      atoms_.push_back(std::move(a));
    }
  }
  std::erase_if(atoms_, [prune](const Atom& a) { return std::abs(a.amplitude) <= prune; });
  tv_norm_ = sum_moduli(atoms_);
}

DiscreteMeasure DiscreteMeasure::dirac(GroupSpec group, GroupElement x, Amplitude a) {
  std::vector<Atom> atoms;
  atoms.push_back({std::move(x), a});
  return DiscreteMeasure(std::move(group), std::move(atoms));
}

DiscreteMeasure DiscreteMeasure::from_dense(GroupSpec group, std::span<const Amplitude> values,
                                            double prune) {
  if (values.size() != group.order()) {
    throw Error(ErrorKind::DimensionMismatch, "dense amplitude vector does not match group order");
  }
  DiscreteMeasure mu(std::move(group));
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) > prune) mu.atoms_.push_back({mu.group_.element_at(i), values[i]});
  }
  mu.tv_norm_ = sum_moduli(mu.atoms_);
  return mu;
}

Amplitude DiscreteMeasure::at(const GroupElement& x) const {
  const GroupElement key = group_.element(x.coords);
  const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), key,
                                   [](const Atom& a, const GroupElement& k) { return a.element < k; });
  return (it != atoms_.end() && it->element == key) ? it->amplitude : Amplitude{};
}

bool DiscreteMeasure::is_real() const noexcept {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.amplitude.imag() == 0.0; });
}

std::vector<Amplitude> DiscreteMeasure::dense() const {
  std::vector<Amplitude> values(group_.order());
  for (const auto& a : atoms_) values[group_.index_of(a.element)] = a.amplitude;
  return values;
}

double tv_norm(const DiscreteMeasure& mu) { return mu.tv_norm(); }

DiscreteMeasure convolve(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_group(mu, nu);
  const GroupSpec& g = mu.group();

  if (g.is_finite() && g.order() <= kDenseOrderLimit) {
    const auto& moduli = g.moduli();
    std::vector<Amplitude> acc(g.order());
    if (moduli.size() == 1) {
      const auto n = static_cast<std::size_t>(moduli[0]);
      for (const auto& a : mu.atoms()) {
        const auto i = static_cast<std::size_t>(a.element.coords[0]);
        for (const auto& b : nu.atoms()) {
          std::size_t k = i + static_cast<std::size_t>(b.element.coords[0]);
          if (k >= n) k -= n;
          acc[k] += a.amplitude * b.amplitude;
        }
      }
    } else {
      for (const auto& a : mu.atoms()) {
        for (const auto& b : nu.atoms()) {
          std::size_t k = 0;
          for (std::size_t j = 0; j < moduli.size(); ++j) {
            std::int64_t c = a.element.coords[j] + b.element.coords[j];
            if (c >= moduli[j]) c -= moduli[j];
            k = k * static_cast<std::size_t>(moduli[j]) + static_cast<std::size_t>(c);
          }
          acc[k] += a.amplitude * b.amplitude;
        }
      }
    }
    return DiscreteMeasure::from_dense(g, acc, kConvolutionPrune);
  }

  std::map<GroupElement, Amplitude> acc;
  for (const auto& a : mu.atoms()) {
    for (const auto& b : nu.atoms()) acc[add(g, a.element, b.element)] += a.amplitude * b.amplitude;
  }
  std::vector<Atom> atoms;
  atoms.reserve(acc.size());
  for (auto& [x, v] : acc) atoms.push_back({x, v});
  return DiscreteMeasure(g, std::move(atoms), kConvolutionPrune);
}

DiscreteMeasure involute(const DiscreteMeasure& mu) {
  std::vector<Atom> atoms;
  atoms.reserve(mu.support_size());
  for (const auto& a : mu.atoms()) atoms.push_back({negate(mu.group(), a.element), std::conj(a.amplitude)});
  return DiscreteMeasure(mu.group(), std::move(atoms));
}

DiscreteMeasure translate(const DiscreteMeasure& mu, const GroupElement& tau, Amplitude c) {
  if (std::abs(std::abs(c) - 1.0) > 1e-12) {
    throw Error(ErrorKind::PreconditionViolated, "translation phase must be unimodular");
  }
  std::vector<Atom> atoms;
  atoms.reserve(mu.support_size());
  for (const auto& a : mu.atoms()) atoms.push_back({subtract(mu.group(), a.element, tau), c * a.amplitude});
  return DiscreteMeasure(mu.group(), std::move(atoms));
}

DiscreteMeasure scale(const DiscreteMeasure& mu, Amplitude c) {
  std::vector<Atom> atoms(mu.atoms().begin(), mu.atoms().end());
  for (auto& a : atoms) a.amplitude *= c;
  return DiscreteMeasure(mu.group(), std::move(atoms));
}

DiscreteMeasure combine(const DiscreteMeasure& mu, Amplitude alpha, const DiscreteMeasure& nu,
                        Amplitude beta) {
  require_same_group(mu, nu);
  std::vector<Atom> atoms;
  atoms.reserve(mu.support_size() + nu.support_size());
  for (const auto& a : mu.atoms()) atoms.push_back({a.element, alpha * a.amplitude});
  for (const auto& a : nu.atoms()) atoms.push_back({a.element, beta * a.amplitude});
  return DiscreteMeasure(mu.group(), std::move(atoms));
}

AtomList sorted_atoms(const DiscreteMeasure& mu) {
  AtomList list(mu.atoms().begin(), mu.atoms().end());
  // Input is already sorted by coordinates, so a stable sort on modulus
  // leaves ties in lexicographic order.
  std::stable_sort(list.begin(), list.end(), [](const Atom& x, const Atom& y) {
    return std::abs(x.amplitude) > std::abs(y.amplitude);
  });
  return list;
}

double point_mass_at_zero_of_selfconv(const DiscreteMeasure& mu) {
  double total = 0.0;
  for (const auto& a : mu.atoms()) total += std::norm(a.amplitude);
  return total;
}

double distance_to_identity(const DiscreteMeasure& mu) {
  const GroupElement zero = mu.group().zero();
  double total = 0.0;
  bool saw_zero = false;
  for (const auto& a : mu.atoms()) {
    if (a.element == zero) {
      total += std::abs(a.amplitude - 1.0);
      saw_zero = true;
    } else {
      total += std::abs(a.amplitude);
    }
  }
  return saw_zero ? total : total + 1.0;
}

}  // namespace measinv
