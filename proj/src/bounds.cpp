#include "measinv/bounds.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "measinv/error.hpp"

namespace measinv {

namespace {

void require_sequence(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0)) throw Error(ErrorKind::PreconditionViolated, "sequence has a negative term");
    if (i + 1 < x.size() && x[i + 1] > x[i]) {
      throw Error(ErrorKind::PreconditionViolated, "sequence is not non-increasing");
    }
  }
}

double sum(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

std::vector<double> sorted_moduli(const DiscreteMeasure& mu) {
  std::vector<double> out;
  for (const auto& a : sorted_atoms(mu)) out.push_back(std::abs(a.amplitude));
  return out;
}

bool norm_at_most_one(const DiscreteMeasure& mu) { return mu.tv_norm() <= 1.0 + kInequalitySlack; }

}  // namespace

double refined_threshold() { return (-1.0 + std::sqrt(33.0)) / 8.0; }

SumkiCheck check_sumki(std::span<const double> x, double delta) {
  require_sequence(x);
  if (!(delta > 0.5 && delta <= 1.0)) {
    throw Error(ErrorKind::PreconditionViolated, "delta must lie in (1/2, 1]");
  }
  if (sum(x) > 1.0 + kInequalitySlack) throw Error(ErrorKind::PreconditionViolated, "sum x > 1");
  double squares = 0.0;
  for (double v : x) squares += v * v;
  if (squares < delta * delta - kInequalitySlack) {
    throw Error(ErrorKind::PreconditionViolated, "sum x^2 < delta^2");
  }
  const double x1 = x[0];
  const double x2 = x.size() > 1 ? x[1] : 0.0;
  return {delta * delta, delta,
          x1 >= delta * delta - kInequalitySlack && x1 + x2 >= delta - kInequalitySlack};
}

bool check_sumadw(const DiscreteMeasure& mu, double delta) {
  if (!norm_at_most_one(mu)) throw Error(ErrorKind::PreconditionViolated, "||mu|| > 1");
  if (!(delta > 0.5)) throw Error(ErrorKind::PreconditionViolated, "delta must exceed 1/2");
  // The mean of |mu^|^2 is sum |a_x|^2, so a valid lower bound satisfies this.
  if (point_mass_at_zero_of_selfconv(mu) < delta * delta - kInequalitySlack) {
    throw Error(ErrorKind::PreconditionViolated, "delta exceeds the root mean square of |mu^|");
  }
  const std::vector<double> x = sorted_moduli(mu);
  const double x1 = x.empty() ? 0.0 : x[0];
  const double x2 = x.size() > 1 ? x[1] : 0.0;
  return x1 >= delta * delta - kInequalitySlack && x1 + x2 >= delta - kInequalitySlack;
}

bool check_pocz(std::span<const double> x, double delta) {
  require_sequence(x);
  if (x.empty()) throw Error(ErrorKind::PreconditionViolated, "empty sequence");
  if (!(delta > 0.5)) throw Error(ErrorKind::PreconditionViolated, "delta must exceed 1/2");
  if (sum(x) > 1.0 + kInequalitySlack) throw Error(ErrorKind::PreconditionViolated, "sum x > 1");
  double alternating = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) alternating += (i % 2 == 0) ? x[i] : -x[i];
  const double tail = sum(x.subspan(1));
  if (std::abs(alternating) < delta - kInequalitySlack) {
    throw Error(ErrorKind::PreconditionViolated, "|alternating sum| < delta");
  }
  if (std::abs(x[0] - tail) < delta - kInequalitySlack) {
    throw Error(ErrorKind::PreconditionViolated, "|x1 - sum_{n>=2} x_n| < delta");
  }
  return x[0] >= delta + tail - kInequalitySlack;
}

NiesBound bound_nies(double delta) {
  if (!(delta > 0.5)) throw Error(ErrorKind::PreconditionViolated, "delta must exceed 1/2");
  const double disc = 17.0 * delta * delta + 6.0 * delta - 7.0;
  if (disc < 0.0) throw Error(ErrorKind::DomainError, "17 d^2 + 6 d - 7 < 0");
  const double root = std::sqrt(disc);
  NiesBound b{(1.0 - delta + root) / 4.0, 1.5 * delta - 0.5, std::nullopt, std::nullopt};
  if (delta > 2.0 / 3.0) b.norm_bound_linear = 1.0 / (3.0 * delta - 2.0);
  const double denom = -(1.0 + delta) + root;
  if (delta > refined_threshold() && denom > 0.0) b.norm_bound_refined = 2.0 / denom;
  return b;
}

SkonczoBound bound_skonczo(double delta, std::int64_t n) {
  if (!(delta > 0.5 && delta <= 1.0)) {
    throw Error(ErrorKind::PreconditionViolated, "delta must lie in (1/2, 1]");
  }
  if (n < 2) throw Error(ErrorKind::PreconditionViolated, "element order must be >= 2");
  const double s = std::sin(std::numbers::pi / (2.0 * static_cast<double>(n)));
  SkonczoBound b{delta - (1.0 - delta) / (2.0 * (1.0 - s)), std::nullopt};
  if (b.f > 0.5) b.norm_bound = 1.0 / (2.0 * b.f - 1.0);
  return b;
}

NornzCertificate certify_nornz(const DiscreteMeasure& mu, double delta) {
  NornzCertificate c;
  if (!mu.group().is_lattice()) {
    c.reason = "support points have finite order";
    return c;
  }
  if (!(delta > 0.5)) {
    c.reason = "delta <= 1/2";
    return c;
  }
  if (!norm_at_most_one(mu)) {
    c.reason = "||mu|| > 1";
    return c;
  }
  if (mu.empty()) {
    c.reason = "zero measure";
    return c;
  }
  const AtomList atoms = sorted_atoms(mu);
  std::vector<GroupElement> tail;
  for (std::size_t k = 1; k < atoms.size(); ++k) {
    tail.push_back(subtract(mu.group(), atoms[k].element, atoms[0].element));
  }
  if (!rationally_independent(tail)) {
    c.reason = "support translated by the largest atom is rationally dependent";
    return c;
  }
  const double a = std::abs(atoms[0].amplitude);
  c.applies = true;
  c.bound = 1.0 / (2.0 * delta - 1.0);
  c.refined = 1.0 / (2.0 * (mu.tv_norm() + delta - a) - 1.0);
  return c;
}

bool qualitative_invertible(const DiscreteMeasure& mu, double delta) {
  if (!norm_at_most_one(mu)) throw Error(ErrorKind::PreconditionViolated, "||mu|| > 1");
  return delta > 0.5;
}

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::Qualitative: return "qualitative";
    case Theorem::DominantAtom: return "dominant_atom";
    case Theorem::SelfConvolution: return "self_convolution";
    case Theorem::InfiniteOrderGap: return "infinite_order_gap";
    case Theorem::FiniteOrderGap: return "finite_order_gap";
    case Theorem::IndependentSupport: return "independent_support";
    case Theorem::IndependentSupportRefined: return "independent_support_refined";
    case Theorem::ExponentTwo: return "exponent_two";
  }
  return "unknown";
}

const TheoremVerdict& BoundReport::verdict(Theorem t) const {
  for (const auto& v : verdicts) {
    if (v.theorem == t) return v;
  }
  throw Error(ErrorKind::Internal, "report has no verdict for " + std::string(to_string(t)));
}

std::vector<Theorem> BoundReport::violations() const {
  std::vector<Theorem> out;
  if (!observed_inverse_norm) return out;
  for (const auto& v : verdicts) {
    if (v.applies && v.predicted && *observed_inverse_norm > *v.predicted + kNormSlack) {
      out.push_back(v.theorem);
    }
  }
  return out;
}

BoundReport build_report(const DiscreteMeasure& mu, double delta,
                         std::optional<double> observed_inverse_norm) {
  BoundReport r;
  r.delta = delta;
  r.tv = mu.tv_norm();
  r.observed_inverse_norm = observed_inverse_norm;
  const AtomList atoms = sorted_atoms(mu);
  r.a1 = atoms.empty() ? 0.0 : std::abs(atoms[0].amplitude);
  r.a2 = atoms.size() > 1 ? std::abs(atoms[1].amplitude) : 0.0;
  const bool norm_ok = norm_at_most_one(mu);

  auto fails = [](Theorem t, std::string why) { return TheoremVerdict{t, false, std::move(why), std::nullopt}; };
  auto holds = [](Theorem t, std::optional<double> predicted) {
    return TheoremVerdict{t, true, {}, predicted};
  };

  // inf |mu^| > 1/2
  if (!norm_ok) {
    r.verdicts.push_back(fails(Theorem::Qualitative, "||mu|| > 1"));
  } else if (!(delta > 0.5)) {
    r.verdicts.push_back(fails(Theorem::Qualitative, "delta <= 1/2"));
  } else {
    r.verdicts.push_back(holds(Theorem::Qualitative, std::nullopt));
  }

  // Dominant atom lambda with |lambda| > 1/2.
  if (!norm_ok) {
    r.verdicts.push_back(fails(Theorem::DominantAtom, "||mu|| > 1"));
  } else if (!(r.a1 > 0.5)) {
    r.verdicts.push_back(fails(Theorem::DominantAtom, "largest atom <= 1/2"));
  } else {
    r.verdicts.push_back(holds(Theorem::DominantAtom, 1.0 / (2.0 * r.a1 - 1.0)));
  }

  // Self-convolution route.
  if (!norm_ok) {
    r.verdicts.push_back(fails(Theorem::SelfConvolution, "||mu|| > 1"));
  } else if (!(delta > std::numbers::sqrt2 / 2.0)) {
    r.verdicts.push_back(fails(Theorem::SelfConvolution, "delta <= 1/sqrt(2)"));
  } else {
    r.verdicts.push_back(holds(Theorem::SelfConvolution, 1.0 / (2.0 * delta * delta - 1.0)));
  }

  // Order of tau_2 - tau_1.
  std::optional<ElementOrder> gap_order;
  if (atoms.size() >= 2) gap_order = element_order(mu.group(), subtract(mu.group(), atoms[1].element, atoms[0].element));
  auto gap_common = [&](Theorem t) -> std::optional<TheoremVerdict> {
    if (!norm_ok) return fails(t, "||mu|| > 1");
    if (!(delta > 0.5)) return fails(t, "delta <= 1/2");
    if (!gap_order) return fails(t, "fewer than two atoms");
    return std::nullopt;
  };

  if (auto f = gap_common(Theorem::InfiniteOrderGap)) {
    r.verdicts.push_back(*f);
  } else if (gap_order->has_value()) {
    r.verdicts.push_back(fails(Theorem::InfiniteOrderGap, "tau2 - tau1 has finite order"));
  } else {
    const NiesBound b = bound_nies(delta);
    if (b.norm_bound_refined) {
      r.verdicts.push_back(holds(Theorem::InfiniteOrderGap, b.norm_bound_refined));
    } else {
      r.verdicts.push_back(fails(Theorem::InfiniteOrderGap, "delta <= (-1 + sqrt 33) / 8"));
    }
  }

  if (auto f = gap_common(Theorem::FiniteOrderGap)) {
    r.verdicts.push_back(*f);
  } else if (!gap_order->has_value()) {
    r.verdicts.push_back(fails(Theorem::FiniteOrderGap, "tau2 - tau1 has infinite order"));
  } else if (delta > 1.0) {
    r.verdicts.push_back(fails(Theorem::FiniteOrderGap, "delta > 1"));
  } else {
    const SkonczoBound b = bound_skonczo(delta, static_cast<std::int64_t>(**gap_order));
    if (b.norm_bound) {
      r.verdicts.push_back(holds(Theorem::FiniteOrderGap, b.norm_bound));
    } else {
      r.verdicts.push_back(fails(Theorem::FiniteOrderGap, "f(delta) <= 1/2"));
    }
  }

  const NornzCertificate nz = certify_nornz(mu, delta);
  if (nz.applies) {
    r.verdicts.push_back(holds(Theorem::IndependentSupport, nz.bound));
    r.verdicts.push_back(holds(Theorem::IndependentSupportRefined, nz.refined));
  } else {
    r.verdicts.push_back(fails(Theorem::IndependentSupport, nz.reason));
    r.verdicts.push_back(fails(Theorem::IndependentSupportRefined, nz.reason));
  }

  if (!mu.group().is_exponent_two()) {
    r.verdicts.push_back(fails(Theorem::ExponentTwo, "group is not of exponent two"));
  } else if (!mu.is_real()) {
    r.verdicts.push_back(fails(Theorem::ExponentTwo, "measure is not real"));
  } else if (!norm_ok) {
    r.verdicts.push_back(fails(Theorem::ExponentTwo, "||mu|| > 1"));
  } else if (!(delta > 0.5)) {
    r.verdicts.push_back(fails(Theorem::ExponentTwo, "delta <= 1/2"));
  } else {
    r.verdicts.push_back(holds(Theorem::ExponentTwo, 1.0 / (2.0 * delta - 1.0)));
  }
  return r;
}

}  // namespace measinv
