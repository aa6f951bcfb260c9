#include "measinv/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "measinv/bounds.hpp"
#include "measinv/dyadic.hpp"
#include "measinv/error.hpp"
#include "measinv/fourier.hpp"
#include "measinv/spectra.hpp"

namespace measinv {

namespace {

using cplx = std::complex<double>;
using Amplitudes = std::vector<cplx>;

constexpr double kViolationMargin = 1e-6;
constexpr double kVerifySlack = 1e-9;

// Score to maximize; std::nullopt marks an infeasible point.
using Objective = std::function<std::optional<double>(const Amplitudes&)>;
// Checked on every new incumbent.
using Audit = std::function<bool(const Amplitudes&)>;

struct RestartResult {
  Amplitudes best;
  double best_score = -std::numeric_limits<double>::infinity();
  bool audit_ok = true;
  std::size_t audited = 0;
};

double l1(const Amplitudes& a) {
  double total = 0.0;
  for (const auto& v : a) total += std::abs(v);
  return total;
}

void project_to_ball(Amplitudes& a) {
  const double norm = l1(a);
  if (norm > 1.0) {
    for (auto& v : a) v /= norm;
  }
}

RestartResult anneal(const SearchConfig& cfg, std::size_t restart, const Amplitudes& origin,
                     const Objective& objective, const Audit* audit) {
  std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(restart));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, origin.size() - 1);

  auto draw = [&](double s) { return cplx(s * gauss(rng), cfg.real_only ? 0.0 : s * gauss(rng)); };

  Amplitudes current = origin;
  std::optional<double> score = objective(current);
  if (!score) throw Error(ErrorKind::Infeasible, "no feasible starting point");

  // Random start on the segment from the origin towards a random direction,
  // shortened until feasible.
  Amplitudes direction(origin.size());
  for (auto& v : direction) v = draw(1.0);
  const double dnorm = l1(direction);
  if (dnorm > 0.0) {
    for (auto& v : direction) v /= dnorm;
    double t = 0.5 * uniform(rng);
    for (int attempt = 0; attempt < 20; ++attempt, t *= 0.5) {
      Amplitudes candidate(origin.size());
      for (std::size_t i = 0; i < origin.size(); ++i) candidate[i] = (1.0 - t) * origin[i] + t * direction[i];
      project_to_ball(candidate);
      if (const auto s = objective(candidate)) {
        current = std::move(candidate);
        score = s;
        break;
      }
    }
  }

  RestartResult result;
  result.best = current;
  result.best_score = *score;
  auto record = [&] {
    if (audit != nullptr) {
      ++result.audited;
      result.audit_ok = (*audit)(result.best) && result.audit_ok;
    }
  };
  record();

  double scale = cfg.initial_scale;
  for (int step = 0; step < cfg.steps; ++step, scale *= cfg.decay) {
    Amplitudes candidate = current;
    candidate[pick(rng)] += draw(scale);
    project_to_ball(candidate);
    const std::optional<double> s = objective(candidate);
    if (!s) continue;
    const bool accept = *s >= *score || uniform(rng) < std::exp((*s - *score) / scale);
    if (!accept) continue;
    current = std::move(candidate);
    score = s;
    if (*score > result.best_score) {
      result.best = current;
      result.best_score = *score;
      record();
    }
  }
  return result;
}

std::vector<RestartResult> run_restarts(const SearchConfig& cfg, const Amplitudes& origin,
                                        const Objective& objective, const Audit* audit) {
  std::vector<RestartResult> results(static_cast<std::size_t>(cfg.restarts));
  std::vector<std::exception_ptr> errors(results.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < results.size(); r = next++) {
      try {
        results[r] = anneal(cfg, r, origin, objective, audit);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::clamp<unsigned>(cfg.workers, 1u, static_cast<unsigned>(results.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

Amplitudes dirac_at_zero(std::size_t dim) {
  Amplitudes a(dim);
  a[0] = 1.0;
  return a;
}

double min_modulus(const Amplitudes& v) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : v) m = std::min(m, std::abs(x));
  return m;
}

// Moduli sorted descending.
std::vector<double> moduli_desc(const Amplitudes& a) {
  std::vector<double> m(a.size());
  std::transform(a.begin(), a.end(), m.begin(), [](const cplx& v) { return std::abs(v); });
  std::sort(m.begin(), m.end(), std::greater<>());
  return m;
}

// inf over T^d of |a_0 + sum_k a_k exp(i theta_k)|: the phases of all atoms
// are free, so this is the distance from 0 to a sum of circles.
double independent_support_min(const Amplitudes& a) {
  double total = 0.0;
  double largest = 0.0;
  for (const auto& v : a) {
    total += std::abs(v);
    largest = std::max(largest, std::abs(v));
  }
  return std::max(0.0, 2.0 * largest - total);
}

void require_finite_within_cap(const SearchConfig& cfg) {
  if (!cfg.group.is_finite()) throw Error(ErrorKind::PreconditionViolated, "search needs a finite group");
  if (cfg.group.order() > cfg.dense_cap) {
    throw Error(ErrorKind::PreconditionViolated, "group order exceeds the dense cap");
  }
}

}  // namespace

void validate(const SearchConfig& cfg) {
  if (!(cfg.delta_target > 0.0)) throw Error(ErrorKind::PreconditionViolated, "delta_target must be positive");
  if (cfg.restarts < 1 || cfg.steps < 1) {
    throw Error(ErrorKind::PreconditionViolated, "restarts and steps must be >= 1");
  }
  if (!(cfg.decay > 0.0 && cfg.decay < 1.0)) throw Error(ErrorKind::PreconditionViolated, "decay must lie in (0, 1)");
  if (!(cfg.initial_scale > 0.0)) throw Error(ErrorKind::PreconditionViolated, "initial scale must be positive");
  if (cfg.delta_target > 1.0) {
    throw Error(ErrorKind::Infeasible, "delta_target > 1 is infeasible under ||mu|| <= 1");
  }
}

std::string_view to_string(AtomClaim claim) {
  switch (claim) {
    case AtomClaim::Sumadw: return "sumadw";
    case AtomClaim::Pocz: return "pocz";
    case AtomClaim::Dyadic: return "dyadic";
  }
  return "unknown";
}

SearchOutcome search_max_inverse_norm(const SearchConfig& cfg) {
  validate(cfg);
  require_finite_within_cap(cfg);
  const GroupSpec& g = cfg.group;
  const DftPlan plan(g.moduli());

  const Objective objective = [&](const Amplitudes& a) -> std::optional<double> {
    Amplitudes v = a;
    plan.forward(v);
    if (min_modulus(v) < cfg.delta_target) return std::nullopt;
    for (auto& x : v) x = 1.0 / x;
    plan.inverse(v);
    return l1(v);
  };

  const std::vector<RestartResult> results = run_restarts(cfg, dirac_at_zero(plan.size()), objective, nullptr);

  std::optional<SearchOutcome> winner;
  std::vector<double> trace;
  for (const auto& r : results) {
    trace.push_back(r.best_score);
    DiscreteMeasure mu = DiscreteMeasure::from_dense(g, r.best);
    const double delta = transform(mu).observed_min;
    if (mu.tv_norm() > 1.0 + kVerifySlack || delta < cfg.delta_target - kVerifySlack) continue;
    const InversionResult inv = dense_invert(mu, cfg.dense_cap);
    if (!winner || inv.inverse_norm > winner->inverse_norm) {
      winner = SearchOutcome{std::move(mu), delta, inv.inverse_norm, std::nullopt, std::nullopt, {}};
    }
  }
  if (!winner) throw Error(ErrorKind::Internal, "no restart produced a verified witness");
  if (winner->delta_achieved > 0.5) winner->latw_curve = 1.0 / (2.0 * winner->delta_achieved - 1.0);
  if (winner->delta_achieved > std::numbers::sqrt2 / 2.0) {
    winner->nikolski_curve = 1.0 / (2.0 * winner->delta_achieved * winner->delta_achieved - 1.0);
  }
  winner->trace = std::move(trace);
  return *winner;
}

AdversarialOutcome adversarial_atom_test(const SearchConfig& cfg_in, AtomClaim claim) {
  SearchConfig cfg = cfg_in;
  validate(cfg);
  const double delta = cfg.delta_target;
  if (!(delta > 0.5)) throw Error(ErrorKind::PreconditionViolated, "atom claims need delta > 1/2");

  Objective objective;
  Audit audit;
  std::function<DiscreteMeasure(const Amplitudes&)> to_measure;
  std::function<bool(const DiscreteMeasure&)> verify_violation;
  std::size_t dim = 0;
  std::optional<DftPlan> plan;

  switch (claim) {
    case AtomClaim::Sumadw: {
      require_finite_within_cap(cfg);
      plan.emplace(cfg.group.moduli());
      dim = plan->size();
      objective = [&](const Amplitudes& a) -> std::optional<double> {
        Amplitudes v = a;
        plan->forward(v);
        if (min_modulus(v) < delta) return std::nullopt;
        const auto m = moduli_desc(a);
        const double x2 = m.size() > 1 ? m[1] : 0.0;
        return -std::min(m[0] - delta * delta, m[0] + x2 - delta);
      };
      to_measure = [&](const Amplitudes& a) { return DiscreteMeasure::from_dense(cfg.group, a); };
      verify_violation = [&](const DiscreteMeasure& mu) {
        return transform(mu).observed_min >= delta - kInequalitySlack && !check_sumadw(mu, delta);
      };
      break;
    }
    case AtomClaim::Dyadic: {
      if (!cfg.group.is_exponent_two()) {
        throw Error(ErrorKind::PreconditionViolated, "dyadic claim needs a group Z_2^n");
      }
      require_finite_within_cap(cfg);
      cfg.real_only = true;
      plan.emplace(cfg.group.moduli());
      dim = plan->size();
      objective = [&](const Amplitudes& a) -> std::optional<double> {
        Amplitudes v = a;
        plan->forward(v);
        if (min_modulus(v) < delta) return std::nullopt;
        return -(moduli_desc(a)[0] - delta);
      };
      to_measure = [&](const Amplitudes& a) { return DiscreteMeasure::from_dense(cfg.group, a); };
      audit = [&](const Amplitudes& a) {
        const AtomCertificate c = greatest_atom_certificate(to_measure(a), delta);
        return c.recursive_agrees;
      };
      verify_violation = [&](const DiscreteMeasure& mu) {
        const std::vector<double> spectrum = wht(DyadicMeasure::from_measure(mu));
        double smallest = std::numeric_limits<double>::infinity();
        for (double v : spectrum) smallest = std::min(smallest, std::abs(v));
        const auto atoms = sorted_atoms(mu);
        const double top = atoms.empty() ? 0.0 : std::abs(atoms.front().amplitude);
        return smallest >= delta - kInequalitySlack && top < delta - kViolationMargin;
      };
      break;
    }
    case AtomClaim::Pocz: {
      if (!cfg.group.is_lattice()) throw Error(ErrorKind::PreconditionViolated, "pocz claim needs a lattice Z^d");
      dim = cfg.group.dimension() + 1;
      objective = [&](const Amplitudes& a) -> std::optional<double> {
        if (independent_support_min(a) < delta) return std::nullopt;
        const auto m = moduli_desc(a);
        double tail = 0.0;
        for (std::size_t k = 1; k < m.size(); ++k) tail += m[k];
        return -(m[0] - delta - tail);
      };
      to_measure = [&](const Amplitudes& a) {
        std::vector<Atom> atoms;
        for (std::size_t k = 0; k < a.size(); ++k) {
          std::vector<std::int64_t> coords(cfg.group.dimension(), 0);
          if (k > 0) coords[k - 1] = 1;
          atoms.push_back({GroupElement{coords}, a[k]});
        }
        return DiscreteMeasure(cfg.group, std::move(atoms));
      };
      verify_violation = [&](const DiscreteMeasure& mu) {
        std::vector<double> x;
        for (const auto& a : sorted_atoms(mu)) x.push_back(std::abs(a.amplitude));
        try {
          return !check_pocz(x, delta);
        } catch (const Error&) {
          return false;
        }
      };
      break;
    }
  }

  const std::vector<RestartResult> results =
      run_restarts(cfg, dirac_at_zero(dim), objective, audit ? &audit : nullptr);

  AdversarialOutcome out{false, std::nullopt, DiscreteMeasure(cfg.group), 0.0, true, 0, {}};
  std::size_t best = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    out.trace.push_back(-results[r].best_score);
    out.recursive_agreement = out.recursive_agreement && results[r].audit_ok;
    out.incumbents_checked += results[r].audited;
    if (results[r].best_score > results[best].best_score) best = r;
  }
  out.extremal = to_measure(results[best].best);
  out.min_margin = -results[best].best_score;

  if (claim == AtomClaim::Pocz) {
    // Cross-check the closed-form infimum against a certified grid.
    const double exact = independent_support_min(results[best].best);
    const SpectrumProfile grid = transform_grid(out.extremal, 64);
    if (exact < grid.certified_min - kVerifySlack || exact > grid.observed_min + kVerifySlack) {
      throw Error(ErrorKind::Internal, "independent-support infimum disagrees with the certified grid");
    }
  }

  if (out.min_margin < -kViolationMargin && verify_violation(out.extremal)) {
    out.violation_found = true;
    out.witness = out.extremal;
  }
  return out;
}

SweepTable gap_sweep(const GroupSpec& group, std::span<const double> deltas, SearchConfig cfg) {
  if (deltas.empty()) throw Error(ErrorKind::PreconditionViolated, "empty delta grid");
  for (double d : deltas) {
    if (!(d > 0.5 && d <= 1.0)) throw Error(ErrorKind::PreconditionViolated, "sweep deltas must lie in (1/2, 1]");
  }
  cfg.group = group;
  SweepTable table;
  table.seed = cfg.seed;
  table.restarts = cfg.restarts;
  for (double d : deltas) {
    SweepRow row;
    row.delta = d;
    row.latw_bound = 1.0 / (2.0 * d - 1.0);
    if (d > std::numbers::sqrt2 / 2.0) row.nikolski_bound = 1.0 / (2.0 * d * d - 1.0);
    cfg.delta_target = d;
    try {
      SearchOutcome found = search_max_inverse_norm(cfg);
      row.best_norm = found.inverse_norm;
      const BoundReport report = build_report(found.best, found.delta_achieved, found.inverse_norm);
      row.bounds_respected = report.violations().empty();
      row.witness = std::move(found.best);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Infeasible) throw;
      row.note = e.what();
    }
    table.rows.push_back(std::move(row));
  }

  std::vector<const SweepRow*> ordered;
  for (const auto& r : table.rows) {
    if (r.best_norm) ordered.push_back(&r);
  }
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->delta < b->delta; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (*ordered[i]->best_norm > *ordered[i - 1]->best_norm + kVerifySlack) table.monotone = false;
  }
  return table;
}

}  // namespace measinv
