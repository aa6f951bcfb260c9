#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "measinv/inversion.hpp"
#include "measinv/measure.hpp"

namespace measinv {

/// Seeded annealing over measures with ||mu|| <= 1 and min |mu^| >= delta_target.
///
/// Each step perturbs one amplitude by a Gaussian of the current scale
/// (real part only when real_only), rescales onto the l1 unit ball when the
/// norm exceeds one, rejects proposals violating the spectral constraint and
/// accepts the rest by the Metropolis rule at temperature equal to the
/// scale. The scale decays geometrically per step. Restart r draws from a
/// generator seeded with seed ^ r, so results do not depend on `workers`.
struct SearchConfig {
  GroupSpec group = GroupSpec::cyclic(2);
  double delta_target = 0.8;
  bool real_only = false;
  int restarts = 4;
  int steps = 2000;
  double initial_scale = 0.1;
  double decay = 0.999;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t dense_cap = kDefaultDenseCap;
};

void validate(const SearchConfig& cfg);

struct SearchOutcome {
  DiscreteMeasure best;
  double delta_achieved = 0.0;           // exact min over the full dual
  double inverse_norm = 0.0;             // from dense_invert
  std::optional<double> latw_curve;      // 1/(2 delta - 1), delta > 1/2
  std::optional<double> nikolski_curve;  // 1/(2 delta^2 - 1), delta > 1/sqrt 2
  std::vector<double> trace;             // best inverse norm per restart
};

/// Maximizes ||mu^{-1}|| on a finite group. The winner is re-verified with
/// the exact transform and the dense oracle before it is returned. Throws
/// Infeasible when no starting point satisfies the constraints.
SearchOutcome search_max_inverse_norm(const SearchConfig& cfg);

enum class AtomClaim {
  Sumadw,  // |a1| >= delta^2 and |a1| + |a2| >= delta (finite groups)
  Pocz,    // a1 >= delta + sum of the other moduli (support {0, e_1..e_d} in Z^d)
  Dyadic,  // max atom >= delta for real measures on Z_2^n
};
std::string_view to_string(AtomClaim claim);

struct AdversarialOutcome {
  bool violation_found = false;
  std::optional<DiscreteMeasure> witness;  // verified counterexample
  DiscreteMeasure extremal;                // feasible point with the smallest margin
  double min_margin = 0.0;                 // achieved quantity minus claimed bound
  bool recursive_agreement = true;         // Dyadic: inductive certificate matched every incumbent
  std::size_t incumbents_checked = 0;
  std::vector<double> trace;               // smallest margin per restart
};

/// Searches the feasible set for a measure breaking an atom-mass claim by
/// minimizing (achieved quantity - claimed lower bound). A violation is
/// reported only when the margin is below -1e-6 and the witness survives an
/// exact re-check.
AdversarialOutcome adversarial_atom_test(const SearchConfig& cfg, AtomClaim claim);

struct SweepRow {
  double delta = 0.0;
  std::optional<double> best_norm;       // empty when the search was infeasible
  double latw_bound = 0.0;               // 1/(2 delta - 1)
  std::optional<double> nikolski_bound;  // empty means infinite (delta <= 1/sqrt 2)
  bool bounds_respected = true;          // every applicable theorem holds at the witness
  std::optional<DiscreteMeasure> witness;
  std::string note;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::uint64_t seed = 0;
  int restarts = 0;
  bool monotone = true;  // best norm nonincreasing in delta (soft check)
};

SweepTable gap_sweep(const GroupSpec& group, std::span<const double> deltas, SearchConfig cfg);

}  // namespace measinv
