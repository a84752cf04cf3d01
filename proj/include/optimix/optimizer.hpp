#ifndef OPTIMIX_OPTIMIZER_HPP
#define OPTIMIX_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "optimix/criteria.hpp"

namespace optimix {

struct BrentResult {
  double x = 0.0;
  double fx = 0.0;
  int evaluations = 0;
};

/// Brent's derivative-free minimizer on [lo, hi]: golden-section steps with
/// successive parabolic interpolation. tol is the absolute x tolerance.
BrentResult brent_minimize(const std::function<double(double)>& objective,
                           double lo, double hi, double tol, int max_iter = 200);

/// Value Brent sees for a numerically singular design.
inline constexpr double kInvalidPenalty = 1e30;

struct OptimizerConfig {
  int n_starts = 80;
  int max_sweeps = 100;
  double brent_tol = 1e-4;
  double improvement_tol = 1e-6;
  std::uint64_t seed = 1;
  CriterionKind criterion = CriterionKind::BayesD;
  /// Worker threads over starts; 0 uses all cores.
  int threads = 1;
  /// Re-evaluates the full criterion after every accepted move and throws
  /// std::logic_error if the incremental value disagrees, the value went up,
  /// or the moved alternative left the simplex. Slow; meant for tests.
  bool check_invariants = false;

  void validate() const;
};

struct StartRecord {
  int start = 0;
  CriterionValue initial;
  CriterionValue final;
  int sweeps = 0;
  int accepted_moves = 0;
};

struct OptimResult {
  Design design;
  CriterionValue criterion;
  int best_start = -1;
  std::vector<StartRecord> history;

  bool success() const { return criterion.valid; }
};

/// Uniform random initial design for one start; deterministic in (seed, start).
Design random_design(int n_sets, int n_alternatives, int q, std::uint64_t seed,
                     int start);

/// Multi-start coordinate exchange. For local criteria draws holds the single
/// point estimate as its only row. w must be given for I-criteria.
OptimResult coordinate_exchange(const ModelSpec& spec, const DrawMatrix& draws,
                                int n_sets, int n_alternatives,
                                const OptimizerConfig& config,
                                const MomentsMatrix* w = nullptr);

/// Runs one start from the given design (used by coordinate_exchange).
StartRecord improve_design(Design& design, const ModelSpec& spec,
                           const DrawMatrix& draws, const OptimizerConfig& config,
                           const MomentsMatrix* w);

}  // namespace optimix

#endif  // OPTIMIX_OPTIMIZER_HPP
