#ifndef OPTIMIX_DIAGNOSTICS_HPP
#define OPTIMIX_DIAGNOSTICS_HPP

#include <cstdint>
#include <vector>

#include "optimix/criteria.hpp"

namespace optimix {

/// f(x)^T I^{-1}(X, beta) f(x). Throws optimix::Error when I is singular.
double prediction_variance(std::span<const double> x, const Design& design,
                           const ParamVector& beta, const ModelSpec& spec);

struct FdsPoint {
  double fraction = 0.0;
  double variance = 0.0;
};

struct FdsSeries {
  std::vector<FdsPoint> points;  ///< sorted by variance, ascending
  int n_points = 0;
  std::uint64_t seed = 0;
  int draws_used = 0;
  int draws_excluded = 0;  ///< draws with singular information

  double median() const;
  /// Mean of the draw-averaged variances over the sample.
  double mean() const;
};

/// Fraction-of-design-space data: n_points uniform simplex points, each with
/// its prediction variance averaged over the usable draws, sorted and paired
/// with fractions (k + 0.5) / n_points, k = 0, 1, .... Independent of the
/// thread count.
FdsSeries fds_data(const Design& design, const DrawMatrix& draws,
                   const ModelSpec& spec, int n_points, std::uint64_t seed,
                   int threads = 1);

/// Per-set product of the J choice probabilities, averaged over draws.
std::vector<double> utility_balance(const Design& design, const DrawMatrix& draws,
                                    const ModelSpec& spec);

/// Per-set list of pairwise Euclidean distances between alternatives, pairs
/// in (j, k) order with j < k.
std::vector<std::vector<double>> within_set_distances(const Design& design);

struct SeriesSummary {
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

SeriesSummary summarize(std::vector<double> values);

enum class BalanceMode { DrawAverage, PriorMean };

struct DiagnosticsReport {
  FdsSeries fds;
  std::vector<double> balance;
  std::vector<std::vector<double>> distances;
  BalanceMode balance_mode = BalanceMode::DrawAverage;
  SeriesSummary fds_summary;
  SeriesSummary balance_summary;
  SeriesSummary distance_summary;
};

/// Builds every diagnostic. prior_mean is used for PriorMean balance.
DiagnosticsReport make_report(const Design& design, const DrawMatrix& draws,
                              const ParamVector& prior_mean, const ModelSpec& spec,
                              int n_points, std::uint64_t seed,
                              BalanceMode balance_mode, int threads = 1);

}  // namespace optimix

#endif  // OPTIMIX_DIAGNOSTICS_HPP
