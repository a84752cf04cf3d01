#include "optimix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "optimix/parallel.hpp"

namespace optimix {

double prediction_variance(std::span<const double> x, const Design& design,
                           const ParamVector& beta, const ModelSpec& spec) {
  const auto chol = CholeskyFactor::compute(information_matrix(design, beta, spec));
  if (!chol) throw Error("information matrix is singular; prediction variance undefined");
  const auto f = scheffe_expand(x, spec);
  return chol->inverse_quadratic_form(
      Eigen::Map<const Eigen::VectorXd>(f.data(), spec.r()));
}

namespace {

double median_of_sorted(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double FdsSeries::median() const {
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& p : points) v.push_back(p.variance);
  return median_of_sorted(v);
}

double FdsSeries::mean() const {
  if (points.empty()) return 0.0;
  double s = 0.0;
  for (const auto& p : points) s += p.variance;
  return s / static_cast<double>(points.size());
}

FdsSeries fds_data(const Design& design, const DrawMatrix& draws,
                   const ModelSpec& spec, int n_points, std::uint64_t seed,
                   int threads) {
  if (n_points < 100) throw Error("FDS needs at least 100 sample points");
  if (draws.cols() != spec.r()) throw Error("draw matrix width does not match r");

  std::vector<CholeskyFactor> factors;
  FdsSeries out;
  out.n_points = n_points;
  out.seed = seed;
  for (Eigen::Index d = 0; d < draws.rows(); ++d) {
    auto chol = CholeskyFactor::compute(
        information_matrix(design, draws.row(d).transpose(), spec));
    if (chol) factors.push_back(std::move(*chol));
    else ++out.draws_excluded;
  }
  out.draws_used = static_cast<int>(factors.size());
  if (factors.empty())
    throw Error("information matrix is singular for every draw; no FDS data");

  const auto pts = sample_simplex_uniform(spec.q(), n_points, seed);
  std::vector<double> variance(static_cast<std::size_t>(n_points));
  parallel_for(n_points, threads, [&](int k) {
    const auto f = scheffe_expand(pts[static_cast<std::size_t>(k)], spec);
    const Eigen::Map<const Eigen::VectorXd> fv(f.data(), spec.r());
    double sum = 0.0;
    for (const auto& chol : factors) sum += chol.inverse_quadratic_form(fv);
    variance[static_cast<std::size_t>(k)] = sum / static_cast<double>(factors.size());
  });
  std::sort(variance.begin(), variance.end());

  out.points.resize(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k)
    out.points[static_cast<std::size_t>(k)] = {(k + 0.5) / n_points,
                                               variance[static_cast<std::size_t>(k)]};
  return out;
}

std::vector<double> utility_balance(const Design& design, const DrawMatrix& draws,
                                    const ModelSpec& spec) {
  if (draws.rows() < 1) throw Error("utility balance needs at least one draw");
  std::vector<double> balance(static_cast<std::size_t>(design.n_sets()), 0.0);
  for (int s = 0; s < design.n_sets(); ++s) {
    const Eigen::MatrixXd X = set_model_matrix(design, s, spec);
    for (Eigen::Index d = 0; d < draws.rows(); ++d) {
      const Eigen::VectorXd u = X * draws.row(d).transpose();
      std::vector<double> p(static_cast<std::size_t>(u.size()));
      softmax({u.data(), static_cast<std::size_t>(u.size())}, p);
      balance[static_cast<std::size_t>(s)] +=
          std::accumulate(p.begin(), p.end(), 1.0, std::multiplies<>());
    }
    balance[static_cast<std::size_t>(s)] /= static_cast<double>(draws.rows());
  }
  return balance;
}

std::vector<std::vector<double>> within_set_distances(const Design& design) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(design.n_sets()));
  for (int s = 0; s < design.n_sets(); ++s)
    for (int j = 0; j < design.n_alternatives(); ++j)
      for (int k = j + 1; k < design.n_alternatives(); ++k) {
        const auto a = design.point(s, j);
        const auto b = design.point(s, k);
        double sq = 0.0;
        for (int i = 0; i < design.q(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
        out[static_cast<std::size_t>(s)].push_back(std::sqrt(sq));
      }
  return out;
}

SeriesSummary summarize(std::vector<double> values) {
  if (values.empty()) return {};
  std::sort(values.begin(), values.end());
  return {values.front(), median_of_sorted(values), values.back()};
}

DiagnosticsReport make_report(const Design& design, const DrawMatrix& draws,
                              const ParamVector& prior_mean, const ModelSpec& spec,
                              int n_points, std::uint64_t seed,
                              BalanceMode balance_mode, int threads) {
  DiagnosticsReport rep;
  rep.fds = fds_data(design, draws, spec, n_points, seed, threads);
  rep.balance_mode = balance_mode;
  if (balance_mode == BalanceMode::PriorMean) {
    const DrawMatrix one = prior_mean.transpose();
    rep.balance = utility_balance(design, one, spec);
  } else {
    rep.balance = utility_balance(design, draws, spec);
  }
  rep.distances = within_set_distances(design);

  std::vector<double> fv;
  fv.reserve(rep.fds.points.size());
  for (const auto& p : rep.fds.points) fv.push_back(p.variance);
  rep.fds_summary = summarize(std::move(fv));
  rep.balance_summary = summarize(rep.balance);
  std::vector<double> flat;
  for (const auto& set : rep.distances) flat.insert(flat.end(), set.begin(), set.end());
  rep.distance_summary = summarize(std::move(flat));
  return rep;
}

}  // namespace optimix
