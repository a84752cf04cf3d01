#include "optimix/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace optimix {

std::string_view to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::LocalD: return "local_d";
    case CriterionKind::BayesD: return "bayes_d";
    case CriterionKind::LocalI: return "local_i";
    case CriterionKind::BayesI: return "bayes_i";
  }
  return "unknown";
}

CriterionKind parse_criterion_kind(std::string_view name) {
  if (name == "local_d") return CriterionKind::LocalD;
  if (name == "bayes_d") return CriterionKind::BayesD;
  if (name == "local_i") return CriterionKind::LocalI;
  if (name == "bayes_i") return CriterionKind::BayesI;
  throw Error("unknown criterion '" + std::string(name) +
              "' (expected local_d, bayes_d, local_i or bayes_i)");
}

std::optional<CholeskyFactor> CholeskyFactor::compute(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) return std::nullopt;
  double scale = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) scale = std::max(scale, a(k, k));
  if (!(scale > 0.0) || !std::isfinite(scale)) return std::nullopt;
  const double floor = 1e-12 * scale;

  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > floor)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return CholeskyFactor(std::move(l));
}

double CholeskyFactor::log_det() const {
  double s = 0.0;
  for (Eigen::Index k = 0; k < lower_.rows(); ++k) s += std::log(lower_(k, k));
  return 2.0 * s;
}

void CholeskyFactor::solve_inplace(Eigen::Ref<Eigen::VectorXd> b) const {
  const Eigen::Index n = lower_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = b[i];
    for (Eigen::Index k = 0; k < i; ++k) v -= lower_(i, k) * b[k];
    b[i] = v / lower_(i, i);
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double v = b[i];
    for (Eigen::Index k = i + 1; k < n; ++k) v -= lower_(k, i) * b[k];
    b[i] = v / lower_(i, i);
  }
}

double CholeskyFactor::inverse_quadratic_form(const Eigen::VectorXd& b) const {
  // b^T A^{-1} b = |L^{-1} b|^2
  const Eigen::Index n = lower_.rows();
  double sum = 0.0;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = b[i];
    for (Eigen::Index k = 0; k < i; ++k) v -= lower_(i, k) * y[k];
    y[i] = v / lower_(i, i);
    sum += y[i] * y[i];
  }
  return sum;
}

double CholeskyFactor::trace_inverse_product(const Eigen::MatrixXd& w) const {
  double trace = 0.0;
  Eigen::VectorXd col(lower_.rows());
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    col = w.col(c);
    solve_inplace(col);
    trace += col[c];
  }
  return trace;
}

double simplex_monomial_integral(const std::vector<int>& exponents) {
  // prod Gamma(p_i + 1) / Gamma(q + sum p_i), in log space.
  double log_num = 0.0;
  int total = 0;
  for (int p : exponents) {
    log_num += std::lgamma(p + 1.0);
    total += p;
  }
  return std::exp(log_num - std::lgamma(static_cast<double>(exponents.size()) + total));
}

MomentsMatrix::MomentsMatrix(const ModelSpec& spec)
    : spec_(spec), w_(spec.r(), spec.r()) {
  const auto& mono = spec.monomials();
  std::vector<int> sum(static_cast<std::size_t>(spec.q()));
  for (int a = 0; a < spec.r(); ++a)
    for (int b = 0; b <= a; ++b) {
      for (int i = 0; i < spec.q(); ++i) sum[i] = mono[a][i] + mono[b][i];
      w_(a, b) = w_(b, a) = simplex_monomial_integral(sum);
    }
}

std::shared_ptr<const MomentsMatrix> moments_matrix(const ModelSpec& spec) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MomentsMatrix>> cache;
  const std::pair key{spec.q(), static_cast<int>(spec.order())};
  std::lock_guard lock(mutex);
  auto& slot = cache[key];
  if (!slot) slot = std::make_shared<const MomentsMatrix>(spec);
  return slot;
}

std::optional<double> d_value(const InfoMatrix& info) {
  const auto chol = CholeskyFactor::compute(info);
  if (!chol) return std::nullopt;
  const double v = -chol->log_det() / static_cast<double>(info.rows());
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<double> i_value(const InfoMatrix& info, const Eigen::MatrixXd& w) {
  const auto chol = CholeskyFactor::compute(info);
  if (!chol) return std::nullopt;
  const double v = chol->trace_inverse_product(w);
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

double log_mean_exp(std::span<const double> values) {
  const double top = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum / static_cast<double>(values.size()));
}

CriterionValue combine_draws(CriterionKind kind,
                             std::span<const std::optional<double>> per_draw) {
  if (per_draw.empty()) return CriterionValue::invalid(kind);
  std::vector<double> vals;
  vals.reserve(per_draw.size());
  for (const auto& v : per_draw) {
    if (!v) return CriterionValue::invalid(kind);
    vals.push_back(*v);
  }
  double out;
  if (is_i_criterion(kind))
    out = std::accumulate(vals.begin(), vals.end(), 0.0) /
          static_cast<double>(vals.size());
  else
    out = log_mean_exp(vals);
  if (!std::isfinite(out)) return CriterionValue::invalid(kind);
  return {kind, out, true};
}

namespace {

void check_draws(const DrawMatrix& draws, const ModelSpec& spec) {
  if (draws.rows() < 1) throw Error("at least one prior draw is required");
  if (draws.cols() != spec.r())
    throw Error("draw matrix has " + std::to_string(draws.cols()) +
                " columns, model expects r = " + std::to_string(spec.r()));
}

CriterionValue over_draws(CriterionKind kind, const Design& design,
                          const DrawMatrix& draws, const ModelSpec& spec,
                          const MomentsMatrix* w) {
  check_draws(draws, spec);
  std::vector<std::optional<double>> per(static_cast<std::size_t>(draws.rows()));
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    const InfoMatrix info =
        information_matrix(design, draws.row(i).transpose(), spec);
    per[static_cast<std::size_t>(i)] =
        is_i_criterion(kind) ? i_value(info, w->matrix()) : d_value(info);
    if (!per[static_cast<std::size_t>(i)]) return CriterionValue::invalid(kind);
  }
  return combine_draws(kind, per);
}

}  // namespace

CriterionValue local_d(const Design& design, const ParamVector& beta,
                       const ModelSpec& spec) {
  const DrawMatrix one = beta.transpose();
  return over_draws(CriterionKind::LocalD, design, one, spec, nullptr);
}

CriterionValue bayes_d(const Design& design, const DrawMatrix& draws,
                       const ModelSpec& spec) {
  return over_draws(CriterionKind::BayesD, design, draws, spec, nullptr);
}

CriterionValue local_i(const Design& design, const ParamVector& beta,
                       const ModelSpec& spec, const MomentsMatrix& w) {
  const DrawMatrix one = beta.transpose();
  return over_draws(CriterionKind::LocalI, design, one, spec, &w);
}

CriterionValue bayes_i(const Design& design, const DrawMatrix& draws,
                       const ModelSpec& spec, const MomentsMatrix& w) {
  return over_draws(CriterionKind::BayesI, design, draws, spec, &w);
}

CriterionValue evaluate_criterion(CriterionKind kind, const Design& design,
                                  const DrawMatrix& draws, const ModelSpec& spec,
                                  const MomentsMatrix* w) {
  if (is_i_criterion(kind) && w == nullptr)
    throw Error("I-criteria need a moments matrix");
  if ((kind == CriterionKind::LocalD || kind == CriterionKind::LocalI) &&
      draws.rows() != 1)
    throw Error("local criteria take exactly one parameter vector");
  return over_draws(kind, design, draws, spec, w);
}

}  // namespace optimix
