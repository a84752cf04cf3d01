#ifndef OPTIMIX_CRITERIA_HPP
#define OPTIMIX_CRITERIA_HPP

#include <memory>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "optimix/choice_model.hpp"

namespace optimix {

/// R x r matrix of prior draws, one parameter vector per row.
using DrawMatrix = Eigen::MatrixXd;

enum class CriterionKind { LocalD, BayesD, LocalI, BayesI };

std::string_view to_string(CriterionKind kind);
CriterionKind parse_criterion_kind(std::string_view name);
inline bool is_i_criterion(CriterionKind k) {
  return k == CriterionKind::LocalI || k == CriterionKind::BayesI;
}

/// Criterion value, lower is better. An invalid value (numerically singular
/// information) compares worse than every valid one.
struct CriterionValue {
  CriterionKind kind = CriterionKind::BayesD;
  double value = 0.0;
  bool valid = false;

  static CriterionValue invalid(CriterionKind k) { return {k, 0.0, false}; }

  bool better_than(const CriterionValue& other) const {
    if (!valid) return false;
    if (!other.valid) return true;
    return value < other.value;
  }
};

/// Cholesky factor of a symmetric positive definite matrix.
///
/// A pivot below 1e-12 times the largest diagonal entry of the input marks the
/// matrix singular; no jitter is ever added.
class CholeskyFactor {
 public:
  static std::optional<CholeskyFactor> compute(const Eigen::MatrixXd& a);

  int size() const { return static_cast<int>(lower_.rows()); }
  const Eigen::MatrixXd& lower() const { return lower_; }
  double log_det() const;
  /// Solves A x = b in place.
  void solve_inplace(Eigen::Ref<Eigen::VectorXd> b) const;
  /// b^T A^{-1} b.
  double inverse_quadratic_form(const Eigen::VectorXd& b) const;
  /// trace(A^{-1} W) for symmetric W.
  double trace_inverse_product(const Eigen::MatrixXd& w) const;

 private:
  explicit CholeskyFactor(Eigen::MatrixXd lower) : lower_(std::move(lower)) {}
  Eigen::MatrixXd lower_;
};

/// Simplex moments of f(x) f(x)^T, integrated against dx_1 ... dx_{q-1}.
class MomentsMatrix {
 public:
  explicit MomentsMatrix(const ModelSpec& spec);

  const ModelSpec& spec() const { return spec_; }
  const Eigen::MatrixXd& matrix() const { return w_; }

 private:
  ModelSpec spec_;
  Eigen::MatrixXd w_;
};

/// Closed-form integral of prod x_i^{p_i} over the simplex.
double simplex_monomial_integral(const std::vector<int>& exponents);

/// Cached moments matrix; built once per (q, order) and shared read-only.
std::shared_ptr<const MomentsMatrix> moments_matrix(const ModelSpec& spec);

/// -(1/r) log det I, nullopt when I is singular.
std::optional<double> d_value(const InfoMatrix& info);
/// trace(I^{-1} W), nullopt when I is singular.
std::optional<double> i_value(const InfoMatrix& info, const Eigen::MatrixXd& w);

CriterionValue local_d(const Design& design, const ParamVector& beta,
                       const ModelSpec& spec);
CriterionValue bayes_d(const Design& design, const DrawMatrix& draws,
                       const ModelSpec& spec);
CriterionValue local_i(const Design& design, const ParamVector& beta,
                       const ModelSpec& spec, const MomentsMatrix& w);
CriterionValue bayes_i(const Design& design, const DrawMatrix& draws,
                       const ModelSpec& spec, const MomentsMatrix& w);

/// log(mean(exp(values))) without overflow.
double log_mean_exp(std::span<const double> values);

/// Combines per-draw values into a criterion: log-mean-exp of D values or the
/// arithmetic mean of I values. Empty or any-missing input gives invalid.
CriterionValue combine_draws(CriterionKind kind,
                             std::span<const std::optional<double>> per_draw);

/// Dispatches on kind. For local kinds draws must hold exactly one row (the
/// point estimate). w is required for I kinds.
CriterionValue evaluate_criterion(CriterionKind kind, const Design& design,
                                  const DrawMatrix& draws, const ModelSpec& spec,
                                  const MomentsMatrix* w);

}  // namespace optimix

#endif  // OPTIMIX_CRITERIA_HPP
