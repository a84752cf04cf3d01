#include "optimix/choice_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optimix {

Design::Design(int n_sets, int n_alternatives, int q)
    : n_sets_(n_sets), n_alternatives_(n_alternatives), q_(q) {
  if (n_sets < 1) throw Error("a design needs at least one choice set");
  if (n_alternatives < 2) throw Error("choice sets need at least two alternatives");
  if (q < 2) throw Error("mixtures need at least two ingredients");
  coords_.assign(static_cast<std::size_t>(n_sets) * n_alternatives * q, 0.0);
}

Design Design::from_points(
    const std::vector<std::vector<std::vector<double>>>& sets) {
  if (sets.empty() || sets.front().empty())
    throw Error("cannot build a design from an empty point list");
  const int S = static_cast<int>(sets.size());
  const int J = static_cast<int>(sets.front().size());
  const int q = static_cast<int>(sets.front().front().size());
  Design d(S, J, q);
  for (int s = 0; s < S; ++s) {
    if (static_cast<int>(sets[s].size()) != J)
      throw Error("choice set " + std::to_string(s + 1) + " has " +
                  std::to_string(sets[s].size()) + " alternatives, expected " +
                  std::to_string(J));
    for (int j = 0; j < J; ++j) {
      if (static_cast<int>(sets[s][j].size()) != q)
        throw Error("alternative dimension mismatch in choice set " +
                    std::to_string(s + 1));
      std::copy(sets[s][j].begin(), sets[s][j].end(), d.point(s, j).begin());
    }
  }
  return d;
}

Design Design::concatenate(const Design& a, const Design& b) {
  if (a.n_alternatives_ != b.n_alternatives_ || a.q_ != b.q_)
    throw Error("cannot concatenate designs of different shapes");
  Design d(a.n_sets_ + b.n_sets_, a.n_alternatives_, a.q_);
  std::copy(a.coords_.begin(), a.coords_.end(), d.coords_.begin());
  std::copy(b.coords_.begin(), b.coords_.end(),
            d.coords_.begin() + static_cast<std::ptrdiff_t>(a.coords_.size()));
  return d;
}

void Design::validate(double tol) const {
  for (int s = 0; s < n_sets_; ++s)
    for (int j = 0; j < n_alternatives_; ++j)
      if (!is_mixture_point(point(s, j), tol))
        throw Error("choice set " + std::to_string(s + 1) + ", alternative " +
                    std::to_string(j + 1) + " is not on the simplex");
}

void softmax(std::span<const double> utilities, std::span<double> probs) {
  const double top = *std::max_element(utilities.begin(), utilities.end());
  double sum = 0.0;
  for (std::size_t j = 0; j < utilities.size(); ++j) {
    probs[j] = std::exp(utilities[j] - top);
    sum += probs[j];
  }
  for (std::size_t j = 0; j < utilities.size(); ++j) probs[j] /= sum;
}

namespace {

void check_beta(const ParamVector& beta, const ModelSpec& spec) {
  if (beta.size() != spec.r())
    throw Error("parameter vector has length " + std::to_string(beta.size()) +
                ", model expects r = " + std::to_string(spec.r()));
}

}  // namespace

std::vector<double> choice_probabilities(
    const std::vector<std::vector<double>>& alternatives,
    const ParamVector& beta, const ModelSpec& spec) {
  check_beta(beta, spec);
  std::vector<double> u(alternatives.size());
  std::vector<double> f(static_cast<std::size_t>(spec.r()));
  for (std::size_t j = 0; j < alternatives.size(); ++j) {
    scheffe_expand(alternatives[j], spec, f);
    u[j] = Eigen::Map<const Eigen::VectorXd>(f.data(), spec.r()).dot(beta);
  }
  std::vector<double> p(alternatives.size());
  softmax(u, p);
  return p;
}

std::vector<double> choice_probabilities(const Design& design, int s,
                                         const ParamVector& beta,
                                         const ModelSpec& spec) {
  check_beta(beta, spec);
  const Eigen::MatrixXd X = set_model_matrix(design, s, spec);
  const Eigen::VectorXd u = X * beta;
  std::vector<double> p(static_cast<std::size_t>(u.size()));
  softmax({u.data(), static_cast<std::size_t>(u.size())}, p);
  return p;
}

Eigen::MatrixXd set_model_matrix(const Design& design, int s,
                                 const ModelSpec& spec) {
  if (design.q() != spec.q())
    throw Error("design has q = " + std::to_string(design.q()) +
                ", model expects q = " + std::to_string(spec.q()));
  const int J = design.n_alternatives();
  // Row-major so each row is a contiguous expansion buffer.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> X(
      J, spec.r());
  for (int j = 0; j < J; ++j)
    scheffe_expand(design.point(s, j), spec,
                   {X.row(j).data(), static_cast<std::size_t>(spec.r())});
  return X;
}

void accumulate_set_information(
    const Eigen::Ref<const Eigen::MatrixXd>& model_matrix,
    const ParamVector& beta, InfoMatrix& info, std::span<double> scratch) {
  const auto J = static_cast<std::size_t>(model_matrix.rows());
  const auto r = model_matrix.cols();
  std::span<double> u = scratch.subspan(0, J);
  std::span<double> p = scratch.subspan(J, J);
  std::span<double> mean_buf = scratch.subspan(2 * J, static_cast<std::size_t>(r));

  for (std::size_t j = 0; j < J; ++j)
    u[j] = model_matrix.row(static_cast<Eigen::Index>(j)).dot(beta);
  softmax(u, p);

  // X^T (P - p p^T) X = sum_j p_j (f_j - fbar)(f_j - fbar)^T, fbar = X^T p.
  Eigen::Map<Eigen::VectorXd> fbar(mean_buf.data(), r);
  fbar.setZero();
  for (std::size_t j = 0; j < J; ++j)
    fbar.noalias() += p[j] * model_matrix.row(static_cast<Eigen::Index>(j)).transpose();
  for (std::size_t j = 0; j < J; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    for (Eigen::Index a = 0; a < r; ++a) {
      const double da = p[j] * (model_matrix(jj, a) - fbar[a]);
      if (da == 0.0) continue;
      for (Eigen::Index b = 0; b <= a; ++b)
        info(a, b) += da * (model_matrix(jj, b) - fbar[b]);
    }
  }
  for (Eigen::Index a = 0; a < r; ++a)
    for (Eigen::Index b = 0; b < a; ++b) info(b, a) = info(a, b);
}

InfoMatrix information_matrix(const Design& design, const ParamVector& beta,
                              const ModelSpec& spec) {
  check_beta(beta, spec);
  const int J = design.n_alternatives();
  InfoMatrix info = InfoMatrix::Zero(spec.r(), spec.r());
  std::vector<double> scratch(static_cast<std::size_t>(2 * J + spec.r()));
  for (int s = 0; s < design.n_sets(); ++s)
    accumulate_set_information(set_model_matrix(design, s, spec), beta, info,
                               scratch);
  return info;
}

}  // namespace optimix
