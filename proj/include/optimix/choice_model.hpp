#ifndef OPTIMIX_CHOICE_MODEL_HPP
#define OPTIMIX_CHOICE_MODEL_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "optimix/simplex.hpp"

namespace optimix {

using ParamVector = Eigen::VectorXd;
using InfoMatrix = Eigen::MatrixXd;

/// S choice sets of J alternatives, each a mixture of q ingredients.
/// Coordinates are stored contiguously, set-major then alternative-major.
class Design {
 public:
  Design(int n_sets, int n_alternatives, int q);

  /// Builds a design from S x J nested points; every set must have J points.
  static Design from_points(
      const std::vector<std::vector<std::vector<double>>>& sets);

  int n_sets() const { return n_sets_; }
  int n_alternatives() const { return n_alternatives_; }
  int q() const { return q_; }

  std::span<double> point(int s, int j) {
    return {coords_.data() + offset(s, j), static_cast<std::size_t>(q_)};
  }
  std::span<const double> point(int s, int j) const {
    return {coords_.data() + offset(s, j), static_cast<std::size_t>(q_)};
  }
  std::span<const double> coordinates() const { return coords_; }

  /// Concatenation of the choice sets of a and b.
  static Design concatenate(const Design& a, const Design& b);

  /// Throws optimix::Error naming the first row off the simplex.
  void validate(double tol = kSimplexTol) const;

  friend bool operator==(const Design&, const Design&) = default;

 private:
  std::size_t offset(int s, int j) const {
    return (static_cast<std::size_t>(s) * n_alternatives_ + j) * q_;
  }

  int n_sets_;
  int n_alternatives_;
  int q_;
  std::vector<double> coords_;
};

/// Softmax with max-subtraction, written into probs.
void softmax(std::span<const double> utilities, std::span<double> probs);

std::vector<double> choice_probabilities(
    const std::vector<std::vector<double>>& alternatives,
    const ParamVector& beta, const ModelSpec& spec);
std::vector<double> choice_probabilities(const Design& design, int s,
                                         const ParamVector& beta,
                                         const ModelSpec& spec);

/// Model matrix of choice set s: J rows of f(x_js).
Eigen::MatrixXd set_model_matrix(const Design& design, int s,
                                 const ModelSpec& spec);

/// Adds X_s^T (P_s - p_s p_s^T) X_s to info, where the rows of model_matrix
/// are the expansions of the set's alternatives. scratch needs 2*J + r doubles.
void accumulate_set_information(const Eigen::Ref<const Eigen::MatrixXd>& model_matrix,
                                const ParamVector& beta, InfoMatrix& info,
                                std::span<double> scratch);

InfoMatrix information_matrix(const Design& design, const ParamVector& beta,
                              const ModelSpec& spec);

}  // namespace optimix

#endif  // OPTIMIX_CHOICE_MODEL_HPP
