#ifndef OPTIMIX_PRIORS_HPP
#define OPTIMIX_PRIORS_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "optimix/criteria.hpp"

namespace optimix {

/// Number of prime bases available to halton(); caps the draw dimension.
inline constexpr int kMaxHaltonDim = 25;

/// n x dim Halton matrix. Row i holds the radical inverses of index
/// i + 1 + skip, column d in the (d+1)-th prime base.
Eigen::MatrixXd halton(int n, int dim, std::uint64_t skip = 0);

/// Standard normal quantile; throws for u outside (0,1).
double normal_inverse_cdf(double u);

/// Multivariate normal prior on the identified parameters.
struct PriorSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int n_draws = 128;
};

/// Lower triangular L with cov = L L^T. Positive semidefinite input is
/// accepted (zero pivots give zero columns); an indefinite matrix throws.
Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& cov);

/// beta_i = mean + L z_i, with z_i the normal-quantile image of Halton row i.
DrawMatrix prior_draws(const PriorSpec& prior, std::uint64_t skip = 0);

/// FNV-1a hash over the shape and raw bytes of the draws.
std::uint64_t draw_matrix_hash(const DrawMatrix& draws);

}  // namespace optimix

#endif  // OPTIMIX_PRIORS_HPP
