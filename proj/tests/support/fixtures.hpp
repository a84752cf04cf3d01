#ifndef OPTIMIX_TESTS_FIXTURES_HPP
#define OPTIMIX_TESTS_FIXTURES_HPP

#include <string>

#include "optimix/io.hpp"
#include "optimix/priors.hpp"

namespace optimix::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(OPTIMIX_FIXTURE_DIR) + "/" + name;
}

inline ModelSpec cubic3() { return {3, ScheffeOrder::SpecialCubic}; }

/// Cocktail experiment prior on the special cubic parameters.
inline PriorSpec cocktail_prior(int n_draws = 128) {
  PriorSpec p;
  p.mean.resize(6);
  p.mean << 1.36, 1.57, 2.47, -0.43, 0.50, 1.09;
  p.cov.resize(6, 6);
  p.cov << 6.14, 5.00, 2.74, -0.43, -2.81, -3.33,
           5.00, 6.76, 4.47, -1.79, -6.13, -3.51,
           2.74, 4.47, 3.45, -1.38, -4.71, -2.17,
          -0.43, -1.79, -1.38, 1.18, 2.39, 0.71,
          -2.81, -6.13, -4.71, 2.39, 7.43, 2.71,
          -3.33, -3.51, -2.17, 0.71, 2.71, 2.49;
  p.n_draws = n_draws;
  return p;
}

inline IngredientBounds cocktail_bounds() { return IngredientBounds({0.3, 0.15, 0.1}); }

/// Artificial sweetener prior with the identified covariance for kappa.
inline PriorSpec sweetener_prior(double kappa, int n_draws = 128) {
  PriorSpec p;
  p.mean.resize(6);
  p.mean << 0.86, 0.21, 3.07, 2.34, 3.24, -20.59;
  p.cov = Eigen::MatrixXd::Identity(6, 6) * kappa;
  p.cov(0, 0) = p.cov(1, 1) = 2.0 * kappa;
  p.cov(0, 1) = p.cov(1, 0) = kappa;
  p.n_draws = n_draws;
  return p;
}

inline Design load_table(const std::string& name) {
  return read_design_csv(fixture_path(name), 3);
}

}  // namespace optimix::testing

#endif  // OPTIMIX_TESTS_FIXTURES_HPP
