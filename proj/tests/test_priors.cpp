#include <doctest.h>

#include <cmath>

#include "optimix/priors.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace optimix;
using namespace optimix::testing;

TEST_CASE("Halton sequence values") {
  const Eigen::MatrixXd h = halton(4, 3);
  CHECK(h(0, 0) == 0.5);
  CHECK(h(1, 0) == 0.25);
  CHECK(h(2, 0) == 0.75);
  CHECK(h(3, 0) == 0.125);
  CHECK(h(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(h(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(h(2, 1) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
  CHECK(h(0, 2) == doctest::Approx(0.2).epsilon(1e-15));

  const Eigen::MatrixXd skipped = halton(3, 3, 1);
  CHECK(skipped.row(0) == h.row(1));
  CHECK(skipped.row(2) == h.row(3));

  const Eigen::MatrixXd wide = halton(200, kMaxHaltonDim);
  CHECK(wide.minCoeff() > 0.0);
  CHECK(wide.maxCoeff() < 1.0);
  CHECK_THROWS_AS(halton(2, kMaxHaltonDim + 1), Error);
}

TEST_CASE("normal quantile") {
  CHECK(normal_inverse_cdf(0.5) == 0.0);
  CHECK(std::abs(normal_inverse_cdf(0.975) - 1.959963984540054) < 1e-12);
  for (double u : {1e-300, 1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.49, 0.51, 0.8, 0.97575,
                   0.999, 1.0 - 1e-9}) {
    CAPTURE(u);
    const double z = normal_inverse_cdf(u);
    CHECK(std::abs(z - bisection_normal_quantile(u)) < 1e-9 * std::max(1.0, std::abs(z)));
    if (u >= 1e-6 && u <= 1.0 - 1e-6) {
      CHECK(std::abs(z + normal_inverse_cdf(1.0 - u)) < 1e-9 * std::max(1.0, std::abs(z)));
    }
  }
  CHECK_THROWS_AS(normal_inverse_cdf(0.0), Error);
  CHECK_THROWS_AS(normal_inverse_cdf(1.0), Error);
  CHECK_THROWS_AS(normal_inverse_cdf(std::nan("")), Error);
}

TEST_CASE("zero covariance gives the prior mean in every row") {
  PriorSpec p;
  p.mean = Eigen::VectorXd::LinSpaced(6, -1.0, 4.0);
  p.cov = Eigen::MatrixXd::Zero(6, 6);
  p.n_draws = 17;
  const DrawMatrix d = prior_draws(p);
  REQUIRE(d.rows() == 17);
  for (int i = 0; i < 17; ++i) CHECK(d.row(i) == p.mean.transpose());
}

TEST_CASE("identity covariance reproduces quantile-mapped Halton points") {
  PriorSpec p;
  p.mean = Eigen::VectorXd::Zero(4);
  p.cov = Eigen::MatrixXd::Identity(4, 4);
  p.n_draws = 50;
  const DrawMatrix d = prior_draws(p, 7);
  const Eigen::MatrixXd h = halton(50, 4, 7);
  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 4; ++j) CHECK(d(i, j) == normal_inverse_cdf(h(i, j)));
}

TEST_CASE("draws recover the prior moments") {
  const PriorSpec p = cocktail_prior(1 << 14);
  const DrawMatrix d = prior_draws(p);
  const Eigen::VectorXd mean = d.colwise().mean().transpose();
  const Eigen::MatrixXd centered = d.rowwise() - mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / (d.rows() - 1.0);
  CHECK((mean - p.mean).norm() < 0.05 * p.mean.norm());
  CHECK((cov - p.cov).norm() < 0.05 * p.cov.norm());
}

TEST_CASE("PSD Cholesky") {
  const PriorSpec c = cocktail_prior();
  const Eigen::MatrixXd l = psd_cholesky(c.cov);
  CHECK((l * l.transpose() - c.cov).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(l.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff() == 0.0);

  for (double kappa : {0.5, 5.0, 10.0, 30.0}) {
    const PriorSpec s = sweetener_prior(kappa);
    const Eigen::MatrixXd ls = psd_cholesky(s.cov);
    CHECK((ls * ls.transpose() - s.cov).cwiseAbs().maxCoeff() < 1e-12 * kappa);
  }

  Eigen::MatrixXd rank1(3, 3);
  rank1 << 1, 2, 3, 2, 4, 6, 3, 6, 9;
  const Eigen::MatrixXd l1 = psd_cholesky(rank1);
  CHECK((l1 * l1.transpose() - rank1).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 2, 2, 1;
  CHECK_THROWS_AS(psd_cholesky(indefinite), Error);
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.1, 1;
  CHECK_THROWS_AS(psd_cholesky(asym), Error);
}

TEST_CASE("draws and their hash are deterministic") {
  const DrawMatrix a = prior_draws(cocktail_prior());
  const DrawMatrix b = prior_draws(cocktail_prior());
  CHECK(a == b);
  CHECK(draw_matrix_hash(a) == draw_matrix_hash(b));
  CHECK(draw_matrix_hash(a) != draw_matrix_hash(prior_draws(cocktail_prior(), 1)));
  CHECK(draw_matrix_hash(a) != draw_matrix_hash(prior_draws(cocktail_prior(127))));
}
