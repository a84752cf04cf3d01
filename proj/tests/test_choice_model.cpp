#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "optimix/choice_model.hpp"
#include "optimix/optimizer.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace optimix;
using namespace optimix::testing;

namespace {

Eigen::VectorXd random_beta(std::mt19937_64& rng, int r, double sd = 2.0) {
  std::normal_distribution<double> n(0.0, sd);
  Eigen::VectorXd b(r);
  for (int a = 0; a < r; ++a) b[a] = n(rng);
  return b;
}

}  // namespace

TEST_CASE("choice probabilities examples") {
  const ModelSpec spec(2, ScheffeOrder::FirstOrder);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(1);
  auto p = choice_probabilities({{0.3, 0.7}, {0.9, 0.1}}, beta, spec);
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));

  // Utilities (1, 0): x1 = 1 vs x1 = 0 with beta = 1.
  beta[0] = 1.0;
  p = choice_probabilities({{1.0, 0.0}, {0.0, 1.0}}, beta, spec);
  CHECK(std::abs(p[0] - std::exp(1.0) / (1.0 + std::exp(1.0))) < 1e-15);
  CHECK(std::abs(p[1] - 1.0 / (1.0 + std::exp(1.0))) < 1e-15);
  CHECK(p[0] == doctest::Approx(0.7311).epsilon(1e-4));

  const ModelSpec cubic = cubic3();
  std::mt19937_64 rng(5);
  const std::vector<double> x{0.2, 0.5, 0.3};
  for (int J : {2, 3, 5}) {
    const auto same = choice_probabilities(std::vector(static_cast<std::size_t>(J), x),
                                           random_beta(rng, 6), cubic);
    for (double v : same) CHECK(std::abs(v - 1.0 / J) < 1e-15);
  }
}

TEST_CASE("probabilities sum to one and are shift invariant") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n(0.0, 5.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int J = 2 + trial % 4;
    std::vector<double> u(static_cast<std::size_t>(J)), p(u.size()), p2(u.size());
    for (double& v : u) v = n(rng);
    softmax(u, p);
    CHECK(std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0) < 1e-12);
    for (double v : p) CHECK((v > 0.0 && v < 1.0));
    const double shift = n(rng) * 100.0;
    for (double& v : u) v += shift;
    softmax(u, p2);
    for (int j = 0; j < J; ++j) CHECK(std::abs(p[j] - p2[j]) < 1e-12);
  }
  // Large utilities do not overflow.
  std::vector<double> big{800.0, 799.0}, pb(2);
  softmax(big, pb);
  CHECK(std::isfinite(pb[0]));
  CHECK(std::abs(pb[0] - std::exp(1.0) / (1.0 + std::exp(1.0))) < 1e-12);
}

TEST_CASE("information matrix matches the naive oracle") {
  const ModelSpec spec = cubic3();
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Design d = random_design(16, 2, 3, 77, trial);
    const Eigen::VectorXd beta = random_beta(rng, 6);
    const InfoMatrix info = information_matrix(d, beta, spec);
    const Eigen::MatrixXd naive = naive_information(d, beta, spec);
    CHECK((info - naive).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((info - info.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("information matrix structure") {
  const ModelSpec spec = cubic3();
  std::mt19937_64 rng(8);

  SUBCASE("identical alternatives carry no information") {
    Design d(1, 3, 3);
    for (int j = 0; j < 3; ++j) {
      auto p = d.point(0, j);
      p[0] = 0.2; p[1] = 0.3; p[2] = 0.5;
    }
    CHECK(information_matrix(d, random_beta(rng, 6), spec).cwiseAbs().maxCoeff() < 1e-30);
  }
  SUBCASE("doubling a design doubles the information") {
    const Design d = random_design(5, 3, 3, 1, 0);
    const Eigen::VectorXd beta = random_beta(rng, 6);
    const InfoMatrix once = information_matrix(d, beta, spec);
    const InfoMatrix twice = information_matrix(Design::concatenate(d, d), beta, spec);
    CHECK((twice - 2.0 * once).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("beta = 0 and J = 2 gives a quarter outer product per set") {
    const Design d = random_design(4, 2, 3, 3, 0);
    Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(6, 6);
    for (int s = 0; s < 4; ++s) {
      const auto f1 = cubic3_terms({d.point(s, 0).begin(), d.point(s, 0).end()});
      const auto f2 = cubic3_terms({d.point(s, 1).begin(), d.point(s, 1).end()});
      Eigen::VectorXd diff(6);
      for (int a = 0; a < 6; ++a) diff[a] = f1[a] - f2[a];
      expect += 0.25 * diff * diff.transpose();
    }
    const InfoMatrix info = information_matrix(d, Eigen::VectorXd::Zero(6), spec);
    CHECK((info - expect).cwiseAbs().maxCoeff() < 1e-15);
  }
  SUBCASE("extreme priors stay finite") {
    const Design d = load_table("table09_sweetener_kappa30_bayes_d.csv");
    const InfoMatrix info = information_matrix(d, sweetener_prior(1.0).mean, spec);
    CHECK(info.allFinite());
  }
  SUBCASE("dimension checks") {
    const Design d = random_design(2, 2, 3, 1, 0);
    CHECK_THROWS_AS(information_matrix(d, Eigen::VectorXd::Zero(5), spec), Error);
    CHECK_THROWS_AS(information_matrix(d, Eigen::VectorXd::Zero(3),
                                       ModelSpec(4, ScheffeOrder::FirstOrder)),
                    Error);
    CHECK_THROWS_AS(Design(0, 2, 3), Error);
    CHECK_THROWS_AS(Design(1, 1, 3), Error);
  }
}
