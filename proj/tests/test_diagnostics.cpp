#include <doctest.h>

#include <cmath>

#include "optimix/diagnostics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace optimix;
using namespace optimix::testing;

TEST_CASE("prediction variance examples") {
  const ModelSpec spec(2, ScheffeOrder::FirstOrder);
  const Design d = Design::from_points({{{1.0, 0.0}, {0.0, 1.0}}});
  const ParamVector beta = ParamVector::Zero(1);
  const std::vector<double> v1{1.0, 0.0}, mid{0.5, 0.5}, v2{0.0, 1.0};
  CHECK(prediction_variance(v1, d, beta, spec) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(prediction_variance(mid, d, beta, spec) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(prediction_variance(v2, d, beta, spec) == 0.0);

  const Design flat = Design::from_points({{{0.4, 0.6}, {0.4, 0.6}}});
  CHECK_THROWS_AS(prediction_variance(mid, flat, beta, spec), Error);
}

TEST_CASE("prediction variance against the explicit inverse") {
  const ModelSpec spec = cubic3();
  const Design d = load_table("table01_cocktail_bayes_d.csv");
  const ParamVector beta = cocktail_prior().mean;
  const Eigen::MatrixXd inv = explicit_inverse(naive_information(d, beta, spec));
  for (const auto& x : sample_simplex_uniform(3, 50, 8)) {
    const auto f = cubic3_terms(x);
    const Eigen::Map<const Eigen::VectorXd> fv(f.data(), 6);
    const double expected = fv.dot(inv * fv);
    CHECK(std::abs(prediction_variance(x, d, beta, spec) - expected) < 1e-9 * expected);
  }
}

TEST_CASE("FDS series shape and replication") {
  const ModelSpec spec = cubic3();
  const Design d = load_table("table02_cocktail_bayes_i.csv");
  const DrawMatrix draws = prior_draws(cocktail_prior(16));
  const FdsSeries s = fds_data(d, draws, spec, 500, 77);
  REQUIRE(s.points.size() == 500);
  CHECK(s.draws_used == 16);
  CHECK(s.draws_excluded == 0);
  CHECK(s.points.front().fraction == doctest::Approx(0.5 / 500));
  CHECK(s.points.back().fraction == doctest::Approx(499.5 / 500));
  for (std::size_t k = 1; k < s.points.size(); ++k) {
    CHECK(s.points[k].variance >= s.points[k - 1].variance);
    CHECK(s.points[k].fraction > s.points[k - 1].fraction);
  }

  const FdsSeries twice = fds_data(Design::concatenate(d, d), draws, spec, 500, 77);
  for (std::size_t k = 0; k < s.points.size(); ++k)
    CHECK(std::abs(twice.points[k].variance - 0.5 * s.points[k].variance) <
          1e-10 * s.points[k].variance);

  CHECK_THROWS_AS(fds_data(d, draws, spec, 99, 1), Error);
}

TEST_CASE("FDS mean matches the average-variance integral") {
  const ModelSpec spec = cubic3();
  const auto w = moments_matrix(spec);
  const Design d = load_table("table02_cocktail_bayes_i.csv");
  const DrawMatrix draws = prior_draws(cocktail_prior(32));
  const FdsSeries s = fds_data(d, draws, spec, 10000, 20210601);
  // The simplex has area 1/2, so the mean variance is twice the integral.
  const double ib = bayes_i(d, draws, spec, *w).value;
  CHECK(std::abs(s.mean() - 2.0 * ib) < 0.02 * 2.0 * ib);
}

TEST_CASE("FDS does not depend on the thread count") {
  const ModelSpec spec = cubic3();
  const Design d = load_table("table01_cocktail_bayes_d.csv");
  const DrawMatrix draws = prior_draws(cocktail_prior(8));
  const FdsSeries one = fds_data(d, draws, spec, 1000, 5, 1);
  for (int t : {2, 3, 8}) {
    const FdsSeries many = fds_data(d, draws, spec, 1000, 5, t);
    REQUIRE(many.points.size() == one.points.size());
    bool same = true;
    for (std::size_t k = 0; k < one.points.size(); ++k)
      same = same && many.points[k].variance == one.points[k].variance;
    CHECK(same);
  }
}

TEST_CASE("FDS skips draws with singular information") {
  const ModelSpec spec(2, ScheffeOrder::FirstOrder);
  const Design d = Design::from_points({{{0.2, 0.8}, {0.9, 0.1}}});
  DrawMatrix draws(2, 1);
  draws << 0.0, 1e6;  // the second draw puts all mass on one alternative
  const FdsSeries s = fds_data(d, draws, spec, 100, 1);
  CHECK(s.draws_used == 1);
  CHECK(s.draws_excluded == 1);
}

TEST_CASE("utility balance") {
  const ModelSpec spec = cubic3();
  const Design d = load_table("table01_cocktail_bayes_d.csv");
  const DrawMatrix zero = DrawMatrix::Zero(3, 6);
  for (double b : utility_balance(d, zero, spec)) CHECK(b == doctest::Approx(0.25).epsilon(1e-15));

  const DrawMatrix draws = prior_draws(cocktail_prior(16));
  const auto bal = utility_balance(d, draws, spec);
  REQUIRE(bal.size() == static_cast<std::size_t>(d.n_sets()));
  for (int s = 0; s < d.n_sets(); ++s) {
    double avg = 0.0;
    for (int i = 0; i < draws.rows(); ++i) {
      const auto p = choice_probabilities(d, s, draws.row(i).transpose(), spec);
      avg += p[0] * p[1];
    }
    avg /= draws.rows();
    CHECK(std::abs(bal[s] - avg) < 1e-14);
    CHECK(bal[s] <= 0.25 + 1e-12);
  }
}

TEST_CASE("within-set distances") {
  const Design v = Design::from_points({{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}});
  const auto dv = within_set_distances(v);
  REQUIRE(dv.size() == 1);
  REQUIRE(dv[0].size() == 3);
  for (double x : dv[0]) CHECK(x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  const Design t = load_table("table01_cocktail_bayes_d.csv");
  const auto dt = within_set_distances(t);
  const auto a = t.point(0, 0), b = t.point(0, 1);
  const double e = std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                             (a[2] - b[2]) * (a[2] - b[2]));
  CHECK(dt[0][0] == doctest::Approx(e).epsilon(1e-15));
}

TEST_CASE("summaries and report") {
  const auto s = summarize({3.0, 1.0, 2.0, 10.0});
  CHECK(s.min == 1.0);
  CHECK(s.max == 10.0);
  CHECK(s.median == 2.5);
  CHECK(summarize({4.0, 1.0, 7.0}).median == 4.0);

  const ModelSpec spec = cubic3();
  const Design d = load_table("table01_cocktail_bayes_d.csv");
  const PriorSpec p = cocktail_prior(8);
  const DrawMatrix draws = prior_draws(p);
  const auto rep = make_report(d, draws, p.mean, spec, 200, 3, BalanceMode::PriorMean);
  const auto expected = utility_balance(d, p.mean.transpose(), spec);
  CHECK(rep.balance == expected);
  CHECK(rep.fds.points.size() == 200);
  CHECK(rep.fds_summary.median == doctest::Approx(rep.fds.median()));
}
