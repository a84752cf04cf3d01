#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "optimix/simplex.hpp"

using namespace optimix;
using doctest::Approx;

namespace {

void check_vec(const std::vector<double>& got, const std::vector<double>& want,
               double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    CAPTURE(k);
    CHECK(std::abs(got[k] - want[k]) <= tol);
  }
}

std::vector<double> random_point(std::mt19937_64& rng, int q) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(q));
  for (double& v : x) v = -std::log(1.0 - u(rng));
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v /= s;
  return x;
}

}  // namespace

TEST_CASE("param_count follows the Scheffe formulas") {
  CHECK(param_count(3, ScheffeOrder::SpecialCubic) == 6);
  CHECK(param_count(2, ScheffeOrder::FirstOrder) == 1);
  CHECK(param_count(4, ScheffeOrder::SecondOrder) == 9);
  CHECK(param_count(4, ScheffeOrder::SpecialCubic) == 13);
  CHECK_THROWS_AS(param_count(2, ScheffeOrder::SpecialCubic), Error);
  CHECK_THROWS_AS(param_count(1, ScheffeOrder::FirstOrder), Error);
}

TEST_CASE("scheffe_expand examples") {
  const ModelSpec cubic(3, ScheffeOrder::SpecialCubic);
  check_vec(scheffe_expand(std::vector{1.0, 0.0, 0.0}, cubic), {1, 0, 0, 0, 0, 0});
  const double t = 1.0 / 3.0;
  check_vec(scheffe_expand(std::vector{t, t, t}, cubic),
            {t, t, 1.0 / 9, 1.0 / 9, 1.0 / 9, 1.0 / 27});
  const ModelSpec second(3, ScheffeOrder::SecondOrder);
  check_vec(scheffe_expand(std::vector{0.2, 0.3, 0.5}, second), {0.2, 0.3, 0.06, 0.10, 0.15});
  CHECK_THROWS_AS(scheffe_expand(std::vector{0.5, 0.5}, cubic), Error);
}

TEST_CASE("expansion length equals r and vertices map to unit vectors") {
  for (int q = 2; q <= 6; ++q)
    for (auto order : {ScheffeOrder::FirstOrder, ScheffeOrder::SecondOrder,
                       ScheffeOrder::SpecialCubic}) {
      if (order == ScheffeOrder::SpecialCubic && q < 3) continue;
      const ModelSpec spec(q, order);
      CAPTURE(q);
      CHECK(static_cast<int>(spec.monomials().size()) == spec.r());
      for (int i = 0; i < q; ++i) {
        std::vector<double> e(static_cast<std::size_t>(q), 0.0);
        e[i] = 1.0;
        const auto f = scheffe_expand(e, spec);
        REQUIRE(static_cast<int>(f.size()) == spec.r());
        for (int a = 0; a < spec.r(); ++a)
          CHECK(f[a] == ((i < q - 1 && a == i) ? 1.0 : 0.0));
      }
    }
}

TEST_CASE("cox_adjust examples") {
  check_vec(cox_adjust(std::vector{0.2, 0.3, 0.5}, 0, 0.4), {0.4, 0.225, 0.375});
  check_vec(cox_adjust(std::vector{1.0, 0.0, 0.0}, 0, 0.4), {0.4, 0.3, 0.3});
  check_vec(cox_adjust(std::vector{0.2, 0.3, 0.5}, 0, 0.2), {0.2, 0.3, 0.5});
}

TEST_CASE("cox_adjust stays on the simplex (property)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    const int q = 2 + static_cast<int>(rng() % 5);
    auto x = random_point(rng, q);
    // Sprinkle exact vertices and edges.
    if (trial % 7 == 0) {
      std::fill(x.begin(), x.end(), 0.0);
      x[rng() % static_cast<unsigned>(q)] = 1.0;
    }
    const int i = static_cast<int>(rng() % static_cast<unsigned>(q));
    const double v = trial % 11 == 0 ? 1.0 : (trial % 13 == 0 ? 0.0 : u(rng));
    const auto y = cox_adjust(x, i, v);
    CHECK(is_mixture_point(y));
    for (double c : y) CHECK(c >= 0.0);
    CHECK(std::abs(y[i] - v) < 1e-12);

    const auto same = cox_adjust(x, i, x[i]);
    for (int k = 0; k < q; ++k) CHECK(std::abs(same[k] - x[k]) < 1e-12);
  }
}

TEST_CASE("pseudocomponent transforms") {
  const IngredientBounds b({0.3, 0.15, 0.1});
  CHECK(b.total() == Approx(0.55));
  check_vec(b.pseudo_to_actual(std::vector{0.0, 1.0, 0.0}), {0.30, 0.60, 0.10});
  const auto a = b.pseudo_to_actual(std::vector{0.60, 0.40, 0.00});
  CHECK(std::abs(a[0] - 0.57) < 0.005);
  CHECK(std::abs(a[1] - 0.33) < 0.005);
  CHECK(std::abs(a[2] - 0.10) < 0.005);

  const IngredientBounds none({0.0, 0.0, 0.0});
  check_vec(none.pseudo_to_actual(std::vector{0.2, 0.3, 0.5}), {0.2, 0.3, 0.5});

  CHECK_THROWS_AS(IngredientBounds({0.5, 0.5}), Error);
  CHECK_THROWS_AS(IngredientBounds({0.5, -0.1}), Error);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = random_point(rng, 3);
    const auto back = b.actual_to_pseudo(b.pseudo_to_actual(x));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(back[k] - x[k]) < 1e-12);
  }
}

TEST_CASE("uniform simplex sampling") {
  SUBCASE("q = 2 mean is 1/2") {
    const int n = 200000;
    const auto pts = sample_simplex_uniform(2, n, 11);
    double mean = 0.0;
    for (const auto& p : pts) mean += p[0];
    mean /= n;
    const double se = std::sqrt(1.0 / 12.0 / n);
    CHECK(std::abs(mean - 0.5) < 3.0 * se);
  }
  SUBCASE("q = 3 corner probability is 1/4") {
    const int n = 200000;
    const auto pts = sample_simplex_uniform(3, n, 12);
    int hits = 0;
    for (const auto& p : pts) hits += p[0] > 0.5;
    const double frac = static_cast<double>(hits) / n;
    CHECK(std::abs(frac - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / n));
  }
  SUBCASE("fixed seed is deterministic and points are feasible") {
    const auto a = sample_simplex_uniform(4, 500, 99);
    const auto b = sample_simplex_uniform(4, 500, 99);
    CHECK(a == b);
    for (const auto& p : a) CHECK(is_mixture_point(p));
    CHECK(sample_simplex_uniform(4, 500, 100) != a);
  }
}
