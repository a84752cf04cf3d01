#include "optimix/priors.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

namespace optimix {

namespace {

constexpr std::array<int, kMaxHaltonDim> kPrimes = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
    43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double radical_inverse(std::uint64_t index, int base) {
  const double inv_base = 1.0 / base;
  double factor = inv_base;
  double value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % static_cast<std::uint64_t>(base)) * factor;
    index /= static_cast<std::uint64_t>(base);
    factor *= inv_base;
  }
  return value;
}

}  // namespace

Eigen::MatrixXd halton(int n, int dim, std::uint64_t skip) {
  if (n < 1) throw Error("halton needs n >= 1");
  if (dim < 1 || dim > kMaxHaltonDim)
    throw Error("halton dimension " + std::to_string(dim) +
                " outside 1.." + std::to_string(kMaxHaltonDim));
  Eigen::MatrixXd h(n, dim);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < dim; ++d)
      h(i, d) = radical_inverse(static_cast<std::uint64_t>(i) + 1 + skip, kPrimes[d]);
  return h;
}

double normal_inverse_cdf(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw Error("normal quantile argument must lie in (0,1)");

  // Acklam's rational approximation (relative error ~1e-9) ...
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (u < p_low) {
    const double t = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  } else if (u <= 1.0 - p_low) {
    const double t = u - 0.5;
    const double s = t * t;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * t /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    const double t = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }

  // ... polished by one Halley step against erfc.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - u;
  const double g = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - g / (1.0 + 0.5 * x * g);
}

Eigen::MatrixXd psd_cholesky(const Eigen::MatrixXd& cov) {
  const Eigen::Index n = cov.rows();
  if (cov.cols() != n) throw Error("covariance matrix must be square");
  if (!cov.allFinite()) throw Error("covariance matrix has non-finite entries");
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(cov(i, j) - cov(j, i)) > 1e-10 * std::max(1.0, std::abs(cov(i, j))))
        throw Error("covariance matrix is not symmetric");
      scale = std::max(scale, std::abs(cov(i, j)));
    }
  const Eigen::MatrixXd a = 0.5 * (cov + cov.transpose());
  const double tol = 1e-12 * std::max(scale, 1e-300);

  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double dj = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) dj -= l(j, k) * l(j, k);
    if (dj < -1e-10 * std::max(scale, 1.0))
      throw Error("covariance matrix is not positive semidefinite");
    if (dj <= tol) {
      // Degenerate direction: remaining column must vanish as well.
      for (Eigen::Index i = j + 1; i < n; ++i) {
        double v = a(i, j);
        for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
        if (std::abs(v) > 1e-8 * std::max(scale, 1.0))
          throw Error("covariance matrix is not positive semidefinite");
      }
      continue;
    }
    const double ljj = std::sqrt(dj);
    l(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

DrawMatrix prior_draws(const PriorSpec& prior, std::uint64_t skip) {
  const auto r = prior.mean.size();
  if (r < 1) throw Error("prior mean is empty");
  if (prior.cov.rows() != r || prior.cov.cols() != r)
    throw Error("prior covariance must be " + std::to_string(r) + "x" +
                std::to_string(r) + " to match the mean");
  if (prior.n_draws < 1) throw Error("number of prior draws must be at least 1");

  const Eigen::MatrixXd l = psd_cholesky(prior.cov);
  const Eigen::MatrixXd h = halton(prior.n_draws, static_cast<int>(r), skip);
  DrawMatrix draws(prior.n_draws, r);
  Eigen::VectorXd z(r);
  for (int i = 0; i < prior.n_draws; ++i) {
    for (Eigen::Index d = 0; d < r; ++d) z[d] = normal_inverse_cdf(h(i, d));
    draws.row(i) = (prior.mean + l * z).transpose();
  }
  return draws;
}

std::uint64_t draw_matrix_hash(const DrawMatrix& draws) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= p[k];
      h *= 1099511628211ULL;
    }
  };
  const std::int64_t shape[2] = {draws.rows(), draws.cols()};
  mix(shape, sizeof shape);
  for (Eigen::Index i = 0; i < draws.rows(); ++i)
    for (Eigen::Index j = 0; j < draws.cols(); ++j) {
      const double v = draws(i, j);
      mix(&v, sizeof v);
    }
  return h;
}

}  // namespace optimix
