#include "optimix/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace optimix {

std::string_view to_string(ScheffeOrder order) {
  switch (order) {
    case ScheffeOrder::FirstOrder: return "first_order";
    case ScheffeOrder::SecondOrder: return "second_order";
    case ScheffeOrder::SpecialCubic: return "special_cubic";
  }
  return "unknown";
}

ScheffeOrder parse_scheffe_order(std::string_view name) {
  if (name == "first_order" || name == "first") return ScheffeOrder::FirstOrder;
  if (name == "second_order" || name == "second") return ScheffeOrder::SecondOrder;
  if (name == "special_cubic" || name == "cubic") return ScheffeOrder::SpecialCubic;
  throw Error("unknown Scheffe order '" + std::string(name) +
              "' (expected first_order, second_order or special_cubic)");
}

int param_count(int q, ScheffeOrder order) {
  if (q < 2) throw Error("ingredient count q must be at least 2");
  switch (order) {
    case ScheffeOrder::FirstOrder: return q - 1;
    case ScheffeOrder::SecondOrder: return (q * q + q) / 2 - 1;
    case ScheffeOrder::SpecialCubic:
      if (q < 3) throw Error("special cubic model requires q >= 3");
      return (q * q * q + 5 * q) / 6 - 1;
  }
  throw Error("unknown Scheffe order");
}

ModelSpec::ModelSpec(int q, ScheffeOrder order)
    : q_(q), order_(order), r_(param_count(q, order)) {
  monomials_.reserve(static_cast<std::size_t>(r_));
  for (int i = 0; i < q - 1; ++i) {
    std::vector<int> e(static_cast<std::size_t>(q), 0);
    e[i] = 1;
    monomials_.push_back(std::move(e));
  }
  if (order != ScheffeOrder::FirstOrder) {
    for (int i = 0; i < q; ++i)
      for (int k = i + 1; k < q; ++k) {
        std::vector<int> e(static_cast<std::size_t>(q), 0);
        e[i] = e[k] = 1;
        monomials_.push_back(std::move(e));
      }
  }
  if (order == ScheffeOrder::SpecialCubic) {
    for (int i = 0; i < q; ++i)
      for (int k = i + 1; k < q; ++k)
        for (int l = k + 1; l < q; ++l) {
          std::vector<int> e(static_cast<std::size_t>(q), 0);
          e[i] = e[k] = e[l] = 1;
          monomials_.push_back(std::move(e));
        }
  }
}

bool is_mixture_point(std::span<const double> x, double tol) {
  double sum = 0.0;
  for (double v : x) {
    if (!(v >= -tol && v <= 1.0 + tol)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

void scheffe_expand(std::span<const double> x, const ModelSpec& spec,
                    std::span<double> out) {
  const int q = spec.q();
  if (static_cast<int>(x.size()) != q)
    throw Error("mixture point has " + std::to_string(x.size()) +
                " components, model expects q = " + std::to_string(q));
  if (static_cast<int>(out.size()) != spec.r())
    throw Error("expansion buffer has wrong length");

  std::size_t m = 0;
  for (int i = 0; i < q - 1; ++i) out[m++] = x[i];
  if (spec.order() == ScheffeOrder::FirstOrder) return;
  for (int i = 0; i < q; ++i)
    for (int k = i + 1; k < q; ++k) out[m++] = x[i] * x[k];
  if (spec.order() == ScheffeOrder::SecondOrder) return;
  for (int i = 0; i < q; ++i)
    for (int k = i + 1; k < q; ++k)
      for (int l = k + 1; l < q; ++l) out[m++] = x[i] * x[k] * x[l];
}

std::vector<double> scheffe_expand(std::span<const double> x,
                                   const ModelSpec& spec) {
  std::vector<double> f(static_cast<std::size_t>(spec.r()));
  scheffe_expand(x, spec, f);
  return f;
}

void cox_adjust_inplace(std::span<double> x, int i, double new_value) {
  const int q = static_cast<int>(x.size());
  if (i < 0 || i >= q) throw Error("Cox move coordinate index out of range");
  new_value = std::clamp(new_value, 0.0, 1.0);

  const double rest = 1.0 - x[i];
  double others = 0.0;
  for (int k = 0; k < q; ++k)
    if (k != i) others += x[k];

  // The proportional branch is undefined when the other coordinates carry no
  // mass, which is the x_i = 1 case up to rounding.
  if (others <= 1e-12 || rest <= 1e-12) {
    const double share = (1.0 - new_value) / (q - 1);
    for (int k = 0; k < q; ++k)
      if (k != i) x[k] = share;
  } else {
    const double scale = (1.0 - new_value) / rest;
    for (int k = 0; k < q; ++k)
      if (k != i) x[k] = std::max(0.0, x[k] * scale);
  }
  x[i] = new_value;

  const double sum = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v /= sum;
}

std::vector<double> cox_adjust(std::span<const double> x, int i,
                               double new_value) {
  std::vector<double> out(x.begin(), x.end());
  cox_adjust_inplace(out, i, new_value);
  return out;
}

IngredientBounds::IngredientBounds(std::vector<double> lower)
    : lower_(std::move(lower)), total_(0.0) {
  if (lower_.size() < 2) throw Error("bounds need at least two ingredients");
  for (double l : lower_) {
    if (!(l >= 0.0)) throw Error("lower bounds must be nonnegative");
    total_ += l;
  }
  if (!(total_ < 1.0))
    throw Error("sum of lower bounds must be below 1 (got " +
                std::to_string(total_) + ")");
}

std::vector<double> IngredientBounds::pseudo_to_actual(
    std::span<const double> x) const {
  if (x.size() != lower_.size()) throw Error("bounds/point dimension mismatch");
  std::vector<double> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    a[i] = lower_[i] + (1.0 - total_) * x[i];
  return a;
}

std::vector<double> IngredientBounds::actual_to_pseudo(
    std::span<const double> a) const {
  if (a.size() != lower_.size()) throw Error("bounds/point dimension mismatch");
  std::vector<double> x(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    x[i] = (a[i] - lower_[i]) / (1.0 - total_);
  return x;
}

SimplexSampler::SimplexSampler(std::uint64_t seed) : engine_(seed) {}

SimplexSampler::SimplexSampler(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double SimplexSampler::uniform() {
  // 53 random mantissa bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

void SimplexSampler::sample(std::span<double> out) {
  double sum = 0.0;
  for (double& v : out) {
    v = -std::log(uniform());
    sum += v;
  }
  for (double& v : out) v /= sum;
}

std::vector<double> SimplexSampler::sample(int q) {
  std::vector<double> x(static_cast<std::size_t>(q));
  sample(x);
  return x;
}

std::vector<std::vector<double>> sample_simplex_uniform(int q, int n,
                                                        std::uint64_t seed) {
  if (q < 2) throw Error("simplex sampling needs q >= 2");
  if (n < 1) throw Error("simplex sampling needs n >= 1");
  SimplexSampler sampler(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) pts.push_back(sampler.sample(q));
  return pts;
}

}  // namespace optimix
