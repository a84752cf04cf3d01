#ifndef OPTIMIX_SIMPLEX_HPP
#define OPTIMIX_SIMPLEX_HPP

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optimix/error.hpp"

namespace optimix {

/// Absolute tolerance on the unit-sum constraint of a mixture.
inline constexpr double kSimplexTol = 1e-9;

enum class ScheffeOrder { FirstOrder, SecondOrder, SpecialCubic };

std::string_view to_string(ScheffeOrder order);
ScheffeOrder parse_scheffe_order(std::string_view name);

/// Identifiable parameter count r of a Scheffe model in q ingredients.
int param_count(int q, ScheffeOrder order);

/// Ingredient count, Scheffe order and the derived parameter count.
///
/// The expansion f(x) drops the q-th linear term (its coefficient is absorbed
/// into the others, since MNL utilities are only identified up to a constant),
/// then lists all pairwise products and, for the special cubic, all triple
/// products, each in lexicographic index order.
class ModelSpec {
 public:
  ModelSpec(int q, ScheffeOrder order);

  int q() const { return q_; }
  ScheffeOrder order() const { return order_; }
  int r() const { return r_; }

  /// Exponent vector (length q) of the monomial behind each component of f.
  const std::vector<std::vector<int>>& monomials() const { return monomials_; }

  friend bool operator==(const ModelSpec& a, const ModelSpec& b) {
    return a.q_ == b.q_ && a.order_ == b.order_;
  }

 private:
  int q_;
  ScheffeOrder order_;
  int r_;
  std::vector<std::vector<int>> monomials_;
};

/// True when every coordinate is in [0,1] and the sum is within tol of 1.
bool is_mixture_point(std::span<const double> x, double tol = kSimplexTol);

/// Writes f(x) into out (length spec.r()).
void scheffe_expand(std::span<const double> x, const ModelSpec& spec,
                    std::span<double> out);
std::vector<double> scheffe_expand(std::span<const double> x,
                                   const ModelSpec& spec);

/// Moves coordinate i to new_value along the Cox direction: the other
/// coordinates keep their mutual ratios (or share the remainder equally when
/// x_i was 1). The result is renormalized to absorb rounding drift.
void cox_adjust_inplace(std::span<double> x, int i, double new_value);
std::vector<double> cox_adjust(std::span<const double> x, int i,
                               double new_value);

/// Lower bounds on the actual ingredient proportions. Pseudocomponents map the
/// constrained region {a_i >= L_i} back onto the full simplex.
class IngredientBounds {
 public:
  explicit IngredientBounds(std::vector<double> lower);

  const std::vector<double>& lower() const { return lower_; }
  double total() const { return total_; }
  int q() const { return static_cast<int>(lower_.size()); }

  std::vector<double> pseudo_to_actual(std::span<const double> x) const;
  std::vector<double> actual_to_pseudo(std::span<const double> a) const;

 private:
  std::vector<double> lower_;
  double total_;
};

/// Uniform sampler on the (q-1)-simplex via normalized unit exponentials.
/// Uses mt19937_64 bits directly so streams are reproducible across
/// standard library implementations.
class SimplexSampler {
 public:
  explicit SimplexSampler(std::uint64_t seed);
  SimplexSampler(std::uint64_t seed, std::uint64_t stream);

  void sample(std::span<double> out);
  std::vector<double> sample(int q);
  /// Uniform on the open interval (0,1).
  double uniform();

 private:
  std::mt19937_64 engine_;
};

std::vector<std::vector<double>> sample_simplex_uniform(int q, int n,
                                                        std::uint64_t seed);

}  // namespace optimix

#endif  // OPTIMIX_SIMPLEX_HPP
