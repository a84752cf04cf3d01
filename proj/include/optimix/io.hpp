#ifndef OPTIMIX_IO_HPP
#define OPTIMIX_IO_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "optimix/criteria.hpp"

namespace optimix {

/// Shortest round-trip decimal form of v.
std::string format_double(double v);
/// Fixed notation with the given number of decimals.
std::string format_fixed(double v, int decimals);

/// Row sums of loaded designs may be off by up to this much (two-decimal
/// printing); such rows are renormalized onto the simplex.
inline constexpr double kInputSimplexTol = 0.015;

/// Reads a design table with header choice_set,alternative,x1..xq[,a1..aq].
/// When the x-columns are absent and bounds are given, the a-columns are
/// converted to pseudocomponents. Rows must be grouped by set, each set with
/// the same number of alternatives. Infeasible rows are reported by line.
Design read_design_csv(std::istream& in, int q,
                       const std::optional<IngredientBounds>& bounds = std::nullopt);
Design read_design_csv(const std::string& path, int q,
                       const std::optional<IngredientBounds>& bounds = std::nullopt);

/// Writes the design table; with bounds the actual proportions a1..aq follow.
/// decimals < 0 writes full round-trip precision.
void write_design_csv(std::ostream& out, const Design& design,
                      const std::optional<IngredientBounds>& bounds,
                      int decimals = -1);

/// Draw matrices: R lines of r comma-separated values; an optional
/// non-numeric header line is skipped on reading.
void write_draws_csv(std::ostream& out, const DrawMatrix& draws);
DrawMatrix read_draws_csv(std::istream& in);
DrawMatrix read_draws_csv(const std::string& path);

}  // namespace optimix

#endif  // OPTIMIX_IO_HPP
