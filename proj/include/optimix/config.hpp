#ifndef OPTIMIX_CONFIG_HPP
#define OPTIMIX_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "optimix/diagnostics.hpp"
#include "optimix/optimizer.hpp"
#include "optimix/priors.hpp"

namespace optimix {

/// Configuration error carrying the offending source line (0 if unknown).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Maps JSON pointers ("/prior/cov/1/2") to the 1-based line where each value
/// starts. Expects syntactically valid JSON.
std::map<std::string, int> index_json_lines(std::string_view text);

struct PriorConfig {
  PriorSpec spec;
  std::uint64_t skip = 0;
  /// Draws injected from a CSV file instead of generated from the prior.
  std::optional<std::string> draws_file;
};

struct RunConfig {
  int q = 3;
  ScheffeOrder order = ScheffeOrder::SpecialCubic;
  int n_sets = 1;
  int n_alternatives = 2;
  std::optional<PriorConfig> prior;
  std::optional<ParamVector> beta;
  std::optional<IngredientBounds> bounds;
  OptimizerConfig optimizer;
  int fds_points = 10000;
  std::uint64_t fds_seed = 20210601;
  BalanceMode balance_mode = BalanceMode::DrawAverage;
  std::string out_dir = ".";
  /// The parsed document, echoed into result files.
  nlohmann::json document;

  ModelSpec spec() const { return {q, order}; }
  bool bayesian() const;
  /// Draws for the configured criterion: the prior draw matrix for Bayesian
  /// criteria, the point estimate as a single row for local ones.
  DrawMatrix criterion_draws() const;
  /// Prior draws when a prior is configured, else the point estimate.
  DrawMatrix evaluation_draws() const;
  /// Prior mean, or the point estimate when no prior is configured.
  ParamVector center() const;
};

RunConfig parse_run_config(std::string_view text, const std::string& source,
                           const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

}  // namespace optimix

#endif  // OPTIMIX_CONFIG_HPP
