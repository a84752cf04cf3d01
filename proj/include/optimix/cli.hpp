#ifndef OPTIMIX_CLI_HPP
#define OPTIMIX_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>

namespace optimix {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitOptimization = 3 };

/// Worker count from OPTIMIX_THREADS (0 or unset = all cores).
int threads_from_env();

/// Builds a design from the configuration; writes design.csv (full
/// precision), design_rounded.csv (round_decimals places) and result.json.
int cmd_optimize(const std::string& config_path,
                 const std::optional<std::string>& out_dir, int round_decimals,
                 std::ostream& log);

/// Evaluates a design under the configured prior or point estimate; writes
/// fds.csv, balance.csv, distances.csv and summary.json.
int cmd_evaluate(const std::string& design_path, const std::string& config_path,
                 const std::optional<std::string>& out_dir, std::ostream& log);

/// Writes the configured draw matrix as CSV.
int cmd_draws(const std::string& config_path, const std::string& out_path,
              std::ostream& log);

}  // namespace optimix

#endif  // OPTIMIX_CLI_HPP
