#include "optimix/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "optimix/config.hpp"
#include "optimix/diagnostics.hpp"
#include "optimix/io.hpp"

namespace optimix {

namespace fs = std::filesystem;
using nlohmann::json;

int threads_from_env() {
  const char* v = std::getenv("OPTIMIX_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 0) return 0;
  return static_cast<int>(n);
}

namespace {

json criterion_json(const CriterionValue& c) {
  json j{{"kind", to_string(c.kind)}, {"valid", c.valid}};
  j["value"] = c.valid ? json(c.value) : json(nullptr);
  return j;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

json summary_json(const SeriesSummary& s) {
  return {{"min", s.min}, {"median", s.median}, {"max", s.max}};
}

}  // namespace

int cmd_optimize(const std::string& config_path,
                 const std::optional<std::string>& out_dir, int round_decimals,
                 std::ostream& log) {
  RunConfig cfg;
  DrawMatrix draws;
  try {
    cfg = load_run_config(config_path);
    draws = cfg.criterion_draws();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  const ModelSpec spec = cfg.spec();
  OptimizerConfig opt = cfg.optimizer;
  opt.threads = threads_from_env();
  const auto w = moments_matrix(spec);

  const OptimResult res = coordinate_exchange(spec, draws, cfg.n_sets,
                                              cfg.n_alternatives, opt, w.get());

  json starts = json::array();
  for (const auto& h : res.history)
    starts.push_back({{"start", h.start},
                      {"initial", criterion_json(h.initial)},
                      {"final", criterion_json(h.final)},
                      {"sweeps", h.sweeps},
                      {"accepted_moves", h.accepted_moves}});
  json result{{"software", {{"name", "optimix"}, {"version", kVersion}}},
              {"success", res.success()},
              {"criterion", criterion_json(res.criterion)},
              {"best_start", res.best_start},
              {"starts", starts},
              {"draws",
               {{"rows", draws.rows()},
                {"cols", draws.cols()},
                {"hash", hex64(draw_matrix_hash(draws))}}},
              {"config", cfg.document}};

  const fs::path dir = out_dir ? fs::path(*out_dir) : fs::path(cfg.out_dir);
  try {
    fs::create_directories(dir);
    write_text(dir / "result.json", result.dump(2) + "\n");
    if (!res.success()) {
      log << "error: all " << opt.n_starts
          << " starts ended with a singular information matrix\n";
      return kExitOptimization;
    }
    std::ostringstream full, rounded;
    write_design_csv(full, res.design, cfg.bounds, -1);
    write_design_csv(rounded, res.design, cfg.bounds, round_decimals);
    write_text(dir / "design.csv", full.str());
    write_text(dir / "design_rounded.csv", rounded.str());
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  log << to_string(res.criterion.kind) << " = " << format_double(res.criterion.value)
      << " (best of " << opt.n_starts << " starts: start " << res.best_start << ")\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& design_path, const std::string& config_path,
                 const std::optional<std::string>& out_dir, std::ostream& log) {
  try {
    const RunConfig cfg = load_run_config(config_path);
    const ModelSpec spec = cfg.spec();
    const Design design = read_design_csv(design_path, cfg.q, cfg.bounds);
    const DrawMatrix draws = cfg.evaluation_draws();
    const auto w = moments_matrix(spec);
    const int threads = threads_from_env();

    CriterionValue d_crit, i_crit;
    if (cfg.prior) {
      d_crit = bayes_d(design, draws, spec);
      i_crit = bayes_i(design, draws, spec, *w);
    } else {
      d_crit = local_d(design, *cfg.beta, spec);
      i_crit = local_i(design, *cfg.beta, spec, *w);
    }
    const DiagnosticsReport rep =
        make_report(design, draws, cfg.center(), spec, cfg.fds_points, cfg.fds_seed,
                    cfg.balance_mode, threads);

    const fs::path dir = out_dir ? fs::path(*out_dir) : fs::path(cfg.out_dir);
    fs::create_directories(dir);

    std::ostringstream fds, bal, dist;
    fds << "fraction,variance\n";
    for (const auto& p : rep.fds.points)
      fds << format_double(p.fraction) << ',' << format_double(p.variance) << '\n';
    bal << "set,product\n";
    for (std::size_t s = 0; s < rep.balance.size(); ++s)
      bal << s + 1 << ',' << format_double(rep.balance[s]) << '\n';
    dist << "set,distance\n";
    for (std::size_t s = 0; s < rep.distances.size(); ++s)
      for (double d : rep.distances[s]) dist << s + 1 << ',' << format_double(d) << '\n';
    write_text(dir / "fds.csv", fds.str());
    write_text(dir / "balance.csv", bal.str());
    write_text(dir / "distances.csv", dist.str());

    json summary{
        {"software", {{"name", "optimix"}, {"version", kVersion}}},
        {"design", {{"file", design_path},
                    {"choice_sets", design.n_sets()},
                    {"alternatives", design.n_alternatives()}}},
        {"criteria", {{"d", criterion_json(d_crit)}, {"i", criterion_json(i_crit)}}},
        {"fds",
         {{"n_points", rep.fds.n_points},
          {"seed", rep.fds.seed},
          {"draws_used", rep.fds.draws_used},
          {"draws_excluded", rep.fds.draws_excluded},
          {"mean", rep.fds.mean()},
          {"summary", summary_json(rep.fds_summary)}}},
        {"balance",
         {{"mode", rep.balance_mode == BalanceMode::DrawAverage ? "draws" : "prior_mean"},
          {"summary", summary_json(rep.balance_summary)}}},
        {"distances", {{"summary", summary_json(rep.distance_summary)}}},
        {"draws", {{"rows", draws.rows()}, {"hash", hex64(draw_matrix_hash(draws))}}}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");

    log << "D: " << (d_crit.valid ? format_double(d_crit.value) : "singular")
        << "  I: " << (i_crit.valid ? format_double(i_crit.value) : "singular")
        << "  median FDS variance: " << format_double(rep.fds.median()) << '\n';
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_draws(const std::string& config_path, const std::string& out_path,
              std::ostream& log) {
  try {
    const RunConfig cfg = load_run_config(config_path);
    if (!cfg.prior) throw Error("configuration has no 'prior' section");
    const DrawMatrix draws = cfg.evaluation_draws();
    std::ostringstream os;
    write_draws_csv(os, draws);
    const fs::path out(out_path);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_text(out, os.str());
    log << "wrote " << draws.rows() << "x" << draws.cols() << " draws to " << out_path
        << '\n';
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace optimix
