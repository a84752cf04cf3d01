#include "optimix/config.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "optimix/io.hpp"

namespace optimix {

using nlohmann::json;

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : Error(line > 0 ? source + ":" + std::to_string(line) + ": " + what
                     : source + ": " + what),
      line_(line) {}

std::map<std::string, int> index_json_lines(std::string_view text) {
  struct Frame {
    bool object;
    int index = 0;
    std::string key;
  };
  std::map<std::string, int> lines;
  std::vector<Frame> stack;
  int line = 1;

  auto path = [&stack] {
    std::string p;
    for (const auto& f : stack) p += "/" + (f.object ? f.key : std::to_string(f.index));
    return p;
  };
  auto record = [&] { lines.emplace(path(), line); };
  bool expect_key = false;

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (c == '\n') {
      ++line;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) || c == ':') continue;
    switch (c) {
      case '{':
        record();
        stack.push_back({true, 0, {}});
        expect_key = true;
        break;
      case '[':
        record();
        stack.push_back({false, 0, {}});
        expect_key = false;
        break;
      case '}':
      case ']':
        stack.pop_back();
        expect_key = false;
        break;
      case ',':
        if (!stack.empty()) {
          if (stack.back().object) expect_key = true;
          else ++stack.back().index;
        }
        break;
      case '"': {
        std::string s;
        for (++k; k < text.size() && text[k] != '"'; ++k) {
          if (text[k] == '\\' && k + 1 < text.size()) ++k;
          s += text[k];
        }
        if (expect_key && !stack.empty() && stack.back().object) {
          stack.back().key = s;
          expect_key = false;
        } else {
          record();
        }
        break;
      }
      default:
        // number / true / false / null
        record();
        while (k + 1 < text.size() && !std::isspace(static_cast<unsigned char>(text[k + 1])) &&
               text[k + 1] != ',' && text[k + 1] != ']' && text[k + 1] != '}')
          ++k;
        break;
    }
  }
  return lines;
}

namespace {

/// Typed accessors that report failures at the value's source line.
class Reader {
 public:
  Reader(const json& doc, std::map<std::string, int> lines, std::string source)
      : doc_(doc), lines_(std::move(lines)), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    int line = 0;
    // Fall back to the closest enclosing value with a known line.
    std::string p = ptr;
    while (true) {
      const auto it = lines_.find(p);
      if (it != lines_.end()) {
        line = it->second;
        break;
      }
      const auto slash = p.find_last_of('/');
      if (slash == std::string::npos || p.empty()) break;
      p = p.substr(0, slash);
    }
    throw ConfigError(source_, line, (ptr.empty() ? std::string("document") : ptr) + ": " + msg);
  }

  const json* find(const std::string& ptr) const {
    const json::json_pointer jp(ptr);
    return doc_.contains(jp) ? &doc_.at(jp) : nullptr;
  }

  const json& at(const std::string& ptr) const {
    const json* v = find(ptr);
    if (!v) fail(ptr.substr(0, ptr.find_last_of('/')), "missing required field '" +
                                                           ptr.substr(ptr.find_last_of('/') + 1) + "'");
    return *v;
  }

  long long integer(const std::string& ptr, long long min_value) const {
    const json& v = at(ptr);
    if (!v.is_number_integer()) fail(ptr, "expected an integer");
    const auto x = v.get<long long>();
    if (x < min_value) fail(ptr, "must be at least " + std::to_string(min_value));
    return x;
  }

  long long integer_or(const std::string& ptr, long long min_value, long long fallback) const {
    return find(ptr) ? integer(ptr, min_value) : fallback;
  }

  double number(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_number()) fail(ptr, "expected a number");
    return v.get<double>();
  }

  double positive_or(const std::string& ptr, double fallback) const {
    if (!find(ptr)) return fallback;
    const double x = number(ptr);
    if (!(x > 0.0)) fail(ptr, "must be positive");
    return x;
  }

  std::string string(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_string()) fail(ptr, "expected a string");
    return v.get<std::string>();
  }

  Eigen::VectorXd vector(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_array() || v.empty()) fail(ptr, "expected a non-empty array of numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      out[static_cast<Eigen::Index>(i)] = number(ptr + "/" + std::to_string(i));
    return out;
  }

  Eigen::MatrixXd matrix(const std::string& ptr, Eigen::Index n) const {
    const json& v = at(ptr);
    if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != n)
      fail(ptr, "expected " + std::to_string(n) + " rows");
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::string row = ptr + "/" + std::to_string(i);
      const json& rv = at(row);
      if (!rv.is_array() || static_cast<Eigen::Index>(rv.size()) != n)
        fail(row, "expected a row of " + std::to_string(n) + " numbers");
      for (Eigen::Index j = 0; j < n; ++j) out(i, j) = number(row + "/" + std::to_string(j));
    }
    return out;
  }

 private:
  const json& doc_;
  std::map<std::string, int> lines_;
  std::string source_;
};

int line_of_offset(std::string_view text, std::size_t offset) {
  int line = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k)
    if (text[k] == '\n') ++line;
  return line;
}

}  // namespace

bool RunConfig::bayesian() const {
  return optimizer.criterion == CriterionKind::BayesD ||
         optimizer.criterion == CriterionKind::BayesI;
}

namespace {

DrawMatrix draws_of(const PriorConfig& p, int r) {
  if (!p.draws_file) return prior_draws(p.spec, p.skip);
  DrawMatrix d = read_draws_csv(*p.draws_file);
  if (d.cols() != r)
    throw Error(*p.draws_file + ": draws have " + std::to_string(d.cols()) +
                " columns, model expects r = " + std::to_string(r));
  return d;
}

}  // namespace

DrawMatrix RunConfig::criterion_draws() const {
  if (bayesian()) return draws_of(*prior, spec().r());
  return center().transpose();
}

DrawMatrix RunConfig::evaluation_draws() const {
  if (prior) return draws_of(*prior, spec().r());
  return beta->transpose();
}

ParamVector RunConfig::center() const { return beta ? *beta : prior->spec.mean; }

RunConfig parse_run_config(std::string_view text, const std::string& source,
                           const std::string& base_dir) {
  RunConfig cfg;
  try {
    cfg.document = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(source, line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0),
                      "malformed JSON");
  }
  if (!cfg.document.is_object()) throw ConfigError(source, 1, "expected a JSON object");
  const Reader rd(cfg.document, index_json_lines(text), source);

  cfg.q = static_cast<int>(rd.integer("/q", 2));
  try {
    cfg.order = parse_scheffe_order(rd.string("/order"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    rd.fail("/order", e.what());
  }
  if (cfg.order == ScheffeOrder::SpecialCubic && cfg.q < 3)
    rd.fail("/q", "special cubic model requires q >= 3");
  const int r = cfg.spec().r();

  cfg.n_sets = static_cast<int>(rd.integer("/choice_sets", 1));
  cfg.n_alternatives = static_cast<int>(rd.integer("/alternatives", 2));
  try {
    cfg.optimizer.criterion = parse_criterion_kind(rd.string("/criterion"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    rd.fail("/criterion", e.what());
  }

  if (rd.find("/prior")) {
    PriorConfig p;
    p.spec.mean = rd.vector("/prior/mean");
    if (p.spec.mean.size() != r)
      rd.fail("/prior/mean", "has " + std::to_string(p.spec.mean.size()) +
                                 " entries, model has r = " + std::to_string(r) + " parameters");
    p.spec.cov = rd.matrix("/prior/cov", r);
    p.spec.n_draws = static_cast<int>(rd.integer_or("/prior/draws", 1, 128));
    p.skip = static_cast<std::uint64_t>(rd.integer_or("/prior/skip", 0, 0));
    if (rd.find("/prior/draws_file")) {
      std::filesystem::path f = rd.string("/prior/draws_file");
      if (f.is_relative()) f = std::filesystem::path(base_dir) / f;
      p.draws_file = f.string();
    }
    try {
      psd_cholesky(p.spec.cov);
    } catch (const Error& e) {
      rd.fail("/prior/cov", e.what());
    }
    if (r > kMaxHaltonDim && !p.draws_file)
      rd.fail("/prior", "Halton draws support at most " + std::to_string(kMaxHaltonDim) +
                            " parameters");
    cfg.prior = std::move(p);
  }
  if (rd.find("/beta")) {
    cfg.beta = rd.vector("/beta");
    if (cfg.beta->size() != r)
      rd.fail("/beta", "has " + std::to_string(cfg.beta->size()) +
                           " entries, model has r = " + std::to_string(r) + " parameters");
  }
  if (cfg.bayesian() && !cfg.prior)
    rd.fail("/criterion", "Bayesian criteria need a 'prior' section");
  if (!cfg.prior && !cfg.beta) rd.fail("", "either 'prior' or 'beta' must be given");

  if (rd.find("/lower_bounds")) {
    const Eigen::VectorXd lb = rd.vector("/lower_bounds");
    if (lb.size() != cfg.q)
      rd.fail("/lower_bounds", "has " + std::to_string(lb.size()) + " entries, expected q = " +
                                   std::to_string(cfg.q));
    try {
      cfg.bounds.emplace(std::vector<double>(lb.data(), lb.data() + lb.size()));
    } catch (const Error& e) {
      rd.fail("/lower_bounds", e.what());
    }
  }

  auto& o = cfg.optimizer;
  o.n_starts = static_cast<int>(rd.integer_or("/optimizer/starts", 1, o.n_starts));
  o.max_sweeps = static_cast<int>(rd.integer_or("/optimizer/max_sweeps", 1, o.max_sweeps));
  o.brent_tol = rd.positive_or("/optimizer/brent_tol", o.brent_tol);
  o.improvement_tol = rd.positive_or("/optimizer/improvement_tol", o.improvement_tol);
  o.seed = static_cast<std::uint64_t>(rd.integer_or("/optimizer/seed", 0, 1));

  cfg.fds_points = static_cast<int>(rd.integer_or("/diagnostics/fds_points", 100, cfg.fds_points));
  cfg.fds_seed = static_cast<std::uint64_t>(
      rd.integer_or("/diagnostics/seed", 0, static_cast<long long>(cfg.fds_seed)));
  if (rd.find("/diagnostics/balance")) {
    const std::string mode = rd.string("/diagnostics/balance");
    if (mode == "draws") cfg.balance_mode = BalanceMode::DrawAverage;
    else if (mode == "prior_mean") cfg.balance_mode = BalanceMode::PriorMean;
    else rd.fail("/diagnostics/balance", "expected 'draws' or 'prior_mean'");
  }
  if (rd.find("/out_dir")) cfg.out_dir = rd.string("/out_dir");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open configuration file");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  return parse_run_config(buf.str(), path, dir.empty() ? "." : dir.string());
}

}  // namespace optimix
