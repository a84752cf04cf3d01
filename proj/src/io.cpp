#include "optimix/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace optimix {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  // Avoid printing "-0.00" for tiny negatives.
  if (std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return {buf, res.ptr};
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string_view rest = line;
  while (true) {
    const auto pos = rest.find(',');
    out.push_back(trim(rest.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    rest.remove_prefix(pos + 1);
  }
  return out;
}

bool parse_number(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

}  // namespace

Design read_design_csv(std::istream& in, int q,
                       const std::optional<IngredientBounds>& bounds) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.empty()) throw Error("design file is empty");

  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < header.size(); ++k) col[header[k]] = k;
  auto need = [&](const std::string& name) {
    const auto it = col.find(name);
    if (it == col.end()) throw Error("design header lacks column '" + name + "'");
    return it->second;
  };
  const std::size_t set_col = need("choice_set");
  const std::size_t alt_col = need("alternative");

  int x_count = 0, a_count = 0;
  for (const auto& h : header) {
    if (h.size() > 1 && h[0] == 'x' && std::all_of(h.begin() + 1, h.end(), ::isdigit)) ++x_count;
    if (h.size() > 1 && h[0] == 'a' && std::all_of(h.begin() + 1, h.end(), ::isdigit)) ++a_count;
  }
  const bool use_x = x_count > 0;
  if (use_x && x_count != q)
    throw Error("design has " + std::to_string(x_count) +
                " ingredient columns x1..; configuration expects q = " + std::to_string(q));
  if (!use_x) {
    if (a_count == 0) throw Error("design has neither x1..xq nor a1..aq columns");
    if (a_count != q)
      throw Error("design has " + std::to_string(a_count) +
                  " actual-proportion columns; configuration expects q = " + std::to_string(q));
    if (!bounds)
      throw Error("design gives only actual proportions but no lower bounds are configured");
    if (bounds->q() != q) throw Error("lower bounds do not match q");
  }
  std::vector<std::size_t> value_cols;
  for (int i = 1; i <= q; ++i)
    value_cols.push_back(need((use_x ? "x" : "a") + std::to_string(i)));

  struct Row {
    int line;
    int set;
    int alt;
    std::vector<double> x;
  };
  std::vector<Row> rows;
  std::vector<int> bad_lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw Error("line " + std::to_string(line_no) + ": expected " +
                  std::to_string(header.size()) + " fields, found " +
                  std::to_string(cells.size()));
    double set_v, alt_v;
    if (!parse_number(cells[set_col], set_v) || !parse_number(cells[alt_col], alt_v))
      throw Error("line " + std::to_string(line_no) + ": bad choice_set/alternative");
    Row row{line_no, static_cast<int>(set_v), static_cast<int>(alt_v), {}};
    for (std::size_t c : value_cols) {
      double v;
      if (!parse_number(cells[c], v) || !std::isfinite(v))
        throw Error("line " + std::to_string(line_no) + ": '" + cells[c] +
                    "' is not a number");
      row.x.push_back(v);
    }
    if (!use_x) row.x = bounds->actual_to_pseudo(row.x);
    double sum = 0.0;
    bool ok = true;
    for (double v : row.x) {
      if (v < -kInputSimplexTol || v > 1.0 + kInputSimplexTol) ok = false;
      sum += v;
    }
    if (!ok || std::abs(sum - 1.0) > kInputSimplexTol) {
      bad_lines.push_back(line_no);
      continue;
    }
    // Points already on the simplex are kept bit-for-bit so written designs
    // read back unchanged.
    const bool exact = std::abs(sum - 1.0) <= kSimplexTol &&
                       std::all_of(row.x.begin(), row.x.end(), [](double v) { return v >= 0.0; });
    if (!exact) {
      for (double& v : row.x) v = std::max(0.0, v);
      sum = 0.0;
      for (double v : row.x) sum += v;
      for (double& v : row.x) v /= sum;
    }
    rows.push_back(std::move(row));
  }
  if (!bad_lines.empty()) {
    std::string msg = "infeasible mixture rows (not on the simplex) at line";
    msg += bad_lines.size() > 1 ? "s" : "";
    for (std::size_t k = 0; k < bad_lines.size(); ++k)
      msg += (k ? ", " : " ") + std::to_string(bad_lines[k]);
    throw Error(msg);
  }
  if (rows.empty()) throw Error("design file has no data rows");

  std::vector<std::vector<std::vector<double>>> sets;
  int current_set = 0;
  for (const auto& row : rows) {
    if (sets.empty() || row.set != current_set) {
      if (!sets.empty() && row.set != current_set + 1)
        throw Error("line " + std::to_string(row.line) +
                    ": choice sets must be numbered consecutively from 1");
      if (sets.empty() && row.set != 1)
        throw Error("line " + std::to_string(row.line) + ": first choice set must be 1");
      current_set = row.set;
      sets.emplace_back();
    }
    sets.back().push_back(row.x);
  }
  return Design::from_points(sets);
}

Design read_design_csv(const std::string& path, int q,
                       const std::optional<IngredientBounds>& bounds) {
  auto in = open_input(path);
  try {
    return read_design_csv(in, q, bounds);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_design_csv(std::ostream& out, const Design& design,
                      const std::optional<IngredientBounds>& bounds, int decimals) {
  auto fmt = [decimals](double v) {
    return decimals < 0 ? format_double(v) : format_fixed(v, decimals);
  };
  out << "choice_set,alternative";
  for (int i = 1; i <= design.q(); ++i) out << ",x" << i;
  if (bounds)
    for (int i = 1; i <= design.q(); ++i) out << ",a" << i;
  out << '\n';
  for (int s = 0; s < design.n_sets(); ++s)
    for (int j = 0; j < design.n_alternatives(); ++j) {
      const auto x = design.point(s, j);
      out << s + 1 << ',' << j + 1;
      for (double v : x) out << ',' << fmt(v);
      if (bounds)
        for (double v : bounds->pseudo_to_actual(x)) out << ',' << fmt(v);
      out << '\n';
    }
}

void write_draws_csv(std::ostream& out, const DrawMatrix& draws) {
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    for (Eigen::Index j = 0; j < draws.cols(); ++j)
      out << (j ? "," : "") << format_double(draws(i, j));
    out << '\n';
  }
}

DrawMatrix read_draws_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    std::vector<double> vals;
    bool numeric = true;
    for (const auto& c : cells) {
      double v;
      if (!parse_number(c, v)) {
        numeric = false;
        break;
      }
      vals.push_back(v);
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw Error("draws line " + std::to_string(line_no) + " is not numeric");
    }
    if (!rows.empty() && vals.size() != rows.front().size())
      throw Error("draws line " + std::to_string(line_no) + " has " +
                  std::to_string(vals.size()) + " values, expected " +
                  std::to_string(rows.front().size()));
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw Error("draws file has no rows");
  DrawMatrix m(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

DrawMatrix read_draws_csv(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_draws_csv(in);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace optimix
