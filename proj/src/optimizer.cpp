#include "optimix/optimizer.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <string>

#include "optimix/parallel.hpp"

namespace optimix {

BrentResult brent_minimize(const std::function<double(double)>& objective,
                           double lo, double hi, double tol, int max_iter) {
  if (!(lo < hi)) throw Error("Brent interval must satisfy lo < hi");
  if (!(tol > 0.0)) throw Error("Brent tolerance must be positive");

  const double golden = 0.5 * (3.0 - std::sqrt(5.0));
  double a = lo, b = hi;
  double x = a + golden * (b - a);
  double w = x, v = x;
  BrentResult res;
  double fx = objective(x);
  res.evaluations = 1;
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  for (int iter = 0; iter < max_iter; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = DBL_EPSILON * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;

    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // Parabola through (v, fv), (w, fw), (x, fx).
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      else q = -q;
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = x < m ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x < m ? b : a) - x;
      d = golden * e;
    }

    const double u = x + (std::abs(d) >= tol1 ? d : (d > 0.0 ? tol1 : -tol1));
    const double fu = objective(u);
    ++res.evaluations;

    if (fu <= fx) {
      if (u < x) b = x;
      else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u;
      else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  res.x = x;
  res.fx = fx;
  return res;
}

void OptimizerConfig::validate() const {
  if (n_starts < 1) throw Error("n_starts must be at least 1");
  if (max_sweeps < 1) throw Error("max_sweeps must be at least 1");
  if (!(brent_tol > 0.0)) throw Error("brent_tol must be positive");
  if (!(improvement_tol > 0.0)) throw Error("improvement_tol must be positive");
  if (threads < 0) throw Error("threads must be nonnegative");
}

Design random_design(int n_sets, int n_alternatives, int q, std::uint64_t seed,
                     int start) {
  Design d(n_sets, n_alternatives, q);
  SimplexSampler sampler(seed, static_cast<std::uint64_t>(start));
  for (int s = 0; s < n_sets; ++s)
    for (int j = 0; j < n_alternatives; ++j) sampler.sample(d.point(s, j));
  return d;
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Mutable state of one start: the design, each set's model matrix, and each
/// draw's per-set information contributions.
class ExchangeState {
 public:
  ExchangeState(Design& design, const ModelSpec& spec, const DrawMatrix& draws,
                CriterionKind kind, const MomentsMatrix* w)
      : design_(design),
        spec_(spec),
        draws_(draws),
        kind_(kind),
        w_(w),
        n_draws_(static_cast<int>(draws.rows())),
        r_(spec.r()),
        scratch_(static_cast<std::size_t>(2 * design.n_alternatives() + spec.r())),
        per_draw_(static_cast<std::size_t>(draws.rows())) {
    const int S = design.n_sets();
    model_.reserve(static_cast<std::size_t>(S));
    contrib_.resize(static_cast<std::size_t>(S) * n_draws_);
    for (int s = 0; s < S; ++s) {
      model_.push_back(set_model_matrix(design, s, spec));
      refresh_contributions(s);
    }
    base_.assign(static_cast<std::size_t>(n_draws_), InfoMatrix::Zero(r_, r_));
    work_ = InfoMatrix::Zero(r_, r_);
    probe_row_.resize(static_cast<std::size_t>(spec.q()));
    probe_f_.resize(static_cast<std::size_t>(r_));
  }

  /// Sums the contributions of every set except s, per draw.
  void prepare_set(int s) {
    for (int d = 0; d < n_draws_; ++d) {
      InfoMatrix& b = base_[static_cast<std::size_t>(d)];
      b.setZero();
      for (int t = 0; t < design_.n_sets(); ++t)
        if (t != s) b += contribution(t, d);
    }
  }

  /// Criterion with alternative (s, j) moved to point x; set s prepared.
  CriterionValue evaluate_with(int s, int j, std::span<const double> x) {
    Eigen::MatrixXd model = model_[static_cast<std::size_t>(s)];
    scheffe_expand(x, spec_, probe_f_);
    model.row(j) = Eigen::Map<const Eigen::RowVectorXd>(probe_f_.data(), r_);
    for (int d = 0; d < n_draws_; ++d) {
      work_ = base_[static_cast<std::size_t>(d)];
      accumulate_set_information(model, draws_.row(d).transpose(), work_, scratch_);
      auto& slot = per_draw_[static_cast<std::size_t>(d)];
      slot = is_i_criterion(kind_) ? i_value(work_, w_->matrix()) : d_value(work_);
      if (!slot) return CriterionValue::invalid(kind_);
    }
    return combine_draws(kind_, per_draw_);
  }

  CriterionValue evaluate_coordinate(int s, int j, int i, double value) {
    const auto current = design_.point(s, j);
    std::copy(current.begin(), current.end(), probe_row_.begin());
    cox_adjust_inplace(probe_row_, i, value);
    return evaluate_with(s, j, probe_row_);
  }

  /// Commits alternative (s, j) to point x and refreshes set s.
  void commit(int s, int j, std::span<const double> x) {
    std::copy(x.begin(), x.end(), design_.point(s, j).begin());
    scheffe_expand(x, spec_, probe_f_);
    model_[static_cast<std::size_t>(s)].row(j) =
        Eigen::Map<const Eigen::RowVectorXd>(probe_f_.data(), r_);
    refresh_contributions(s);
  }

  std::span<double> probe_row() { return probe_row_; }

 private:
  InfoMatrix& contribution(int s, int d) {
    return contrib_[static_cast<std::size_t>(s) * n_draws_ + d];
  }

  void refresh_contributions(int s) {
    for (int d = 0; d < n_draws_; ++d) {
      InfoMatrix& c = contribution(s, d);
      c = InfoMatrix::Zero(r_, r_);
      accumulate_set_information(model_[static_cast<std::size_t>(s)],
                                 draws_.row(d).transpose(), c, scratch_);
    }
  }

  Design& design_;
  const ModelSpec& spec_;
  const DrawMatrix& draws_;
  CriterionKind kind_;
  const MomentsMatrix* w_;
  int n_draws_;
  int r_;
  std::vector<double> scratch_;
  std::vector<std::optional<double>> per_draw_;
  std::vector<Eigen::MatrixXd> model_;
  std::vector<InfoMatrix> contrib_;
  std::vector<InfoMatrix> base_;
  InfoMatrix work_;
  std::vector<double> probe_row_;
  std::vector<double> probe_f_;
};

double penalized(const CriterionValue& c) {
  return c.valid ? c.value : kInvalidPenalty;
}

void check_move(const Design& design, int s, int j, const ModelSpec& spec,
                const DrawMatrix& draws, const OptimizerConfig& config,
                const MomentsMatrix* w, const CriterionValue& before,
                const CriterionValue& incremental) {
  if (!is_mixture_point(design.point(s, j)))
    throw std::logic_error("coordinate exchange left the simplex at set " +
                           std::to_string(s + 1));
  const CriterionValue full =
      evaluate_criterion(config.criterion, design, draws, spec, w);
  if (full.valid != incremental.valid ||
      (full.valid && std::abs(full.value - incremental.value) >
                         1e-10 * std::max(1.0, std::abs(full.value))))
    throw std::logic_error("incremental criterion disagrees with full evaluation");
  if (before.valid && full.valid && full.value > before.value)
    throw std::logic_error("accepted move increased the criterion");
}

}  // namespace

StartRecord improve_design(Design& design, const ModelSpec& spec,
                           const DrawMatrix& draws, const OptimizerConfig& config,
                           const MomentsMatrix* w) {
  StartRecord rec;
  rec.initial = evaluate_criterion(config.criterion, design, draws, spec, w);

  ExchangeState state(design, spec, draws, config.criterion, w);
  CriterionValue current = rec.initial;
  const int q = design.q();

  for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
    ++rec.sweeps;
    bool improved = false;
    for (int s = 0; s < design.n_sets(); ++s) {
      state.prepare_set(s);
      for (int j = 0; j < design.n_alternatives(); ++j)
        for (int i = 0; i < q; ++i) {
          auto objective = [&](double v) {
            return penalized(state.evaluate_coordinate(s, j, i, v));
          };
          const BrentResult br =
              brent_minimize(objective, 0.0, 1.0, config.brent_tol);
          // Brent never probes the interval ends; vertices and edges are
          // common optima for mixture designs, so check them explicitly.
          double best_v = br.x;
          CriterionValue best = state.evaluate_coordinate(s, j, i, br.x);
          for (double end : {0.0, 1.0}) {
            const CriterionValue c = state.evaluate_coordinate(s, j, i, end);
            if (c.better_than(best)) {
              best = c;
              best_v = end;
            }
          }
          const bool accept =
              best.valid && (!current.valid ||
                             best.value < current.value - config.improvement_tol);
          if (!accept) continue;

          auto row = state.probe_row();
          const auto cur = design.point(s, j);
          std::copy(cur.begin(), cur.end(), row.begin());
          cox_adjust_inplace(row, i, best_v);
          const std::vector<double> moved(row.begin(), row.end());
          state.commit(s, j, moved);
          if (config.check_invariants)
            check_move(design, s, j, spec, draws, config, w, current, best);
          current = best;
          improved = true;
          ++rec.accepted_moves;
        }
    }
    if (!improved) break;
  }
  rec.final = evaluate_criterion(config.criterion, design, draws, spec, w);
  return rec;
}

OptimResult coordinate_exchange(const ModelSpec& spec, const DrawMatrix& draws,
                                int n_sets, int n_alternatives,
                                const OptimizerConfig& config,
                                const MomentsMatrix* w) {
  config.validate();
  if (draws.cols() != spec.r())
    throw Error("draw matrix has " + std::to_string(draws.cols()) +
                " columns, model expects r = " + std::to_string(spec.r()));
  if (draws.rows() < 1) throw Error("at least one parameter vector is required");
  const bool local = config.criterion == CriterionKind::LocalD ||
                     config.criterion == CriterionKind::LocalI;
  if (local && draws.rows() != 1)
    throw Error("local criteria take exactly one parameter vector");
  if (is_i_criterion(config.criterion) && w == nullptr)
    throw Error("I-criteria need a moments matrix");

  std::vector<Design> designs;
  designs.reserve(static_cast<std::size_t>(config.n_starts));
  for (int k = 0; k < config.n_starts; ++k)
    designs.push_back(random_design(n_sets, n_alternatives, spec.q(), config.seed, k));
  std::vector<StartRecord> records(static_cast<std::size_t>(config.n_starts));

  parallel_for(config.n_starts, config.threads, [&](int k) {
    auto& rec = records[static_cast<std::size_t>(k)];
    rec = improve_design(designs[static_cast<std::size_t>(k)], spec, draws, config, w);
    rec.start = k;
  });

  OptimResult result{designs.front(), CriterionValue::invalid(config.criterion), -1,
                     records};
  for (int k = 0; k < config.n_starts; ++k) {
    const auto& rec = records[static_cast<std::size_t>(k)];
    if (rec.final.better_than(result.criterion)) {
      result.criterion = rec.final;
      result.best_start = k;
      result.design = designs[static_cast<std::size_t>(k)];
    }
  }
  return result;
}

}  // namespace optimix
