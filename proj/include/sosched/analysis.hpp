#pragma once

#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "sosched/model.hpp"
#include "sosched/simplex.hpp"

namespace sosched {

// Σ w (r + p / max_i s); every schedule is at least this.
inline double trivial_lower_bound(const Instance& inst) {
  const Matrix& s = inst.static_speeds();
  double total = 0.0;
  for (std::size_t j = 0; j < inst.job_count(); ++j) {
    double best = 0.0;
    for (std::size_t i = 0; i < inst.machine_count; ++i) best = std::max(best, s(i, j));
    if (!(best > 0.0)) throw DataError("job " + std::to_string(inst.jobs[j].id) + " has no positive speed");
    total += inst.jobs[j].weight * (inst.jobs[j].release + inst.jobs[j].volume / best);
  }
  return total;
}

enum class LpVariant { Preemptive, NonPreemptive };

inline std::string to_string(LpVariant v) { return v == LpVariant::Preemptive ? "lp" : "np-lp"; }

// Time-indexed relaxation on the unit grid t = 0..T. Column (i, j, t) is the
// amount of slot [t, t+1) machine i spends on job j.
struct LpModel {
  LinearProgram lp;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> columns;
  LpVariant variant = LpVariant::Preemptive;
  double alpha = 1.0;
  std::size_t horizon = 0;
  std::size_t coverage_rows = 0, machine_rows = 0, job_rows = 0;
};

// ⌈max r⌉ + ⌈2 Σ p / min positive s⌉, capped.
inline std::size_t default_horizon(const Instance& inst, std::size_t cap = 400) {
  const Matrix& s = inst.static_speeds();
  double min_s = std::numeric_limits<double>::infinity(), work = 0.0, last = 0.0;
  for (std::size_t j = 0; j < inst.job_count(); ++j) {
    work += inst.jobs[j].volume;
    last = std::max(last, inst.jobs[j].release);
    for (std::size_t i = 0; i < inst.machine_count; ++i)
      if (s(i, j) > 0.0) min_s = std::min(min_s, s(i, j));
  }
  if (inst.job_count() == 0) return 1;
  const double t = std::ceil(last) + std::ceil(2.0 * work / min_s);
  return static_cast<std::size_t>(std::min(t, static_cast<double>(cap)));
}

inline LpModel build_lp(const Instance& inst, LpVariant variant, double alpha, std::size_t horizon) {
  if (!(alpha >= 1.0)) throw DataError("alpha must be >= 1");
  const Matrix& s = inst.static_speeds();
  const std::size_t m = inst.machine_count, n = inst.job_count(), T = horizon;
  for (const auto& job : inst.jobs)
    if (static_cast<double>(T) <= job.release) throw DataError("horizon must exceed every release time");

  LpModel model;
  model.variant = variant;
  model.alpha = alpha;
  model.horizon = T;
  std::vector<LpRow> coverage(n), machine_rows((T + 1) * m), job_rows((T + 1) * n);
  for (auto& r : coverage) r = {{}, RowSense::GreaterEqual, 1.0};
  for (auto& r : machine_rows) r = {{}, RowSense::LessEqual, 1.0};
  for (auto& r : job_rows) r = {{}, RowSense::LessEqual, 1.0};
  std::vector<bool> job_row_used((T + 1) * n, false);

  for (std::size_t j = 0; j < n; ++j) {
    const Job& job = inst.jobs[j];
    const auto first = static_cast<std::size_t>(std::ceil(job.release));
    for (std::size_t t = first; t <= T; ++t) {
      // Job rows exist for t >= r_j whether or not any column is usable.
      job_row_used[t * n + j] = true;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(s(i, j) > 0.0)) continue;
        const double frac = s(i, j) / job.volume;
        const double td = static_cast<double>(t);
        const double c = variant == LpVariant::Preemptive ? job.weight * td * frac
                                                          : job.weight * (0.5 + frac * (td + 0.5));
        const std::size_t k = model.lp.add_var(c);
        model.columns.emplace_back(i, j, t);
        coverage[j].coeffs.emplace_back(k, frac);
        machine_rows[t * m + i].coeffs.emplace_back(k, alpha);
        if (variant == LpVariant::Preemptive) job_rows[t * n + j].coeffs.emplace_back(k, alpha);
      }
    }
  }
  for (auto& r : coverage) model.lp.rows.push_back(std::move(r));
  model.coverage_rows = n;
  model.machine_rows = machine_rows.size();
  for (auto& r : machine_rows) model.lp.rows.push_back(std::move(r));
  if (variant == LpVariant::Preemptive) {
    for (std::size_t k = 0; k < job_rows.size(); ++k)
      if (job_row_used[k]) {
        model.lp.rows.push_back(std::move(job_rows[k]));
        ++model.job_rows;
      }
  }
  return model;
}

// Solves a built model; an infeasible LP means the horizon cannot fit the
// work, since every relaxation is feasible for a long enough grid.
inline LpSolution solve_lp(const LpModel& model) {
  LpSolution sol = simplex_solve(model.lp);
  if (sol.status == LpStatus::Infeasible) sol.status = LpStatus::HorizonTooShort;
  return sol;
}

inline LpSolution lp_lower_bound(const Instance& inst, LpVariant variant = LpVariant::Preemptive, double alpha = 1.0,
                                 std::size_t horizon = 0) {
  return solve_lp(build_lp(inst, variant, alpha, horizon == 0 ? default_horizon(inst) : horizon));
}

// Completion times of Round Robin on the {0,1} speed-ordered construction:
// C_j = 1 + Σ_{i<j} 1 / (m - i + 1), 1-based.
inline std::vector<double> closed_form_rr_so(std::size_t m) {
  if (m < 1) throw DataError("m must be >= 1");
  std::vector<double> out;
  double c = 1.0;
  for (std::size_t j = 1; j <= m; ++j) {
    out.push_back(c);
    c += 1.0 / static_cast<double>(m - j + 1);
  }
  return out;
}

inline double empirical_ratio(double alg_objective, double lower_bound) {
  if (!(lower_bound > 0.0)) throw DataError("lower bound must be positive");
  return alg_objective / lower_bound;
}

}  // namespace sosched
