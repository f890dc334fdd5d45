#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "sosched/model.hpp"

namespace sosched {

enum class RowSense { LessEqual, GreaterEqual, Equal };

struct LpRow {
  std::vector<std::pair<std::size_t, double>> coeffs;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

// minimize cost . x  subject to rows, x >= 0.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<double> cost;
  std::vector<LpRow> rows;

  std::size_t add_var(double c) {
    cost.push_back(c);
    return num_vars++;
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, HorizonTooShort, IterationLimit };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::HorizonTooShort: return "horizon-too-short";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> primal;
  std::size_t pivots = 0;
};

inline double max_row_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (double v : x) worst = std::max(worst, -v);
  for (const auto& row : lp.rows) {
    double lhs = 0.0;
    for (const auto& [k, a] : row.coeffs) lhs += a * x[k];
    const double d = lhs - row.rhs;
    switch (row.sense) {
      case RowSense::LessEqual: worst = std::max(worst, d); break;
      case RowSense::GreaterEqual: worst = std::max(worst, -d); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(d)); break;
    }
  }
  return worst;
}

namespace detail {

// Dense tableau with an explicit reduced-cost row. Bland's rule on both the
// entering and leaving choice, so degenerate pivots cannot cycle.
class Tableau {
 public:
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kCostTol = 1e-9;

  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_((rows + 1) * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return a_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return a_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }
  double& value() { return at(rows_, cols_); }  // holds -objective
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const double inv = 1.0 / at(pr, pc);
    nz_.clear();
    for (std::size_t c = 0; c <= cols_; ++c) {
      double& v = at(pr, c);
      if (v != 0.0) {
        v *= inv;
        nz_.push_back(c);
      }
    }
    at(pr, pc) = 1.0;
    for (std::size_t r = 0; r <= rows_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      double* dst = &a_[r * (cols_ + 1)];
      const double* src = &a_[pr * (cols_ + 1)];
      for (std::size_t c : nz_) dst[c] -= f * src[c];
      dst[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Runs Bland pivots over columns [0, allowed). Returns false if unbounded.
  bool optimize(std::size_t allowed, std::size_t& pivots, std::size_t max_pivots, bool& limit_hit) {
    for (;;) {
      std::size_t enter = allowed;
      for (std::size_t c = 0; c < allowed; ++c)
        if (cost(c) < -kCostTol) {
          enter = c;
          break;
        }
      if (enter == allowed) return true;
      std::size_t leave = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = rhs(r) / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio <= best_ratio + 1e-12 && leave < rows_ && basis_[r] < basis_[leave])) {
          if (ratio < best_ratio) best_ratio = ratio;
          leave = r;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
      if (++pivots >= max_pivots) {
        limit_hit = true;
        return true;
      }
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> a_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nz_;
};

}  // namespace detail

// Two-phase dense simplex for small models (a few thousand columns at most).
inline LpSolution simplex_solve(const LinearProgram& lp, std::size_t max_pivots = 2'000'000) {
  const std::size_t n = lp.num_vars, R = lp.rows.size();
  if (lp.cost.size() != n) throw DataError("cost vector does not match variable count");

  // Normalize to nonnegative right-hand sides.
  std::vector<RowSense> sense(R);
  std::vector<double> sign(R, 1.0);
  std::size_t n_slack = 0, n_art = 0;
  for (std::size_t r = 0; r < R; ++r) {
    sense[r] = lp.rows[r].sense;
    if (lp.rows[r].rhs < 0.0) {
      sign[r] = -1.0;
      if (sense[r] == RowSense::LessEqual) sense[r] = RowSense::GreaterEqual;
      else if (sense[r] == RowSense::GreaterEqual) sense[r] = RowSense::LessEqual;
    }
    if (sense[r] != RowSense::Equal) ++n_slack;
    if (sense[r] != RowSense::LessEqual) ++n_art;
  }
  const std::size_t real_cols = n + n_slack, total = real_cols + n_art;
  detail::Tableau tab(R, total);
  std::size_t slack = n, art = real_cols;
  std::vector<char> artificial_row(R, 0);
  for (std::size_t r = 0; r < R; ++r) {
    for (const auto& [k, a] : lp.rows[r].coeffs) {
      if (k >= n) throw DataError("row references unknown variable");
      tab.at(r, k) += sign[r] * a;
    }
    tab.rhs(r) = sign[r] * lp.rows[r].rhs;
    switch (sense[r]) {
      case RowSense::LessEqual:
        tab.at(r, slack) = 1.0;
        tab.basis()[r] = slack++;
        break;
      case RowSense::GreaterEqual:
        tab.at(r, slack++) = -1.0;
        tab.at(r, art) = 1.0;
        tab.basis()[r] = art++;
        artificial_row[r] = 1;
        break;
      case RowSense::Equal:
        tab.at(r, art) = 1.0;
        tab.basis()[r] = art++;
        artificial_row[r] = 1;
        break;
    }
  }

  LpSolution out;
  bool limit_hit = false;

  // Phase 1: minimize the sum of artificials.
  if (n_art > 0) {
    for (std::size_t r = 0; r < R; ++r) {
      if (!artificial_row[r]) continue;
      for (std::size_t c = 0; c < real_cols; ++c) tab.cost(c) -= tab.at(r, c);
      tab.value() -= tab.rhs(r);
    }
    tab.optimize(total, out.pivots, max_pivots, limit_hit);
    if (limit_hit) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    double scale = 1.0;
    for (std::size_t r = 0; r < R; ++r) scale = std::max(scale, std::abs(tab.rhs(r)));
    if (-tab.value() > 1e-7 * scale) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive zero-valued artificials out of the basis.
    for (std::size_t r = 0; r < R; ++r) {
      if (tab.basis()[r] < real_cols) continue;
      std::size_t pc = real_cols;
      for (std::size_t c = 0; c < real_cols; ++c)
        if (std::abs(tab.at(r, c)) > detail::Tableau::kPivotTol) {
          pc = c;
          break;
        }
      if (pc < real_cols) {
        tab.pivot(r, pc);
      } else {
        // Redundant row: zero it so it never constrains phase 2.
        for (std::size_t c = 0; c <= total; ++c) tab.at(r, c) = 0.0;
      }
    }
  }

  // Phase 2: original costs expressed in the current basis.
  for (std::size_t c = 0; c <= total; ++c) tab.cost(c) = 0.0;
  for (std::size_t k = 0; k < n; ++k) tab.cost(k) = lp.cost[k];
  for (std::size_t r = 0; r < R; ++r) {
    const std::size_t b = tab.basis()[r];
    if (b >= n) continue;
    const double cb = lp.cost[b];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= total; ++c) tab.cost(c) -= cb * tab.at(r, c);
  }
  const bool bounded = tab.optimize(real_cols, out.pivots, max_pivots, limit_hit);
  if (limit_hit) {
    out.status = LpStatus::IterationLimit;
    return out;
  }
  if (!bounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.primal.assign(n, 0.0);
  for (std::size_t r = 0; r < R; ++r) {
    const std::size_t b = tab.basis()[r];
    if (b < n) out.primal[b] = std::max(0.0, tab.rhs(r));
  }
  out.value = 0.0;
  for (std::size_t k = 0; k < n; ++k) out.value += lp.cost[k] * out.primal[k];
  out.status = LpStatus::Optimal;
  return out;
}

}  // namespace sosched
