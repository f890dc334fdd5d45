#pragma once

// Brute-force references shared by the unit tests and the acceptance run.

#include <cmath>
#include <optional>
#include <vector>

#include "sosched/simplex.hpp"

namespace oracles {

using namespace sosched;

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (std::abs(a[p][c]) < 1e-10) return std::nullopt;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Minimum over all basic feasible points. Adequate for bounded LPs with
// x >= 0, where an optimum is attained at a vertex.
inline std::optional<double> enumerate_vertices(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (const auto& r : lp.rows) {
    std::vector<double> a(n, 0.0);
    for (const auto& [k, v] : r.coeffs) a[k] += v;
    rows.push_back(a);
    rhs.push_back(r.rhs);
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> a(n, 0.0);
    a[k] = 1.0;
    rows.push_back(a);
    rhs.push_back(0.0);
  }
  std::optional<double> best;
  const std::size_t total = rows.size();
  std::vector<std::size_t> pick(n);
  auto rec = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == n) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (std::size_t k : pick) {
        a.push_back(rows[k]);
        b.push_back(rhs[k]);
      }
      auto x = solve_square(a, b);
      if (!x || max_row_violation(lp, *x) > 1e-9) return;
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += lp.cost[k] * (*x)[k];
      if (!best || v < *best) best = v;
      return;
    }
    for (std::size_t k = start; k < total; ++k) {
      pick[depth] = k;
      self(self, k + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

}  // namespace oracles
