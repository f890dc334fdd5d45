#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "sosched/matrix.hpp"
#include "sosched/model.hpp"

namespace sosched {

// Pairs are (machine, job), kept sorted by (job, machine).
struct Matching {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double weight = 0.0;

  bool contains(std::size_t machine, std::size_t job) const {
    return std::find(pairs.begin(), pairs.end(), std::pair{machine, job}) != pairs.end();
  }
};

// Nonnegative dual potentials of the fractional matching LP:
// machine[i] + job[j] >= w(i,j), sum equals the optimum matching weight.
struct MatchingDual {
  std::vector<double> machine;
  std::vector<double> job;
  double value = 0.0;
};

namespace detail {

inline void require_finite(const Matrix& w) {
  for (double v : w.data())
    if (std::isnan(v)) throw DataError("matching weights contain NaN");
}

// Rectangular min-cost assignment (rows <= cols), shortest augmenting paths
// with potentials. Returns the column assigned to every row.
inline std::vector<std::size_t> assign_min_cost(const std::vector<double>& cost, std::size_t rows, std::size_t cols) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
  std::vector<double> minv(cols + 1);
  std::vector<char> used(cols + 1);
  for (std::size_t i = 1; i <= rows; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * cols + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of(rows, 0);
  for (std::size_t j = 1; j <= cols; ++j)
    if (p[j] != 0) col_of[p[j] - 1] = j - 1;
  return col_of;
}

inline void canonicalize(Matching& m) {
  std::sort(m.pairs.begin(), m.pairs.end(),
            [](const auto& a, const auto& b) { return std::pair{a.second, a.first} < std::pair{b.second, b.first}; });
}

inline double tie_tolerance(double value) { return 1e-10 * std::max(1.0, std::abs(value)); }

// Lexicographic order on canonical pair lists, comparing (job, machine).
inline bool lex_less(const Matching& a, const Matching& b) {
  return std::lexicographical_compare(a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end(),
                                      [](const auto& x, const auto& y) {
                                        return std::pair{x.second, x.first} < std::pair{y.second, y.first};
                                      });
}

}  // namespace detail

// Some maximum-weight matching (no tie rule). Non-positive edges are treated
// as absent, which is the same as padding the short side with zero dummies.
inline Matching max_weight_matching_any(const Matrix& w) {
  detail::require_finite(w);
  Matching out;
  const std::size_t m = w.rows(), n = w.cols();
  if (m == 0 || n == 0) return out;
  const bool by_machine = m <= n;
  const std::size_t rows = by_machine ? m : n, cols = by_machine ? n : m;
  std::vector<double> cost(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = by_machine ? w(r, c) : w(c, r);
      cost[r * cols + c] = -std::max(x, 0.0);
    }
  const auto col_of = detail::assign_min_cost(cost, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t i = by_machine ? r : col_of[r];
    const std::size_t j = by_machine ? col_of[r] : r;
    if (w(i, j) > 0.0) {
      out.pairs.emplace_back(i, j);
      out.weight += w(i, j);
    }
  }
  detail::canonicalize(out);
  return out;
}

// Machine-optimal dual: machine[i] is the marginal value of machine i, the
// matched job takes the rest of its edge weight.
inline MatchingDual matching_dual(const Matrix& w) {
  MatchingDual dual;
  const std::size_t m = w.rows(), n = w.cols();
  dual.machine.assign(m, 0.0);
  dual.job.assign(n, 0.0);
  const Matching best = max_weight_matching_any(w);
  dual.value = best.weight;
  if (best.pairs.empty()) return dual;
  Matrix reduced = w;
  for (const auto& [i, j] : best.pairs) {
    auto row = reduced.row(i);
    std::fill(row.begin(), row.end(), 0.0);
    const double without = max_weight_matching_any(reduced).weight;
    dual.machine[i] = std::max(0.0, best.weight - without);
    std::copy(w.row(i).begin(), w.row(i).end(), row.begin());
  }
  for (const auto& [i, j] : best.pairs) dual.job[j] = std::max(0.0, w(i, j) - dual.machine[i]);
  return dual;
}

// Maximum-weight matching; among maximum matchings the one whose
// (job, machine)-sorted pair list is lexicographically smallest.
inline Matching max_weight_matching(const Matrix& w) {
  Matching reference = max_weight_matching_any(w);
  const std::size_t m = w.rows(), n = w.cols();
  if (reference.pairs.empty()) return reference;
  const double best = reference.weight;
  const MatchingDual dual = matching_dual(w);
  double scale = 1.0;
  for (double x : w.data()) scale = std::max(scale, std::abs(x));
  auto tight = [&](std::size_t i, std::size_t j) {
    return w(i, j) > 0.0 && std::abs(dual.machine[i] + dual.job[j] - w(i, j)) <= 1e-8 * scale;
  };

  Matching out;
  std::vector<char> machine_used(m, 0);
  std::vector<std::size_t> partner(n, m);  // partner in reference, m = unmatched
  auto load_reference = [&](const Matching& ref) {
    std::fill(partner.begin(), partner.end(), m);
    for (const auto& [i, j] : ref.pairs) partner[j] = i;
  };
  load_reference(reference);

  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t limit = partner[j];
    for (std::size_t i = 0; i < limit; ++i) {
      if (machine_used[i] || !tight(i, j)) continue;
      // Best completion using machines still free (minus i) and jobs after j.
      std::vector<std::size_t> rows, cols;
      for (std::size_t r = 0; r < m; ++r)
        if (!machine_used[r] && r != i) rows.push_back(r);
      for (std::size_t c = j + 1; c < n; ++c) cols.push_back(c);
      Matrix sub(rows.size(), cols.size());
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < cols.size(); ++b) sub(a, b) = w(rows[a], cols[b]);
      const Matching rest = max_weight_matching_any(sub);
      if (out.weight + w(i, j) + rest.weight < best - detail::tie_tolerance(best)) continue;
      Matching ref = out;
      ref.pairs.emplace_back(i, j);
      for (const auto& [a, b] : rest.pairs) ref.pairs.emplace_back(rows[a], cols[b]);
      load_reference(ref);
      break;
    }
    if (partner[j] < m) {
      machine_used[partner[j]] = 1;
      out.pairs.emplace_back(partner[j], j);
      out.weight += w(partner[j], j);
    }
  }
  detail::canonicalize(out);
  return out;
}

// Exhaustive oracle over partial matchings; same tie rule as above.
inline Matching brute_force_matching(const Matrix& w) {
  detail::require_finite(w);
  const std::size_t m = w.rows(), n = w.cols();
  if (std::min(m, n) > 6) throw DataError("brute_force_matching is limited to min(m, n) <= 6");
  const bool by_machine = m <= n;
  const std::size_t small = by_machine ? m : n, large = by_machine ? n : m;

  Matching best;
  bool have = false;
  Matching cur;
  std::vector<char> taken(large, 0);
  auto consider = [&]() {
    Matching cand = cur;
    detail::canonicalize(cand);
    if (!have || cand.weight > best.weight + detail::tie_tolerance(best.weight) ||
        (cand.weight >= best.weight - detail::tie_tolerance(best.weight) && detail::lex_less(cand, best))) {
      best = std::move(cand);
      have = true;
    }
  };
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == small) {
      consider();
      return;
    }
    self(self, k + 1);
    for (std::size_t l = 0; l < large; ++l) {
      if (taken[l]) continue;
      const std::size_t i = by_machine ? k : l, j = by_machine ? l : k;
      if (!(w(i, j) > 0.0)) continue;
      taken[l] = 1;
      cur.pairs.emplace_back(i, j);
      cur.weight += w(i, j);
      self(self, k + 1);
      cur.weight -= w(i, j);
      cur.pairs.pop_back();
      taken[l] = 0;
    }
  };
  rec(rec, 0);
  // Recompute the weight in canonical order so equal matchings agree bitwise.
  best.weight = 0.0;
  for (const auto& [i, j] : best.pairs) best.weight += w(i, j);
  return best;
}

}  // namespace sosched
