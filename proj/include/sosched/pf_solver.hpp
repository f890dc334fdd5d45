#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "sosched/matching.hpp"
#include "sosched/matrix.hpp"
#include "sosched/model.hpp"

namespace sosched {

// maximize sum_j w_j log(sum_i s_ij y_ij) over doubly substochastic y.
// pred_speeds is m x n for the n alive jobs.
struct CpProblem {
  std::vector<double> weights;
  Matrix pred_speeds;
};

struct KktReport {
  std::vector<double> eta;    // per machine
  std::vector<double> theta;  // per job
  double residual = 0.0;
};

struct CpSolution {
  Matrix rates;
  double objective = -std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
  double gap = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
  bool converged = false;
};

struct CpOptions {
  double tol = 1e-6;
  std::size_t max_iters = 20000;
  double active_threshold = 1e-6;  // edges above this must satisfy stationarity with equality
};

namespace detail {

inline void check_problem(const CpProblem& p) {
  if (p.weights.size() != p.pred_speeds.cols()) throw DataError("CP weights do not match prediction columns");
  for (double w : p.weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw DataError("CP weights must be positive");
  for (double s : p.pred_speeds.data())
    if (!(s > 0.0) || !std::isfinite(s)) throw DataError("CP predicted speeds must be positive");
}

inline std::vector<double> progress(const CpProblem& p, const Matrix& y) {
  std::vector<double> q(p.pred_speeds.cols(), 0.0);
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) q[j] += p.pred_speeds(i, j) * y(i, j);
  return q;
}

inline Matrix gradient(const CpProblem& p, const std::vector<double>& q) {
  Matrix g(p.pred_speeds.rows(), p.pred_speeds.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) = p.weights[j] * p.pred_speeds(i, j) / q[j];
  return g;
}

}  // namespace detail

inline double cp_objective(const CpProblem& p, const Matrix& y) {
  const auto q = detail::progress(p, y);
  double total = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (!(q[j] > 0.0)) return -std::numeric_limits<double>::infinity();
    total += p.weights[j] * std::log(q[j]);
  }
  return total;
}

// Multipliers come from the optimal dual of the linearized problem
// max <g, y>; at a true optimum any such dual satisfies every condition.
inline KktReport kkt_residual(const CpProblem& p, const Matrix& y, double active_threshold = 1e-6) {
  detail::check_problem(p);
  const std::size_t m = p.pred_speeds.rows(), n = p.pred_speeds.cols();
  if (y.rows() != m || y.cols() != n) throw DataError("rate matrix shape does not match the CP");
  const auto q = detail::progress(p, y);
  for (std::size_t j = 0; j < n; ++j)
    if (!(q[j] > 0.0)) throw DataError("job " + std::to_string(j) + " has zero predicted progress");
  const Matrix g = detail::gradient(p, q);
  const MatchingDual dual = matching_dual(g);

  KktReport rep;
  rep.eta = dual.machine;
  rep.theta = dual.job;
  double r = 0.0;
  std::vector<double> row(m, 0.0), col(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double yij = y(i, j);
      r = std::max(r, -yij);
      row[i] += yij;
      col[j] += yij;
      const double slack = g(i, j) - rep.eta[i] - rep.theta[j];
      r = std::max(r, slack);  // stationarity: g <= eta + theta
      r = std::max(r, std::abs(yij * slack));
      if (yij > active_threshold) r = std::max(r, std::abs(slack));
    }
  for (std::size_t i = 0; i < m; ++i) {
    r = std::max(r, row[i] - 1.0);
    r = std::max(r, rep.eta[i] * (1.0 - row[i]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    r = std::max(r, col[j] - 1.0);
    r = std::max(r, rep.theta[j] * (1.0 - col[j]));
  }
  rep.residual = r;
  return rep;
}

// Pairwise Frank-Wolfe. Vertices of the polytope are partial matchings, so
// the linear oracle is a max-weight matching on the gradient. The iterate is
// kept as a convex combination of matchings; pairwise steps move weight from
// the worst active matching to the oracle matching, which lets stale support
// drop out exactly. Reliable on small problems, but it can stall on
// degenerate faces once n grows past ~20; solve_cp uses it only as a fallback.
inline CpSolution solve_cp_frank_wolfe(const CpProblem& p, const CpOptions& opt = {}) {
  detail::check_problem(p);
  if (!(opt.tol > 0.0)) throw DataError("CP tolerance must be positive");
  const std::size_t m = p.pred_speeds.rows(), n = p.pred_speeds.cols();
  CpSolution out;
  out.rates = Matrix(m, n);
  if (n == 0) {
    out.objective = 0.0;
    out.residual = out.gap = 0.0;
    out.converged = true;
    return out;
  }
  using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;
  std::map<Pairs, double> active;

  const std::size_t K = std::max(n, m);
  for (std::size_t k = 0; k < K; ++k) {
    Pairs v;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = (i + k) % K;
      if (j < n) v.emplace_back(i, j);
    }
    if (v.empty()) continue;
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return std::pair{a.second, a.first} < std::pair{b.second, b.first}; });
    active[v] += 1.0 / static_cast<double>(K);
  }
  // Empty-slot mass keeps the weights summing to one; the empty matching is
  // a vertex too.
  double mass = 0.0;
  for (const auto& [v, lam] : active) mass += lam;
  if (mass < 1.0 - 1e-15) active[Pairs{}] += 1.0 - mass;

  Matrix& y = out.rates;
  auto rebuild = [&]() {
    y = Matrix(m, n);
    for (const auto& [v, lam] : active)
      for (const auto& [i, j] : v) y(i, j) += lam;
  };
  rebuild();

  auto inner = [](const Matrix& g, const Pairs& v) {
    double s = 0.0;
    for (const auto& [i, j] : v) s += g(i, j);
    return s;
  };

  double last_check_gap = std::numeric_limits<double>::infinity();
  double W = 0.0;
  for (double w : p.weights) W += w;
  std::vector<double> dq(n);

  for (std::size_t it = 0;; ++it) {
    const auto q = detail::progress(p, y);
    const Matrix g = detail::gradient(p, q);
    Matching fw = max_weight_matching_any(g);
    double gy = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) gy += g(i, j) * y(i, j);
    out.gap = fw.weight - gy;
    out.iterations = it;

    if (out.gap <= 0.1 * opt.tol * std::max(1.0, W) && out.gap < 0.5 * last_check_gap) {
      last_check_gap = out.gap;
      const KktReport rep = kkt_residual(p, y, opt.active_threshold);
      out.residual = rep.residual;
      if (rep.residual <= opt.tol) {
        out.converged = true;
        break;
      }
    }
    if (it >= opt.max_iters) break;

    // Away vertex: active matching with the smallest inner product.
    auto away = active.end();
    double away_val = std::numeric_limits<double>::infinity();
    for (auto itv = active.begin(); itv != active.end(); ++itv) {
      const double val = inner(g, itv->first);
      if (val < away_val) {
        away_val = val;
        away = itv;
      }
    }
    if (fw.weight - away_val <= 0.0) {
      // Every active vertex is already optimal for the linearization.
      const KktReport rep = kkt_residual(p, y, opt.active_threshold);
      out.residual = rep.residual;
      out.converged = rep.residual <= opt.tol;
      break;
    }
    const double gamma_max = away->second;
    Pairs fw_pairs = fw.pairs;

    std::fill(dq.begin(), dq.end(), 0.0);
    for (const auto& [i, j] : fw_pairs) dq[j] += p.pred_speeds(i, j);
    for (const auto& [i, j] : away->first) dq[j] -= p.pred_speeds(i, j);

    auto dphi = [&](double gamma) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (dq[j] == 0.0) continue;
        const double qj = q[j] + gamma * dq[j];
        if (!(qj > 0.0)) return -std::numeric_limits<double>::infinity();
        s += p.weights[j] * dq[j] / qj;
      }
      return s;
    };
    auto d2phi = [&](double gamma) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (dq[j] == 0.0) continue;
        const double qj = q[j] + gamma * dq[j];
        s -= p.weights[j] * dq[j] * dq[j] / (qj * qj);
      }
      return s;
    };

    double gamma;
    if (dphi(gamma_max) >= 0.0) {
      gamma = gamma_max;
    } else {
      // phi' is strictly decreasing; safeguarded Newton on [lo, hi].
      double lo = 0.0, hi = gamma_max;
      gamma = 0.5 * hi;
      for (int k = 0; k < 100; ++k) {
        const double d = dphi(gamma);
        if (d > 0.0) lo = gamma;
        else hi = gamma;
        const double h = d2phi(gamma);
        double next = (h < 0.0 && std::isfinite(d)) ? gamma - d / h : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - gamma) <= 1e-16 * std::max(1.0, gamma) || hi - lo <= 1e-18) {
          gamma = next;
          break;
        }
        gamma = next;
      }
    }
    if (gamma <= 0.0) continue;

    const Pairs away_pairs = away->first;
    if (gamma >= gamma_max) active.erase(away);
    else away->second -= gamma;
    active[fw_pairs] += gamma;
    for (const auto& [i, j] : fw_pairs) y(i, j) += gamma;
    for (const auto& [i, j] : away_pairs) y(i, j) -= gamma;
    if (it % 200 == 199) rebuild();
  }
  rebuild();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) y(i, j) = std::clamp(y(i, j), 0.0, 1.0);
  out.objective = cp_objective(p, y);
  return out;
}

namespace detail {

// In-place Cholesky factor (lower triangle). Pivots that cancel down to
// rounding level are replaced by a huge value, which zeroes that component
// of the solution instead of failing; the usual interior-point safeguard for
// nearly singular normal equations. Returns false only on non-finite input.
inline bool cholesky(Matrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < n; ++j) {
    const double orig = a(j, j);
    double d = orig;
    for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!std::isfinite(d)) return false;
    if (!(d > 1e-13 * std::abs(orig))) d = 1e128;
    d = std::sqrt(d);
    a(j, j) = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
      a(i, j) = v / d;
    }
  }
  return true;
}

inline void cholesky_solve(const Matrix& l, std::vector<double>& b) {
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
    b[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= l(k, i) * b[k];
    b[i] /= l(i, i);
  }
}

// Divides each entry by max(1, its row sum, its column sum), so residual
// rounding in the equality constraints never leaves the polytope.
inline Matrix clip_to_polytope(const Matrix& y) {
  const std::size_t m = y.rows(), n = y.cols();
  std::vector<double> row(m, 0.0), col(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      row[i] += std::max(0.0, y(i, j));
      col[j] += std::max(0.0, y(i, j));
    }
  Matrix out(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = std::max(0.0, y(i, j)) / std::max({1.0, row[i], col[j]});
  return out;
}

}  // namespace detail

// Primal-dual interior point method on
//   min -sum_j w_j log q_j   s.t.  sum_j y_ij + u_i = 1,  sum_i y_ij + v_j = 1,
//   y, u, v >= 0.
// Explicit slacks u, v keep tiny row/column slack representable. The normal
// equations are (m + n) square but have a diagonal column block: each job
// block of the Hessian is diagonal plus rank one (Sherman-Morrison), so a
// step costs O(n m^2 + m^3).
inline CpSolution solve_cp_interior_point(const CpProblem& p, const CpOptions& opt = {}) {
  detail::check_problem(p);
  if (!(opt.tol > 0.0)) throw DataError("CP tolerance must be positive");
  const std::size_t m = p.pred_speeds.rows(), n = p.pred_speeds.cols();
  CpSolution out;
  out.rates = Matrix(m, n);
  if (n == 0) {
    out.objective = 0.0;
    out.residual = out.gap = 0.0;
    out.converged = true;
    return out;
  }
  const Matrix& s = p.pred_speeds;
  const std::vector<double>& w = p.weights;
  const double total = static_cast<double>(m * n + m + n);

  Matrix y(m, n, 1.0 / static_cast<double>(std::max(n, m) + 1)), zy(m, n, 1.0);
  std::vector<double> u(m), v(n), zu(m, 1.0), zv(n, 1.0), eta(m, 0.0), theta(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) u[i] = 1.0 - static_cast<double>(n) * y(i, 0);
  for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 - static_cast<double>(m) * y(0, j);

  std::vector<double> q(n), a(n);
  Matrix g(m, n);
  // Newton workspace.
  std::vector<Matrix> binv(n, Matrix(m, m));
  Matrix ry(m, n), ky(m, n), dy(m, n), dzy(m, n);
  std::vector<double> ru(m), rv(n), rpr(m), rpc(n), ku(m), kv(n), du(m), dv(n), dzu(m), dzv(n);
  std::vector<double> ncc(n), hr(m), hc(n), deta(m), dtheta(n);
  Matrix nrc(m, n), S(m, m);

  auto refresh = [&]() {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) q[j] += s(i, j) * y(i, j);
    for (std::size_t j = 0; j < n; ++j) a[j] = w[j] / (q[j] * q[j]);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = w[j] * s(i, j) / q[j];
  };
  auto mu_of = [&]() {
    double c = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) c += y(i, j) * zy(i, j);
    for (std::size_t i = 0; i < m; ++i) c += u[i] * zu[i];
    for (std::size_t j = 0; j < n; ++j) c += v[j] * zv[j];
    return c / total;
  };

  std::size_t it = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  Matrix best_y = y;
  for (; it < opt.max_iters; ++it) {
    refresh();
    const double mu = mu_of();
    // Dual residuals with multipliers eta (rows) and theta (columns):
    //   -g + eta + theta - z = 0,  eta - zu = 0,  theta - zv = 0.
    double dual_inf = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ry(i, j) = -g(i, j) + eta[i] + theta[j] - zy(i, j);
        dual_inf = std::max(dual_inf, std::abs(ry(i, j)));
      }
    for (std::size_t i = 0; i < m; ++i) {
      ru[i] = eta[i] - zu[i];
      double r = u[i] - 1.0;
      for (std::size_t j = 0; j < n; ++j) r += y(i, j);
      rpr[i] = r;
      dual_inf = std::max(dual_inf, std::abs(ru[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      rv[j] = theta[j] - zv[j];
      double r = v[j] - 1.0;
      for (std::size_t i = 0; i < m; ++i) r += y(i, j);
      rpc[j] = r;
      dual_inf = std::max(dual_inf, std::abs(rv[j]));
    }
    out.gap = mu * total;

    // Clipping restores feasibility, so candidates need no primal gate.
    if (mu < 1e-8 && dual_inf < 1e-6) {
      const Matrix cand = detail::clip_to_polytope(y);
      const double res = kkt_residual(p, cand, opt.active_threshold).residual;
      if (res < best_residual) {
        best_residual = res;
        best_y = cand;
      }
      // Below mu ~ 1e-15 the normal equations are rounding noise.
      if ((res <= 0.1 * opt.tol && mu < 1e-13) || mu < 1e-15) break;
    }

    const double sigma = mu > 1e-4 ? 0.1 : 0.01;
    const double target = sigma * mu;
    // Newton system: K dx + A^T dlam = -r~, A dx = -rp, with
    // K = H + Z/X, r~ = rd + (XZe - target)/X, dlam = (deta, dtheta) entering
    // with a plus sign because eta enters the dual residual positively.
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) ry(i, j) += (y(i, j) * zy(i, j) - target) / y(i, j);
    for (std::size_t i = 0; i < m; ++i) ru[i] += (u[i] * zu[i] - target) / u[i];
    for (std::size_t j = 0; j < n; ++j) rv[j] += (v[j] * zv[j] - target) / v[j];

    // Block inverses: B_j = diag(d) + a_j s_j s_j^T.
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      double c = 0.0;
      std::vector<double> dinv(m), t(m);
      for (std::size_t i = 0; i < m; ++i) {
        dinv[i] = y(i, j) / zy(i, j);
        t[i] = s(i, j) * dinv[i];
        c += s(i, j) * t[i];
      }
      const double denom = 1.0 + a[j] * c;
      Matrix& bi = binv[j];
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
          if (i == k) {
            // 1/d_i * (1 + a sum_{l != i} s_l^2/d_l) / denom, without cancellation.
            bi(i, i) = dinv[i] * (1.0 + a[j] * (c - s(i, j) * t[i])) / denom;
          } else {
            bi(i, k) = -a[j] * t[i] * t[k] / denom;
          }
        }
      if (!std::isfinite(denom)) ok = false;
    }
    if (!ok) break;

    // kappa = K^{-1} r~
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        double c = 0.0;
        for (std::size_t k = 0; k < m; ++k) c += binv[j](i, k) * ry(k, j);
        ky(i, j) = c;
      }
    for (std::size_t i = 0; i < m; ++i) ku[i] = ru[i] * u[i] / zu[i];
    for (std::size_t j = 0; j < n; ++j) kv[j] = rv[j] * v[j] / zv[j];

    // N dlam = rp - A kappa  (from A dx = -rp and dx = -K^{-1}(r~ + A^T dlam)).
    Matrix nrr(m, m);
    for (std::size_t j = 0; j < n; ++j) {
      double tot = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double rs = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          rs += binv[j](i, k);
          nrr(i, k) += binv[j](i, k);
        }
        nrc(i, j) = rs;
        tot += rs;
      }
      ncc[j] = tot + v[j] / zv[j];
    }
    for (std::size_t i = 0; i < m; ++i) nrr(i, i) += u[i] / zu[i];
    for (std::size_t i = 0; i < m; ++i) {
      double c = rpr[i] - ku[i];
      for (std::size_t j = 0; j < n; ++j) c -= ky(i, j);
      hr[i] = c;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double c = rpc[j] - kv[j];
      for (std::size_t i = 0; i < m; ++i) c -= ky(i, j);
      hc[j] = c;
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k <= i; ++k) {
        double c = nrr(i, k);
        for (std::size_t j = 0; j < n; ++j) c -= nrc(i, j) * nrc(k, j) / ncc[j];
        S(i, k) = c;
      }
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
      double c = hr[i];
      for (std::size_t j = 0; j < n; ++j) c -= nrc(i, j) * hc[j] / ncc[j];
      rhs[i] = c;
    }
    if (!detail::cholesky(S)) break;
    detail::cholesky_solve(S, rhs);
    deta = rhs;
    for (std::size_t j = 0; j < n; ++j) {
      double c = hc[j];
      for (std::size_t i = 0; i < m; ++i) c -= nrc(i, j) * deta[i];
      dtheta[j] = c / ncc[j];
    }
    // dx = -K^{-1}(r~ + A^T dlam)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        double c = 0.0;
        for (std::size_t k = 0; k < m; ++k) c += binv[j](i, k) * (deta[k] + dtheta[j]);
        dy(i, j) = -(ky(i, j) + c);
      }
    for (std::size_t i = 0; i < m; ++i) du[i] = -(ku[i] + deta[i] * u[i] / zu[i]);
    for (std::size_t j = 0; j < n; ++j) dv[j] = -(kv[j] + dtheta[j] * v[j] / zv[j]);
    // dz = (target - XZe - Z dx) / X
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) dzy(i, j) = (target - y(i, j) * zy(i, j) - zy(i, j) * dy(i, j)) / y(i, j);
    for (std::size_t i = 0; i < m; ++i) dzu[i] = (target - u[i] * zu[i] - zu[i] * du[i]) / u[i];
    for (std::size_t j = 0; j < n; ++j) dzv[j] = (target - v[j] * zv[j] - zv[j] * dv[j]) / v[j];

    double alpha = 1.0;
    auto limit = [&alpha](double x, double dx) {
      if (dx < 0.0) alpha = std::min(alpha, -0.995 * x / dx);
    };
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        limit(y(i, j), dy(i, j));
        limit(zy(i, j), dzy(i, j));
      }
    for (std::size_t i = 0; i < m; ++i) {
      limit(u[i], du[i]);
      limit(zu[i], dzu[i]);
    }
    for (std::size_t j = 0; j < n; ++j) {
      limit(v[j], dv[j]);
      limit(zv[j], dzv[j]);
    }
    // Collapsed steps mean the iterate has left the central neighbourhood.
    if (alpha < 1e-10) break;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        y(i, j) += alpha * dy(i, j);
        zy(i, j) += alpha * dzy(i, j);
      }
    for (std::size_t i = 0; i < m; ++i) {
      u[i] += alpha * du[i];
      zu[i] += alpha * dzu[i];
      eta[i] += alpha * deta[i];
    }
    for (std::size_t j = 0; j < n; ++j) {
      v[j] += alpha * dv[j];
      zv[j] += alpha * dzv[j];
      theta[j] += alpha * dtheta[j];
    }
  }
  const Matrix last = detail::clip_to_polytope(y);
  const double res = kkt_residual(p, last, opt.active_threshold).residual;
  if (res < best_residual) {
    best_residual = res;
    best_y = last;
  }
  out.rates = best_y;
  out.residual = best_residual;
  out.converged = best_residual <= opt.tol;
  out.iterations = it;
  out.objective = cp_objective(p, out.rates);
  return out;
}

// Interior point first. On degenerate optima its KKT residual can stall
// near sqrt(mu) at the rounding floor; pairwise Frank-Wolfe then finishes.
inline CpSolution solve_cp(const CpProblem& p, const CpOptions& opt = {}) {
  CpSolution ipm = solve_cp_interior_point(p, opt);
  if (ipm.converged) return ipm;
  CpSolution fw = solve_cp_frank_wolfe(p, opt);
  fw.iterations += ipm.iterations;
  return fw.residual < ipm.residual ? fw : ipm;
}

}  // namespace sosched
