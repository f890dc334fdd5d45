#include <gtest/gtest.h>

#include "sosched/pf_solver.hpp"
#include "sosched/rng.hpp"

using namespace sosched;

namespace {

CpProblem random_problem(Rng& rng, std::size_t m, std::size_t n) {
  CpProblem p;
  p.pred_speeds = Matrix(m, n);
  for (std::size_t j = 0; j < n; ++j) p.weights.push_back(rng.uniform(0.5, 3.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) p.pred_speeds(i, j) = rng.uniform(0.2, 6.0);
  return p;
}

double uniform_objective(const CpProblem& p) {
  const std::size_t m = p.pred_speeds.rows(), n = p.pred_speeds.cols();
  return cp_objective(p, Matrix(m, n, 1.0 / static_cast<double>(std::max(m, n))));
}

}  // namespace

TEST(SolveCp, SingleJobCorner) {
  CpProblem p{{1.0}, Matrix{{2.0}, {1.0}}};
  auto sol = solve_cp(p);
  ASSERT_TRUE(sol.converged);
  EXPECT_NEAR(sol.rates(0, 0), 1.0, 1e-6);
  EXPECT_NEAR(sol.rates(1, 0), 0.0, 1e-6);
  EXPECT_NEAR(sol.objective, std::log(2.0), 1e-6);

  // Grid oracle over y1 + y2 <= 1.
  double best = -1e300;
  for (int a = 0; a <= 200; ++a)
    for (int b = 0; a + b <= 200; ++b) {
      if (a + b == 0) continue;
      best = std::max(best, cp_objective(p, Matrix{{a / 200.0}, {b / 200.0}}));
    }
  EXPECT_GE(sol.objective, best - 1e-9);
}

TEST(SolveCp, SymmetricSharing) {
  CpProblem p{{1.0, 1.0}, Matrix{{1.0, 1.0}}};
  auto sol = solve_cp(p);
  ASSERT_TRUE(sol.converged);
  EXPECT_NEAR(sol.rates(0, 0), 0.5, 1e-6);
  EXPECT_NEAR(sol.rates(0, 1), 0.5, 1e-6);
}

TEST(SolveCp, RelatedMachinesGiveRoundRobin) {
  CpProblem p{{1, 1, 1, 1}, Matrix{{3, 3, 3, 3}, {1, 1, 1, 1}}};
  auto sol = solve_cp(p);
  ASSERT_TRUE(sol.converged);
  // Any optimum gives every job the same progress (s1 + s2) / 4 = 1.
  const double opt = 0.0;
  EXPECT_NEAR(sol.objective, opt, 1e-6);
  EXPECT_NEAR(cp_objective(p, Matrix(2, 4, 0.25)), opt, 1e-12);
  EXPECT_LE(kkt_residual(p, Matrix(2, 4, 0.25)).residual, 1e-9);
}

TEST(SolveCp, RejectsBadData) {
  EXPECT_THROW(solve_cp(CpProblem{{1.0}, Matrix{{0.0}}}), DataError);
  EXPECT_THROW(solve_cp(CpProblem{{-1.0}, Matrix{{1.0}}}), DataError);
  EXPECT_THROW(solve_cp(CpProblem{{1.0, 1.0}, Matrix{{1.0}}}), DataError);
}

TEST(SolveCp, ReportsNonConvergence) {
  Rng rng(3);
  CpOptions opt;
  opt.max_iters = 1;
  auto sol = solve_cp(random_problem(rng, 4, 6), opt);
  EXPECT_FALSE(sol.converged);
}

TEST(Kkt, Examples) {
  CpProblem p{{1.0}, Matrix{{2.0}, {1.0}}};
  auto good = kkt_residual(p, Matrix{{1.0}, {0.0}});
  EXPECT_LE(good.residual, 1e-9);
  EXPECT_NEAR(good.eta[0] + good.theta[0], 1.0, 1e-12);
  EXPECT_GT(kkt_residual(p, Matrix{{0.5}, {0.5}}).residual, 0.1);

  CpProblem sym{{1.0, 1.0}, Matrix{{1.0, 1.0}}};
  EXPECT_LE(kkt_residual(sym, Matrix{{0.5, 0.5}}).residual, 1e-9);
  EXPECT_THROW(kkt_residual(sym, Matrix{{1.0, 0.0}}), DataError);
}

TEST(SolveCp, RandomProblemsSatisfyKktAndIdentities) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 1 + rng.uniform_int(0, 5), n = 1 + rng.uniform_int(0, 7);
    auto p = random_problem(rng, m, n);
    auto sol = solve_cp(p);
    ASSERT_TRUE(sol.converged) << "trial " << trial << " residual " << sol.residual;
    auto rep = kkt_residual(p, sol.rates);
    EXPECT_LE(rep.residual, 1e-6);
    double W = 0, mult = 0;
    for (double w : p.weights) W += w;
    for (double e : rep.eta) mult += e;
    for (double t : rep.theta) mult += t;
    EXPECT_NEAR(mult, W, 1e-5 * W);
    EXPECT_GE(sol.objective, uniform_objective(p) - 1e-12);
    // Feasibility and positive progress.
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0;
      for (std::size_t j = 0; j < n; ++j) row += sol.rates(i, j);
      EXPECT_LE(row, 1.0 + 1e-9);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double col = 0, q = 0;
      for (std::size_t i = 0; i < m; ++i) {
        col += sol.rates(i, j);
        q += p.pred_speeds(i, j) * sol.rates(i, j);
      }
      EXPECT_LE(col, 1.0 + 1e-9);
      EXPECT_GT(q, 0.0);
    }
  }
}

TEST(SolveCp, ScaleEquivariance) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_problem(rng, 3, 4);
    auto base = solve_cp(p);
    CpProblem scaled = p;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) scaled.pred_speeds(i, j) *= 8.0;
    auto other = solve_cp(scaled);
    ASSERT_TRUE(base.converged && other.converged);
    EXPECT_NEAR(other.objective - base.objective, std::log(8.0) * [&] {
      double W = 0;
      for (double w : p.weights) W += w;
      return W;
    }(), 1e-6);
    // Rates agree up to the tolerance when the optimum is unique; compare
    // progress, which is unique by strict concavity in q.
    for (std::size_t j = 0; j < 4; ++j) {
      double qa = 0, qb = 0;
      for (std::size_t i = 0; i < 3; ++i) {
        qa += p.pred_speeds(i, j) * base.rates(i, j);
        qb += p.pred_speeds(i, j) * other.rates(i, j);
      }
      EXPECT_NEAR(qa, qb, 1e-3 * qa);
    }
  }
}

TEST(SolveCp, SingleJobUsesArgmaxMachine) {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = random_problem(rng, 5, 1);
    auto sol = solve_cp(p);
    std::size_t best = 0;
    for (std::size_t i = 1; i < 5; ++i)
      if (p.pred_speeds(i, 0) > p.pred_speeds(best, 0)) best = i;
    EXPECT_NEAR(sol.rates(best, 0), 1.0, 1e-6);
  }
}

// Many more jobs than machines with big/LITTLE-style predictions: the
// optimum is degenerate and the interior point alone can stall just above
// the tolerance.
TEST(SolveCp, DegenerateBigLittleProblemsConverge) {
  Rng rng(94);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 10 + rng.uniform_int(0, 20);
    CpProblem p;
    p.weights.assign(n, 1.0);
    p.pred_speeds = Matrix(8, n);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> big;
      for (int i = 0; i < 4; ++i) big.push_back(rng.uniform(2.0, 6.0));
      std::sort(big.begin(), big.end(), std::greater<>());
      for (std::size_t i = 0; i < 8; ++i)
        p.pred_speeds(i, j) = (i < 4 ? big[i] : 1.0) * std::exp(0.5 * rng.normal());
    }
    auto sol = solve_cp(p);
    ASSERT_TRUE(sol.converged) << "trial " << trial << " residual " << sol.residual;
    EXPECT_LE(kkt_residual(p, sol.rates).residual, 1e-6);
  }
}

TEST(SolveCp, InteriorPointAndFrankWolfeAgree) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_problem(rng, 1 + rng.uniform_int(0, 4), 1 + rng.uniform_int(0, 7));
    auto a = solve_cp_interior_point(p);
    auto b = solve_cp_frank_wolfe(p, CpOptions{1e-7, 200000});
    ASSERT_TRUE(a.converged && b.converged) << trial;
    EXPECT_NEAR(a.objective, b.objective, 1e-6 * std::max(1.0, std::abs(a.objective)));
  }
}
