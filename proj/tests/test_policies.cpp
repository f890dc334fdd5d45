#include <gtest/gtest.h>

#include "sosched/policies.hpp"
#include "sosched/rng.hpp"

using namespace sosched;

namespace {

JobView view(std::size_t index, double w, std::optional<double> p, std::optional<std::vector<double>> pred,
             double r = 0.0) {
  return JobView{index, static_cast<int>(index), r, w, p, std::move(pred)};
}

using Triples = std::vector<std::tuple<std::size_t, std::size_t, double>>;

Triples triples(const RateAssignment& a) {
  Triples out;
  for (const auto& e : a.entries) out.emplace_back(e.machine, e.job, e.rate);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(MaxDensity, SingleMachineSmith) {
  MaxDensityPolicy p;
  p.reset(1);
  auto r = p.decide(0, {view(0, 1, 1.0, std::vector<double>{1}), view(1, 1, 2.0, std::vector<double>{1})});
  EXPECT_EQ(triples(r), (Triples{{0, 0, 1.0}}));
}

TEST(MaxDensity, DiagonalMatching) {
  MaxDensityPolicy p;
  p.reset(2);
  // delta = [[2,1],[1,2]] with w = 1, p = 1.
  auto r = p.decide(0, {view(0, 1, 1.0, std::vector<double>{2, 1}), view(1, 1, 1.0, std::vector<double>{1, 2})});
  EXPECT_EQ(triples(r), (Triples{{0, 0, 1.0}, {1, 1, 1.0}}));
}

TEST(MaxDensity, PartialMatchingKeepsDensest) {
  MaxDensityPolicy p;
  p.reset(1);
  auto r = p.decide(0, {view(0, 1, 1.0, std::vector<double>{3}), view(1, 1, 1.0, std::vector<double>{2}),
                        view(2, 1, 1.0, std::vector<double>{1})});
  EXPECT_EQ(triples(r), (Triples{{0, 0, 1.0}}));
}

TEST(MaxDensity, MissingDataRejected) {
  MaxDensityPolicy p;
  p.reset(1);
  EXPECT_THROW(p.decide(0, {view(0, 1, std::nullopt, std::vector<double>{1})}), DataError);
  EXPECT_THROW(p.decide(0, {view(0, 1, 1.0, std::nullopt)}), DataError);
}

TEST(MaxDensity, PredictionScalingKeepsPairs) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    MaxDensityPolicy p;
    p.reset(3);
    std::vector<JobView> a, b;
    for (std::size_t j = 0; j < 5; ++j) {
      std::vector<double> col;
      for (int i = 0; i < 3; ++i) col.push_back(rng.uniform_int(1, 4));
      std::vector<double> scaled = col;
      for (double& x : scaled) x *= 7.5;
      const double vol = rng.uniform_int(1, 3);
      a.push_back(view(j, 1, vol, col));
      b.push_back(view(j, 1, vol, scaled));
    }
    EXPECT_EQ(triples(p.decide(0, a)), triples(p.decide(0, b)));
  }
}

TEST(GreedyWspt, QHatExamples) {
  GreedyWsptPolicy g;
  g.reset(1);
  auto job = view(0, 1, 3.0, std::vector<double>{1});
  EXPECT_NEAR(g.q_hat(job, 0), 8.0, 1e-12);

  GreedyWsptPolicy two;
  two.reset(2);
  auto fast = view(0, 1, 3.0, std::vector<double>{3, 1});
  EXPECT_NEAR(two.q_hat(fast, 0), 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(two.q_hat(fast, 1), 8.0, 1e-12);
  two.on_release(0, fast);
  EXPECT_EQ(two.machine_of(0), 0u);

  // A second identical job sees the first in its queue with equal density.
  g.on_release(0, job);
  EXPECT_NEAR(g.q_hat(view(1, 1, 3.0, std::vector<double>{1}), 0), 11.0, 1e-12);
}

TEST(GreedyWspt, DelayGate) {
  GreedyWsptPolicy g;
  g.reset(1);
  g.on_release(0, view(0, 1, 3.0, std::vector<double>{1}));  // rhat = 2
  EXPECT_TRUE(g.decide(1.0, {}).empty());
  EXPECT_EQ(g.next_wakeup(1.0), 2.0);
  EXPECT_EQ(triples(g.decide(2.0, {})), (Triples{{0, 0, 1.0}}));
}

TEST(GreedyWspt, DispatchByDensityAndNoPreemption) {
  GreedyWsptPolicy g;
  g.reset(1);
  // Released late so rhat = release and both are eligible at t = 10.
  g.on_release(10, view(0, 2, 1.0, std::vector<double>{1}, 10));  // delta 2
  g.on_release(10, view(1, 3, 1.0, std::vector<double>{1}, 10));  // delta 3
  EXPECT_EQ(triples(g.decide(10, {})), (Triples{{0, 1, 1.0}}));
  // A denser job arrives; the running one continues.
  g.on_release(10.5, view(2, 9, 1.0, std::vector<double>{1}, 10.5));
  EXPECT_EQ(triples(g.decide(10.5, {})), (Triples{{0, 1, 1.0}}));
  g.on_complete(11, 1);
  EXPECT_EQ(triples(g.decide(11, {})), (Triples{{0, 2, 1.0}}));
}

TEST(GreedyWspt, DispatchTiesToSmallestId) {
  GreedyWsptPolicy g;
  g.reset(1);
  g.on_release(5, view(0, 1, 1.0, std::vector<double>{1}, 5));
  g.on_release(5, view(1, 1, 1.0, std::vector<double>{1}, 5));
  EXPECT_EQ(triples(g.decide(5, {})), (Triples{{0, 0, 1.0}}));
}

TEST(MaxDensitySo, SortAndTruncate) {
  MaxDensitySpeedOrderedPolicy p;
  p.reset(2);
  auto r = p.decide(0, {view(0, 1, 1.0, std::nullopt), view(1, 3, 1.0, std::nullopt), view(2, 2, 1.0, std::nullopt)});
  EXPECT_EQ(triples(r), (Triples{{0, 1, 1.0}, {1, 2, 1.0}}));

  MaxDensitySpeedOrderedPolicy four;
  four.reset(4);
  EXPECT_EQ(triples(four.decide(0, {view(0, 1, 1.0, std::nullopt)})), (Triples{{0, 0, 1.0}}));

  auto ties = p.decide(0, {view(0, 1, 1.0, std::nullopt), view(1, 1, 1.0, std::nullopt), view(2, 1, 1.0, std::nullopt)});
  EXPECT_EQ(triples(ties), (Triples{{0, 0, 1.0}, {1, 1, 1.0}}));
}

TEST(RoundRobinSo, Examples) {
  RoundRobinSpeedOrderedPolicy p;
  p.reset(4);
  auto two = p.decide(0, {view(0, 1, std::nullopt, std::nullopt), view(1, 1, std::nullopt, std::nullopt)});
  EXPECT_EQ(triples(two), (Triples{{0, 0, 0.5}, {0, 1, 0.5}, {1, 0, 0.5}, {1, 1, 0.5}}));

  std::vector<JobView> six;
  for (std::size_t j = 0; j < 6; ++j) six.push_back(view(j, 1, std::nullopt, std::nullopt));
  auto r = p.decide(0, six);
  std::vector<bool> alive(6, true);
  EXPECT_TRUE(check_rates_feasible(r, alive, 4).empty());
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 0;
    for (std::size_t j = 0; j < 6; ++j) s += r.rate(i, j);
    EXPECT_NEAR(s, 1.0, 1e-15);
  }
  EXPECT_TRUE(p.decide(0, {}).empty());
}

TEST(RoundRobin, Examples) {
  RoundRobinPolicy p;
  p.reset(4);
  auto one = p.decide(0, {view(0, 1, std::nullopt, std::nullopt)});
  EXPECT_EQ(one.entries.size(), 4u);
  for (const auto& e : one.entries) EXPECT_DOUBLE_EQ(e.rate, 0.25);
  for (std::size_t n : {4u, 8u}) {
    std::vector<JobView> jobs;
    for (std::size_t j = 0; j < n; ++j) jobs.push_back(view(j, 1, std::nullopt, std::nullopt));
    auto r = p.decide(0, jobs);
    for (const auto& e : r.entries) EXPECT_DOUBLE_EQ(e.rate, 1.0 / n);
    EXPECT_TRUE(check_rates_feasible(r, std::vector<bool>(n, true), 4, 0.0).empty());
  }
}

TEST(IterativeGreedy, Examples) {
  IterativeGreedyPolicy p;
  p.reset(2);
  // w s-hat = [[3,1],[2,4]] (rows are machines).
  auto r = p.decide(0, {view(0, 1, std::nullopt, std::vector<double>{3, 2}),
                        view(1, 1, std::nullopt, std::vector<double>{1, 4})});
  EXPECT_EQ(triples(r), (Triples{{0, 0, 1.0}, {1, 1, 1.0}}));

  IterativeGreedyPolicy three;
  three.reset(3);
  EXPECT_EQ(triples(three.decide(0, {view(0, 1, std::nullopt, std::vector<double>{1, 5, 2})})), (Triples{{1, 0, 1.0}}));
  std::vector<JobView> eq;
  for (std::size_t j = 0; j < 3; ++j) eq.push_back(view(j, 1, std::nullopt, std::vector<double>{1, 1, 1}));
  EXPECT_EQ(triples(three.decide(0, eq)), (Triples{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}}));
}

TEST(ProportionalFairness, ThinAdapter) {
  ProportionalFairnessPolicy p;
  p.reset(2);
  auto one = p.decide(0, {view(0, 1, std::nullopt, std::vector<double>{2, 1})});
  EXPECT_NEAR(one.rate(0, 0), 1.0, 1e-6);
  EXPECT_NEAR(one.rate(1, 0), 0.0, 1e-6);

  ProportionalFairnessPolicy single;
  single.reset(1);
  auto sym = single.decide(0, {view(0, 1, std::nullopt, std::vector<double>{1}),
                               view(1, 1, std::nullopt, std::vector<double>{1})});
  EXPECT_NEAR(sym.rate(0, 0), 0.5, 1e-6);
  EXPECT_NEAR(sym.rate(0, 1), 0.5, 1e-6);

  // Related machines with |J| >= m: uniform rates are optimal, so every job
  // gets the same predicted progress.
  std::vector<JobView> rel;
  for (std::size_t j = 0; j < 4; ++j) rel.push_back(view(j, 1, std::nullopt, std::vector<double>{3, 1}));
  auto r = p.decide(0, rel);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(3 * r.rate(0, j) + r.rate(1, j), 1.0, 1e-5);
}

TEST(FixedAssignment, RunsHighestPriorityPerMachine) {
  FixedAssignmentPolicy p({0, 0, 1}, {1, 0, 2});
  p.reset(2);
  auto r = p.decide(0, {view(0, 1, std::nullopt, std::nullopt), view(1, 1, std::nullopt, std::nullopt),
                        view(2, 1, std::nullopt, std::nullopt)});
  EXPECT_EQ(triples(r), (Triples{{0, 1, 1.0}, {1, 2, 1.0}}));
}

TEST(MakePolicy, NamesAndInfo) {
  for (const auto& name : policy_names()) EXPECT_EQ(make_policy(name)->info().name, name);
  EXPECT_THROW(make_policy("nope"), DataError);
  EXPECT_FALSE(make_policy("rr-so")->info().clairvoyant);
  EXPECT_FALSE(make_policy("rr-so")->info().uses_predictions);
  EXPECT_FALSE(make_policy("max-density-so")->info().uses_predictions);
  EXPECT_FALSE(make_policy("pf")->info().clairvoyant);
  EXPECT_FALSE(make_policy("greedy-wspt")->info().stateless);
}

TEST(AllPolicies, RandomEpochsAreFeasible) {
  Rng rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t m = rng.uniform_int(1, 5), n = rng.uniform_int(0, 7);
    std::vector<JobView> jobs;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> col;
      for (std::size_t i = 0; i < m; ++i) col.push_back(rng.uniform(0.1, 5.0));
      jobs.push_back(view(j, rng.uniform(0.5, 2.0), rng.uniform(1.0, 9.0), col));
    }
    const std::string name = policy_names()[trial % policy_names().size()];
    auto p = make_policy(name);
    p->reset(m);
    for (const auto& v : jobs) p->on_release(0, v);
    auto r = p->decide(0, jobs);
    EXPECT_TRUE(check_rates_feasible(r, std::vector<bool>(n, true), m, 1e-9).empty()) << name << " trial " << trial;
  }
}
