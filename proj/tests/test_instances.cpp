#include <gtest/gtest.h>

#include "sosched/engine.hpp"
#include "sosched/instances.hpp"

using namespace sosched;

TEST(Synthetic, RangesAndCount) {
  SyntheticConfig c;
  c.seed = 7;
  auto inst = gen_synthetic(c);
  ASSERT_EQ(inst.job_count(), 100u);
  EXPECT_TRUE(validate_instance(inst).empty());
  const Matrix& s = inst.static_speeds();
  ASSERT_EQ(s.rows(), 8u);
  double prev = 0;
  for (std::size_t j = 0; j < 100; ++j) {
    EXPECT_GE(inst.jobs[j].volume, 60.0);
    EXPECT_LE(inst.jobs[j].volume, 600.0);
    EXPECT_EQ(inst.jobs[j].weight, 1.0);
    EXPECT_GE(inst.jobs[j].release, prev);
    prev = inst.jobs[j].release;
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_GE(s(i, j), 2.0);
      EXPECT_LE(s(i, j), 6.0);
    }
    for (std::size_t i = 4; i < 8; ++i) EXPECT_EQ(s(i, j), 1.0);
  }
  EXPECT_FALSE(inst.speed_ordered);
}

TEST(Synthetic, MeanGapMatchesRate) {
  SyntheticConfig c;
  c.job_count = 10000;
  c.arrival_rate = 0.25;
  c.seed = 11;
  auto inst = gen_synthetic(c);
  std::vector<double> gaps;
  double prev = 0;
  for (const auto& j : inst.jobs) {
    gaps.push_back(j.release - prev);
    prev = j.release;
  }
  double mean = 0, var = 0;
  for (double g : gaps) mean += g;
  mean /= gaps.size();
  for (double g : gaps) var += (g - mean) * (g - mean);
  var /= gaps.size() - 1;
  const double se = std::sqrt(var / gaps.size());
  EXPECT_LT(std::abs(mean - 4.0), 3 * se);
}

TEST(Synthetic, DeterministicAndSortSwitch) {
  SyntheticConfig c;
  c.seed = 3;
  auto a = gen_synthetic(c), b = gen_synthetic(c);
  EXPECT_EQ(a.static_speeds(), b.static_speeds());
  for (std::size_t j = 0; j < a.job_count(); ++j) {
    EXPECT_EQ(a.jobs[j].release, b.jobs[j].release);
    EXPECT_EQ(a.jobs[j].volume, b.jobs[j].volume);
  }
  c.sort_big = true;
  auto sorted = gen_synthetic(c);
  EXPECT_TRUE(sorted.speed_ordered);
  EXPECT_TRUE(is_speed_ordered(sorted.static_speeds()));
  EXPECT_TRUE(validate_instance(sorted).empty());
  // Same marginal draws, only reordered within each column.
  for (std::size_t j = 0; j < a.job_count(); ++j) {
    auto x = a.static_speeds().column(j), y = sorted.static_speeds().column(j);
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    EXPECT_EQ(x, y);
  }
  c.job_count = 0;
  EXPECT_THROW(gen_synthetic(c), DataError);
}

TEST(Noise, ZeroSigmaIsExact) {
  SyntheticConfig c;
  auto s = gen_synthetic(c).static_speeds();
  auto p = add_prediction_noise(s, 0.0, 99);
  EXPECT_EQ(p, s);
  auto d = distortion_error(s, p);
  EXPECT_EQ(d.mu, 1.0);
}

TEST(Noise, LogNormalMoments) {
  Matrix s(50, 200, 2.0);
  auto p = add_prediction_noise(s, 1.0, 5);
  std::vector<double> logs;
  for (std::size_t i = 0; i < 50; ++i)
    for (std::size_t j = 0; j < 200; ++j) logs.push_back(std::log(p(i, j) / s(i, j)));
  double mean = 0, var = 0;
  for (double x : logs) mean += x;
  mean /= logs.size();
  for (double x : logs) var += (x - mean) * (x - mean);
  var /= logs.size() - 1;
  EXPECT_LT(std::abs(mean), 3 * std::sqrt(var / logs.size()));
  EXPECT_NEAR(std::sqrt(var), 1.0, 0.05);
  EXPECT_EQ(add_prediction_noise(s, 1.0, 5), p);
  EXPECT_NE(add_prediction_noise(s, 1.0, 6), p);
  EXPECT_EQ(add_prediction_noise(Matrix{{0.0, 1.0}}, 1.0, 5)(0, 0), kZeroSpeedPrediction);
  EXPECT_THROW(add_prediction_noise(s, -1.0, 5), DataError);
}

TEST(Constructions, MuLb) {
  auto inst = construct_mu_lb(std::sqrt(2.0), std::sqrt(2.0), 4);
  EXPECT_TRUE(validate_instance(inst).empty());
  EXPECT_NEAR(inst.jobs[0].volume, 4.0, 1e-12);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR((*inst.predictions)(i, 0), std::sqrt(2.0), 1e-15);
  SpeedModel sm(inst);
  EXPECT_EQ(sm.resolve(0, 0), 1.0);
  EXPECT_EQ(sm.resolve(1, 0), 1.0);
  EXPECT_EQ(sm.resolve(2, 0), 1.0);
  EXPECT_NEAR(sm.resolve(3, 0), 2.0, 1e-12);
  auto d = distortion_error(sm.finalize(), *inst.predictions);
  EXPECT_NEAR(d.mu1, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(d.mu2, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(d.mu, 2.0, 1e-12);

  auto ones = construct_mu_lb(1.0, 1.0, 2);
  auto all = SpeedModel(ones).finalize();
  EXPECT_EQ(all, Matrix(2, 1, 1.0));
  EXPECT_THROW(construct_mu_lb(2.0, 2.0, 7), DataError);
}

TEST(Constructions, Obs1) {
  auto two = construct_obs1(2, 0.1);
  EXPECT_TRUE(validate_instance(two).empty());
  SpeedModel sm(two);
  EXPECT_EQ(sm.resolve(1, 0), 0.1);
  EXPECT_EQ(sm.resolve(0, 0), 1.0);
  EXPECT_THROW(construct_obs1(3, 0.0), DataError);
}

TEST(Constructions, GreedyLbGolden) {
  auto inst = construct_greedy_lb(5, 2, 0.1);
  EXPECT_TRUE(validate_instance(inst).empty());
  EXPECT_EQ(inst.jobs[0].volume, 4.0);
  for (std::size_t j = 1; j < 5; ++j) EXPECT_EQ(inst.jobs[j].volume, 0.1);
  EXPECT_EQ(inst.static_speeds(), (Matrix{{1.1, 1, 1, 1, 1}, {1, 0.1, 0.1, 0.1, 0.1}}));
  EXPECT_EQ(*inst.predictions, inst.static_speeds());
  EXPECT_THROW(construct_greedy_lb(6, 3, 0.1), DataError);  // 5/2 not integral
}

TEST(Constructions, GreedyLbRatioGrows) {
  double prev = 0;
  for (std::size_t n : {9u, 17u, 33u}) {
    auto inst = construct_greedy_lb(n, 2, 1e-3);
    auto alg = simulate(inst, "iter-greedy");
    auto alt_policy = proof_alternative("greedy-lb", inst, inst.static_speeds());
    auto alt = simulate(inst, alt_policy);
    const double ratio = alg.objective / alt.objective;
    EXPECT_GT(ratio, prev);
    prev = ratio;
  }
}

TEST(Constructions, SoMdLbGolden) {
  auto inst = construct_so_md_lb(4, 0.01);
  EXPECT_TRUE(validate_instance(inst).empty());
  EXPECT_TRUE(is_speed_ordered(inst.static_speeds()));
  EXPECT_EQ(inst.static_speeds(), (Matrix{{0.01, 1, 1, 1}, {0.01, 0.01, 0.01, 0.01}}));
  EXPECT_EQ(inst.jobs[0].volume, 1.0);
  EXPECT_EQ(inst.jobs[3].volume, 1.01);

  auto big = construct_so_md_lb(16, 1e-3);
  auto alg = simulate(big, "max-density-so");
  auto alt_policy = proof_alternative("so-md-lb", big, big.static_speeds());
  EXPECT_GT(alg.objective, simulate(big, alt_policy).objective);
}

TEST(Constructions, RrSoLbGolden) {
  auto inst = construct_rr_so_lb(4);
  EXPECT_EQ(inst.static_speeds(), (Matrix{{1, 1, 1, 1}, {1, 1, 1, 0}, {1, 1, 0, 0}, {1, 0, 0, 0}}));
  EXPECT_TRUE(is_speed_ordered(inst.static_speeds()));
  EXPECT_TRUE(validate_instance(inst).empty());
  EXPECT_NEAR(simulate(inst, "rr-so").completions[1], 1.25, 1e-12);
  auto alt = simulate(inst, proof_alternative("rr-so-lb", inst, inst.static_speeds()));
  EXPECT_NEAR(alt.objective, 4.0, 1e-12);
}

TEST(Constructions, NonMigratoryBranches) {
  auto shape = construct_nonmigratory_lb(3, 2);
  EXPECT_TRUE(validate_instance(shape).empty());
  EXPECT_EQ(shape.jobs.size(), 3u);
  EXPECT_EQ(shape.jobs[0].volume, 18.0);
  EXPECT_EQ(SpeedModel(shape).finalize(), Matrix(2, 3, 18.0));

  // Branch 1: everything pinned to machine 0, the others are never touched.
  auto inst = construct_nonmigratory_lb(6, 3);
  FixedAssignmentPolicy pinned(std::vector<std::size_t>(6, 0));
  auto alg = simulate(inst, pinned);
  EXPECT_NEAR(alg.objective, 21.0, 1e-9);
  auto spread = proof_alternative("nonmigratory-lb", inst, alg.final_speeds);
  auto alt = simulate(with_static_speeds(inst, alg.final_speeds), spread);
  EXPECT_NEAR(alt.objective, 9.0, 1e-9);

  // Branch 2: touching machine 1 makes machines 1.. slow.
  FixedAssignmentPolicy toucher({0, 1, 2, 0, 1, 2});
  auto slow = simulate(inst, toucher);
  EXPECT_EQ(slow.final_speeds(1, 0), 1.0);
  auto back = simulate(with_static_speeds(inst, slow.final_speeds),
                       proof_alternative("nonmigratory-lb", inst, slow.final_speeds));
  EXPECT_NEAR(back.objective, 21.0, 1e-9);
  EXPECT_GT(slow.objective, 10 * back.objective);
}

TEST(Constructions, ByName) {
  ConstructionParams p;
  p.n = 5;
  p.m = 4;
  p.eps = 0.1;
  p.mu1 = std::sqrt(2.0);
  p.mu2 = std::sqrt(2.0);
  for (const auto& name : construction_names()) {
    if (name == "greedy-lb") continue;  // needs (n-1)/(m-1) integral
    EXPECT_TRUE(validate_instance(make_construction(name, p)).empty()) << name;
  }
  p.m = 2;
  EXPECT_TRUE(validate_instance(make_construction("greedy-lb", p)).empty());
  EXPECT_THROW(make_construction("nope", p), DataError);
}
