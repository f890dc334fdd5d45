// Runs every policy on one synthetic workload and prints objectives next to
// the trivial lower bound.
#include <cstdio>

#include "sosched/sosched.hpp"

int main() {
  using namespace sosched;
  SyntheticConfig cfg;
  cfg.job_count = 40;
  cfg.seed = 7;
  cfg.sort_big = true;
  Instance inst = gen_synthetic(cfg);
  inst.predictions = add_prediction_noise(inst.static_speeds(), 0.5, 11);

  const double lb = trivial_lower_bound(inst);
  std::printf("%zu jobs, %zu machines, trivial bound %.1f\n", inst.job_count(), inst.machine_count, lb);
  for (const auto& name : policy_names()) {
    auto res = simulate(inst, name);
    std::printf("  %-15s objective %10.1f  ratio %.3f\n", name.c_str(), res.objective, res.objective / lb);
  }
}
