#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sosched/model.hpp"
#include "sosched/policies.hpp"
#include "sosched/rng.hpp"

namespace sosched {

inline constexpr double kZeroSpeedPrediction = 1e-9;

// Hardware-like synthetic workloads: big cores first, then LITTLE cores.
struct SyntheticConfig {
  std::size_t job_count = 100;
  double arrival_rate = 1.0 / 60.0;
  std::size_t big_count = 4;
  std::size_t little_count = 4;
  double little_speed = 1.0;
  double big_lo = 2.0, big_hi = 6.0;
  double volume_lo = 60.0, volume_hi = 600.0;
  std::uint64_t seed = 0;
  // Sort each job's big-core speeds descending so the machine order is a
  // valid speed order. The marginal distribution is unchanged.
  bool sort_big = false;
};

inline constexpr double kLowLoad = 1.0 / 60.0;
inline constexpr double kHighLoad = 4.0 / 60.0;

inline std::vector<std::string> validate_config(const SyntheticConfig& c) {
  std::vector<std::string> out;
  if (c.job_count == 0) out.push_back("job count must be positive");
  if (c.big_count + c.little_count == 0) out.push_back("need at least one machine");
  if (!(c.arrival_rate > 0.0) || !std::isfinite(c.arrival_rate)) out.push_back("arrival rate must be positive");
  if (!(c.big_lo > 0.0 && c.big_hi > c.big_lo)) out.push_back("big speed range must satisfy 0 < lo < hi");
  if (!(c.volume_lo > 0.0 && c.volume_hi > c.volume_lo)) out.push_back("volume range must satisfy 0 < lo < hi");
  if (!(c.little_speed > 0.0)) out.push_back("little speed must be positive");
  return out;
}

inline Instance gen_synthetic(const SyntheticConfig& c) {
  if (auto bad = validate_config(c); !bad.empty()) throw DataError("synthetic config: " + bad.front());
  Rng arrivals(c.seed, Stream::Arrivals), volumes(c.seed, Stream::Volumes), big(c.seed, Stream::BigSpeeds);
  const std::size_t m = c.big_count + c.little_count, n = c.job_count;
  Instance inst;
  inst.machine_count = m;
  Matrix s(m, n, c.little_speed);
  double t = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    t += arrivals.exponential(c.arrival_rate);
    inst.jobs.push_back({static_cast<int>(j), t, 1.0, volumes.uniform(c.volume_lo, c.volume_hi)});
    std::vector<double> col;
    for (std::size_t i = 0; i < c.big_count; ++i) col.push_back(big.uniform(c.big_lo, c.big_hi));
    if (c.sort_big) std::sort(col.begin(), col.end(), std::greater<>());
    for (std::size_t i = 0; i < c.big_count; ++i) s(i, j) = col[i];
  }
  inst.speeds = std::move(s);
  inst.speed_ordered = c.sort_big && c.big_lo >= c.little_speed;
  return inst;
}

// ŝ = s · exp(sigma Z) with Z standard normal per entry.
inline Matrix add_prediction_noise(const Matrix& speeds, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw DataError("sigma must be >= 0");
  Matrix out(speeds.rows(), speeds.cols());
  for (std::size_t i = 0; i < speeds.rows(); ++i)
    for (std::size_t j = 0; j < speeds.cols(); ++j) {
      const double s = speeds(i, j);
      out(i, j) = s > 0.0 ? (sigma == 0.0 ? s : s * std::exp(sigma * entry_normal(seed, i, j))) : kZeroSpeedPrediction;
    }
  return out;
}

namespace detail {

inline std::vector<Job> unit_weight_jobs(std::size_t n, double volume) {
  std::vector<Job> jobs;
  for (std::size_t j = 0; j < n; ++j) jobs.push_back({static_cast<int>(j), 0.0, 1.0, volume});
  return jobs;
}

}  // namespace detail

// One job of volume 2 mu1 mu2 with every prediction mu1; see SpeedModel for
// the adaptive rule.
inline Instance construct_mu_lb(double mu1, double mu2, std::size_t m) {
  if (!(mu1 >= 1.0 && mu2 >= 1.0)) throw DataError("mu-lb needs mu1, mu2 >= 1");
  const double mu = mu1 * mu2;
  if (static_cast<double>(m) < 2.0 * mu - 1e-9) throw DataError("mu-lb needs m >= 2 mu");
  Instance inst;
  inst.machine_count = m;
  inst.jobs = detail::unit_weight_jobs(1, 2.0 * mu);
  inst.speeds = OracleSpec{"mu-lb", {{"mu1", mu1}, {"mu2", mu2}}};
  inst.predictions = Matrix(m, 1, mu1);
  return inst;
}

inline Instance construct_obs1(std::size_t m, double eps) {
  if (m < 1) throw DataError("obs1 needs m >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw DataError("obs1 needs 0 < eps < 1");
  Instance inst;
  inst.machine_count = m;
  inst.jobs = detail::unit_weight_jobs(1, 1.0);
  inst.speeds = OracleSpec{"obs1", {{"eps", eps}}};
  return inst;
}

inline Instance construct_greedy_lb(std::size_t n, std::size_t m, double eps) {
  if (m < 2 || n <= m) throw DataError("greedy-lb needs n > m >= 2");
  if ((n - 1) % (m - 1) != 0) throw DataError("greedy-lb needs (n-1)/(m-1) to be an integer");
  if (!(eps > 0.0)) throw DataError("greedy-lb needs eps > 0");
  if (n > m + 1 && !(eps < static_cast<double>(m) / static_cast<double>(n - m - 1)))
    throw DataError("greedy-lb needs eps < m/(n-m-1)");
  Instance inst;
  inst.machine_count = m;
  inst.jobs = detail::unit_weight_jobs(n, eps);
  inst.jobs[0].volume = static_cast<double>(n - 1) / static_cast<double>(m - 1);
  Matrix s(m, n, eps);
  s(0, 0) = 1.0 + eps;
  for (std::size_t i = 1; i < m; ++i) s(i, 0) = 1.0;
  for (std::size_t j = 1; j < n; ++j) s(0, j) = 1.0;
  inst.predictions = s;
  inst.speeds = std::move(s);
  return inst;
}

inline Instance construct_so_md_lb(std::size_t n, double eps) {
  if (n < 2) throw DataError("so-md-lb needs n >= 2");
  if (!(eps > 0.0 && eps < 1.0)) throw DataError("so-md-lb needs 0 < eps < 1");
  Instance inst;
  inst.machine_count = 2;
  inst.jobs = detail::unit_weight_jobs(n, 1.0 + eps);
  inst.jobs[0].volume = 1.0;
  Matrix s(2, n, eps);
  for (std::size_t j = 1; j < n; ++j) s(0, j) = 1.0;
  inst.speeds = std::move(s);
  inst.speed_ordered = true;
  return inst;
}

inline Instance construct_rr_so_lb(std::size_t m) {
  if (m < 1) throw DataError("rr-so-lb needs m >= 1");
  Instance inst;
  inst.machine_count = m;
  inst.jobs = detail::unit_weight_jobs(m, 1.0);
  Matrix s(m, m, 0.0);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i + j < m; ++i) s(i, j) = 1.0;
  inst.speeds = std::move(s);
  inst.speed_ordered = true;
  return inst;
}

inline Instance construct_nonmigratory_lb(std::size_t n, std::size_t m) {
  if (n < 1 || m < 2) throw DataError("nonmigratory-lb needs n >= 1 and m >= 2");
  const double big = static_cast<double>(n * n * m);
  Instance inst;
  inst.machine_count = m;
  inst.jobs = detail::unit_weight_jobs(n, big);
  inst.speeds = OracleSpec{"nonmigratory-lb", {{"n", static_cast<double>(n)}}};
  inst.speed_ordered = true;
  return inst;
}

inline const std::vector<std::string>& construction_names() {
  static const std::vector<std::string> names{"mu-lb",    "obs1",     "greedy-lb",
                                              "so-md-lb", "rr-so-lb", "nonmigratory-lb"};
  return names;
}

struct ConstructionParams {
  std::size_t n = 0, m = 0;
  double eps = 0.0, mu1 = 1.0, mu2 = 1.0;
};

inline Instance make_construction(const std::string& name, const ConstructionParams& p) {
  if (name == "mu-lb") return construct_mu_lb(p.mu1, p.mu2, p.m);
  if (name == "obs1") return construct_obs1(p.m, p.eps);
  if (name == "greedy-lb") return construct_greedy_lb(p.n, p.m, p.eps);
  if (name == "so-md-lb") return construct_so_md_lb(p.n, p.eps);
  if (name == "rr-so-lb") return construct_rr_so_lb(p.m);
  if (name == "nonmigratory-lb") return construct_nonmigratory_lb(p.n, p.m);
  throw DataError("unknown construction '" + name + "'");
}

// The competing schedule each proof uses against the algorithm, given the
// speeds the adversary ended up with.
inline FixedAssignmentPolicy proof_alternative(const std::string& name, const Instance& inst, const Matrix& speeds) {
  const std::size_t n = inst.job_count(), m = inst.machine_count;
  std::vector<std::size_t> machine(n, 0);
  if (name == "mu-lb" || name == "obs1") {
    const auto col = speeds.column(0);
    machine[0] = static_cast<std::size_t>(std::max_element(col.begin(), col.end()) - col.begin());
  } else if (name == "greedy-lb" || name == "so-md-lb") {
    // Small jobs share machine 0; the first job goes elsewhere.
    machine[0] = 1;
  } else if (name == "rr-so-lb") {
    for (std::size_t j = 0; j < n; ++j) machine[j] = m - 1 - j;
  } else if (name == "nonmigratory-lb") {
    // If the slow branch was taken everything on machine 0 is best,
    // otherwise spread the jobs evenly.
    const bool slow = m > 1 && speeds(1, 0) == 1.0;
    for (std::size_t j = 0; j < n; ++j) machine[j] = slow ? 0 : j % m;
  } else {
    throw DataError("no alternative schedule for construction '" + name + "'");
  }
  return FixedAssignmentPolicy(std::move(machine));
}

inline Instance with_static_speeds(Instance inst, const Matrix& speeds) {
  inst.speeds = speeds;
  return inst;
}

}  // namespace sosched
