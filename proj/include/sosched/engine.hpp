#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "sosched/model.hpp"
#include "sosched/policies.hpp"
#include "sosched/speed_model.hpp"

namespace sosched {

struct SimulationOptions {
  double dt = 1.0;  // decision grid k * dt, on top of releases and completions
  bool check_feasibility = true;
  std::size_t max_epochs = 50'000'000;
};

namespace detail {

inline JobView make_view(const Instance& inst, std::size_t j, const PolicyInfo& info) {
  const Job& job = inst.jobs[j];
  JobView v{j, job.id, job.release, job.weight, std::nullopt, std::nullopt};
  if (info.clairvoyant) v.volume = job.volume;
  if (info.uses_predictions) {
    if (!inst.predictions) throw DataError(info.name + " needs speed predictions but the instance has none");
    v.predicted = inst.predictions->column(j);
  }
  return v;
}

}  // namespace detail

// Runs `policy` on `inst`. Rates are constant between decision epochs and
// completions are interpolated exactly inside an epoch.
inline SimulationResult simulate(const Instance& inst, Policy& policy, const SimulationOptions& opt = {}) {
  if (auto bad = validate_instance(inst); !bad.empty()) throw DataError("invalid instance: " + bad.front());
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw DataError("dt must be positive");
  const std::size_t m = inst.machine_count, n = inst.job_count();
  const PolicyInfo info = policy.info();
  if (info.uses_predictions && !inst.predictions)
    throw DataError(info.name + " needs speed predictions but the instance has none");

  SpeedModel speeds(inst);
  policy.reset(m);

  std::vector<std::size_t> by_release(n);
  std::iota(by_release.begin(), by_release.end(), 0);
  std::stable_sort(by_release.begin(), by_release.end(),
                   [&](std::size_t a, std::size_t b) { return inst.jobs[a].release < inst.jobs[b].release; });

  SimulationResult res;
  res.completions.assign(n, std::numeric_limits<double>::quiet_NaN());
  res.delivered.assign(n, 0.0);

  std::vector<bool> alive(n, false);
  std::vector<JobView> views;  // alive jobs in index order
  std::size_t next_release = 0, done = 0;
  bool alive_changed = true;
  double t = 0.0;

  auto next_grid = [&](double now) {
    double k = std::floor(now / opt.dt) + 1.0;
    double g = k * opt.dt;
    while (g <= now) g = (++k) * opt.dt;
    return g;
  };

  while (done < n) {
    while (next_release < n && inst.jobs[by_release[next_release]].release <= t) {
      const std::size_t j = by_release[next_release++];
      alive[j] = true;
      JobView v = detail::make_view(inst, j, info);
      policy.on_release(t, v);
      views.insert(std::upper_bound(views.begin(), views.end(), j,
                                    [](std::size_t idx, const JobView& w) { return idx < w.index; }),
                   std::move(v));
      alive_changed = true;
    }
    const double release_at =
        next_release < n ? inst.jobs[by_release[next_release]].release : std::numeric_limits<double>::infinity();

    double weight = 0.0;
    for (const auto& v : views) weight += v.weight;

    if (views.empty()) {
      // Idle until the next release.
      res.epochs.push_back({t, release_at, 0, 0.0, res.decisions.size()});
      res.decisions.emplace_back();
      t = release_at;
      continue;
    }
    if (res.epochs.size() >= opt.max_epochs) throw NumericError("epoch limit reached at t=" + std::to_string(t));

    if (alive_changed || !info.stateless || res.decisions.empty()) {
      RateAssignment rates = policy.decide(t, views);
      if (opt.check_feasibility) {
        if (auto bad = check_rates_feasible(rates, alive, m); !bad.empty())
          throw NumericError(info.name + " produced infeasible rates at t=" + std::to_string(t) + ": " + bad.front());
      }
      // Sequential adversary reading: per job, fresh machines in index order.
      std::sort(rates.entries.begin(), rates.entries.end(), [](const RateEntry& a, const RateEntry& b) {
        return a.job != b.job ? a.job < b.job : a.machine < b.machine;
      });
      res.decisions.push_back(std::move(rates));
      alive_changed = false;
    }
    const std::size_t decision = res.decisions.size() - 1;
    const RateAssignment& rates = res.decisions[decision];

    std::vector<double> q(n, 0.0);
    for (const auto& e : rates.entries) q[e.job] += speeds.resolve(e.machine, e.job) * e.rate;

    double end = std::min(release_at, next_grid(t));
    if (auto w = policy.next_wakeup(t); w && *w > t) end = std::min(end, *w);
    double total_progress = 0.0;
    for (const auto& v : views) {
      const std::size_t j = v.index;
      total_progress += q[j];
      if (q[j] > 0.0) end = std::min(end, t + (inst.jobs[j].volume - res.delivered[j]) / q[j]);
    }
    if (total_progress <= 0.0 && std::isinf(release_at) && !policy.next_wakeup(t))
      throw NumericError(info.name + " makes no progress at t=" + std::to_string(t) + " and nothing is pending");

    res.epochs.push_back({t, end, views.size(), weight, decision});
    const double slack = 1e-12 * std::max(1.0, end);
    std::vector<std::size_t> finished;
    for (const auto& v : views) {
      const std::size_t j = v.index;
      if (q[j] <= 0.0) continue;
      const double rem = inst.jobs[j].volume - res.delivered[j];
      if (t + rem / q[j] <= end + slack) {
        res.delivered[j] += q[j] * (end - t);
        res.completions[j] = end;
        finished.push_back(j);
      } else {
        res.delivered[j] += q[j] * (end - t);
      }
    }
    t = end;
    for (std::size_t j : finished) {
      alive[j] = false;
      views.erase(std::find_if(views.begin(), views.end(), [j](const JobView& v) { return v.index == j; }));
      policy.on_complete(t, j);
      ++done;
      alive_changed = true;
    }
  }

  res.objective = objective(res.completions, inst.jobs);
  res.resolved_speeds = speeds.memo();
  res.final_speeds = speeds.finalize();
  return res;
}

inline SimulationResult simulate(const Instance& inst, Policy&& policy, const SimulationOptions& opt = {}) {
  return simulate(inst, policy, opt);
}

inline SimulationResult simulate(const Instance& inst, const std::string& policy, const SimulationOptions& opt = {},
                                 const PolicyOptions& popt = {}) {
  auto p = make_policy(policy, popt);
  return simulate(inst, *p, opt);
}

// Time-weighted histogram of the number of alive jobs over [0, window].
// A NaN window means the makespan.
inline std::map<std::size_t, double> load_trace(const SimulationResult& res,
                                                double window = std::numeric_limits<double>::quiet_NaN()) {
  if (std::isnan(window)) window = res.makespan();
  std::map<std::size_t, double> out;
  double covered = 0.0;
  for (const auto& e : res.epochs) {
    const double a = std::min(e.start, window), b = std::min(e.end, window);
    if (b > a) {
      out[e.alive_count] += b - a;
      covered += b - a;
    }
  }
  if (window > covered) out[0] += window - covered;
  return out;
}

// Fraction of each machine's capacity in use during one epoch.
inline std::vector<double> busy_fractions(const RateAssignment& rates, std::size_t machine_count) {
  std::vector<double> out(machine_count, 0.0);
  for (const auto& e : rates.entries) out[e.machine] += e.rate;
  return out;
}

}  // namespace sosched
