#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sosched/matching.hpp"
#include "sosched/model.hpp"
#include "sosched/pf_solver.hpp"

namespace sosched {

// What a policy may see of an alive job. Volume is present only for
// clairvoyant policies and the prediction column only for policies that
// consume predictions. True speeds are never exposed.
struct JobView {
  std::size_t index = 0;  // position in the instance
  int id = 0;
  double release = 0.0;
  double weight = 1.0;
  std::optional<double> volume;
  std::optional<std::vector<double>> predicted;  // one entry per machine
};

struct PolicyInfo {
  std::string name;
  bool clairvoyant = false;
  bool uses_predictions = false;
  // Stateless policies depend only on the alive set, so the engine may
  // reuse a decision until that set changes.
  bool stateless = true;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual const PolicyInfo& info() const = 0;
  virtual void reset(std::size_t machine_count) { machines_ = machine_count; }
  virtual void on_release(double /*t*/, const JobView& /*job*/) {}
  virtual void on_complete(double /*t*/, std::size_t /*index*/) {}
  // `alive` is sorted by instance index.
  virtual RateAssignment decide(double t, const std::vector<JobView>& alive) = 0;
  // Earliest time after t at which the policy wants to be consulted again.
  virtual std::optional<double> next_wakeup(double /*t*/) const { return std::nullopt; }

  std::size_t machine_count() const noexcept { return machines_; }

 protected:
  std::size_t machines_ = 0;
};

namespace detail {

inline double need_volume(const JobView& v, const std::string& policy) {
  if (!v.volume) throw DataError(policy + " needs job volumes");
  return *v.volume;
}

inline const std::vector<double>& need_predictions(const JobView& v, std::size_t m, const std::string& policy) {
  if (!v.predicted) throw DataError(policy + " needs speed predictions");
  if (v.predicted->size() != m) throw DataError(policy + ": prediction column has wrong length");
  return *v.predicted;
}

}  // namespace detail

// Maximum-weight matching on predicted densities w ŝ / p, rate 1 per edge.
class MaxDensityPolicy final : public Policy {
 public:
  const PolicyInfo& info() const override { return info_; }

  RateAssignment decide(double, const std::vector<JobView>& alive) override {
    RateAssignment out;
    if (alive.empty()) return out;
    Matrix delta(machines_, alive.size());
    for (std::size_t k = 0; k < alive.size(); ++k) {
      const double p = detail::need_volume(alive[k], info_.name);
      const auto& col = detail::need_predictions(alive[k], machines_, info_.name);
      for (std::size_t i = 0; i < machines_; ++i) delta(i, k) = alive[k].weight * col[i] / p;
    }
    for (const auto& [i, k] : max_weight_matching(delta).pairs) out.set(i, alive[k].index, 1.0);
    return out;
  }

 private:
  PolicyInfo info_{"max-density", true, true, true};
};

// Round Robin restricted to the |J(t)| fastest machines of a speed-ordered
// instance.
class RoundRobinSpeedOrderedPolicy final : public Policy {
 public:
  const PolicyInfo& info() const override { return info_; }

  RateAssignment decide(double, const std::vector<JobView>& alive) override {
    RateAssignment out;
    const std::size_t used = std::min(machines_, alive.size());
    for (const auto& v : alive)
      for (std::size_t i = 0; i < used; ++i) out.set(i, v.index, 1.0 / static_cast<double>(alive.size()));
    return out;
  }

 private:
  PolicyInfo info_{"rr-so", false, false, true};
};

// Plain Round Robin. The rate 1/max(|J|, m) keeps per-job sums at most 1
// when fewer jobs than machines are alive.
class RoundRobinPolicy final : public Policy {
 public:
  const PolicyInfo& info() const override { return info_; }

  RateAssignment decide(double, const std::vector<JobView>& alive) override {
    RateAssignment out;
    const double r = 1.0 / static_cast<double>(std::max(machines_, alive.size()));
    for (const auto& v : alive)
      for (std::size_t i = 0; i < machines_; ++i) out.set(i, v.index, r);
    return out;
  }

 private:
  PolicyInfo info_{"rr", false, false, true};
};

// Rank jobs by w/p; the k-th densest runs on the k-th fastest machine.
class MaxDensitySpeedOrderedPolicy final : public Policy {
 public:
  const PolicyInfo& info() const override { return info_; }

  RateAssignment decide(double, const std::vector<JobView>& alive) override {
    std::vector<std::pair<double, std::size_t>> order;
    for (const auto& v : alive) order.emplace_back(v.weight / detail::need_volume(v, info_.name), v.index);
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    RateAssignment out;
    for (std::size_t k = 0; k < std::min(machines_, order.size()); ++k) out.set(k, order[k].second, 1.0);
    return out;
  }

 private:
  PolicyInfo info_{"max-density-so", true, false, true};
};

// Repeatedly schedule the remaining pair with the largest w ŝ.
class IterativeGreedyPolicy final : public Policy {
 public:
  const PolicyInfo& info() const override { return info_; }

  RateAssignment decide(double, const std::vector<JobView>& alive) override {
    struct Cand {
      double value;
      std::size_t job, machine;
    };
    std::vector<Cand> cands;
    for (const auto& v : alive) {
      const auto& col = detail::need_predictions(v, machines_, info_.name);
      for (std::size_t i = 0; i < machines_; ++i) cands.push_back({v.weight * col[i], v.index, i});
    }
    // Sorting then scanning is the iterative argmax with ties broken by
    // smaller job, then smaller machine.
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      if (a.value != b.value) return a.value > b.value;
      if (a.job != b.job) return a.job < b.job;
      return a.machine < b.machine;
    });
    std::vector<bool> machine_used(machines_, false);
    std::vector<std::size_t> jobs_used;
    RateAssignment out;
    for (const auto& c : cands) {
      if (machine_used[c.machine] || std::find(jobs_used.begin(), jobs_used.end(), c.job) != jobs_used.end()) continue;
      machine_used[c.machine] = true;
      jobs_used.push_back(c.job);
      out.set(c.machine, c.job, 1.0);
    }
    return out;
  }

 private:
  PolicyInfo info_{"iter-greedy", false, true, true};
};

// Proportional fairness: the per-epoch convex program on predictions.
class ProportionalFairnessPolicy final : public Policy {
 public:
  explicit ProportionalFairnessPolicy(CpOptions opt = {}) : opt_(opt) {}
  const PolicyInfo& info() const override { return info_; }

  RateAssignment decide(double t, const std::vector<JobView>& alive) override {
    RateAssignment out;
    if (alive.empty()) return out;
    CpProblem p;
    p.pred_speeds = Matrix(machines_, alive.size());
    for (std::size_t k = 0; k < alive.size(); ++k) {
      p.weights.push_back(alive[k].weight);
      const auto& col = detail::need_predictions(alive[k], machines_, info_.name);
      for (std::size_t i = 0; i < machines_; ++i) p.pred_speeds(i, k) = col[i];
    }
    auto sol = solve_cp(p, opt_);
    if (!sol.converged)
      throw NumericError("pf solver did not converge at t=" + std::to_string(t) + " (residual " +
                             std::to_string(sol.residual) + ")",
                         sol.residual);
    for (std::size_t i = 0; i < machines_; ++i)
      for (std::size_t k = 0; k < alive.size(); ++k) out.set(i, alive[k].index, sol.rates(i, k));
    return out;
  }

 private:
  PolicyInfo info_{"pf", false, true, true};
  CpOptions opt_;
};

// Non-preemptive, non-migratory greedy assignment with WSPT order per
// machine and a start delay of theta times the predicted processing time.
class GreedyWsptPolicy final : public Policy {
 public:
  explicit GreedyWsptPolicy(double theta = 2.0 / 3.0) : theta_(theta) {
    if (!(theta > 0.0)) throw DataError("greedy-wspt theta must be positive");
  }
  const PolicyInfo& info() const override { return info_; }
  double theta() const noexcept { return theta_; }

  void reset(std::size_t machine_count) override {
    Policy::reset(machine_count);
    queue_.assign(machine_count, {});
    running_.assign(machine_count, std::nullopt);
    assigned_.clear();
  }

  // Q̂ for placing `job` on machine i given the current queues.
  double q_hat(const JobView& job, std::size_t i) const {
    const double p = detail::need_volume(job, info_.name);
    const double s = detail::need_predictions(job, machines_, info_.name)[i];
    const double rhat = std::max(job.release, theta_ * p / s);
    const double delta = job.weight * s / p;
    double ahead = 0.0, behind_weight = 0.0;
    for (const auto& q : queue_[i]) {
      if (q.delta >= delta) ahead += q.time;
      else behind_weight += q.weight;
    }
    return job.weight * (rhat + rhat / theta_ + p / s + ahead) + p / s * behind_weight;
  }

  void on_release(double, const JobView& job) override {
    std::size_t best = 0;
    double best_q = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < machines_; ++i) {
      const double q = q_hat(job, i);
      if (q < best_q) {
        best_q = q;
        best = i;
      }
    }
    const double p = *job.volume, s = (*job.predicted)[best];
    queue_[best].push_back({job.index, job.weight, job.weight * s / p, p / s, std::max(job.release, theta_ * p / s)});
    if (assigned_.size() <= job.index) assigned_.resize(job.index + 1);
    assigned_[job.index] = best;
  }

  void on_complete(double, std::size_t index) override {
    for (auto& r : running_)
      if (r == index) r.reset();
  }

  RateAssignment decide(double t, const std::vector<JobView>&) override {
    RateAssignment out;
    for (std::size_t i = 0; i < machines_; ++i) {
      if (!running_[i]) {
        auto& q = queue_[i];
        auto pick = q.end();
        for (auto it = q.begin(); it != q.end(); ++it) {
          if (it->rhat > t) continue;
          if (pick == q.end() || it->delta > pick->delta || (it->delta == pick->delta && it->index < pick->index))
            pick = it;
        }
        if (pick != q.end()) {
          running_[i] = pick->index;
          q.erase(pick);
        }
      }
      if (running_[i]) out.set(i, *running_[i], 1.0);
    }
    return out;
  }

  std::optional<double> next_wakeup(double t) const override {
    std::optional<double> out;
    for (std::size_t i = 0; i < machines_; ++i)
      for (const auto& q : queue_[i])
        if (q.rhat > t && (!out || q.rhat < *out)) out = q.rhat;
    return out;
  }

  std::optional<std::size_t> machine_of(std::size_t index) const {
    if (index >= assigned_.size()) return std::nullopt;
    return assigned_[index];
  }

 private:
  struct Queued {
    std::size_t index;
    double weight, delta, time, rhat;
  };
  PolicyInfo info_{"greedy-wspt", true, true, false};
  double theta_;
  std::vector<std::vector<Queued>> queue_;
  std::vector<std::optional<std::size_t>> running_;
  std::vector<std::optional<std::size_t>> assigned_;
};

// Each job is pinned to one machine; a machine runs its highest-priority
// alive job at rate 1. Used to replay the alternative schedules of the
// lower-bound constructions.
class FixedAssignmentPolicy final : public Policy {
 public:
  // machine_of[j] for every instance index j; priority lists indices from
  // first to last. Jobs missing from `priority` rank after all listed ones,
  // by index.
  FixedAssignmentPolicy(std::vector<std::size_t> machine_of, std::vector<std::size_t> priority = {})
      : machine_of_(std::move(machine_of)), rank_(machine_of_.size(), std::numeric_limits<std::size_t>::max()) {
    for (std::size_t k = 0; k < priority.size(); ++k) {
      if (priority[k] >= rank_.size()) throw DataError("fixed policy: priority index out of range");
      rank_[priority[k]] = k;
    }
  }
  const PolicyInfo& info() const override { return info_; }

  RateAssignment decide(double, const std::vector<JobView>& alive) override {
    std::vector<std::optional<std::size_t>> pick(machines_);
    for (const auto& v : alive) {
      if (v.index >= machine_of_.size()) throw DataError("fixed policy: job has no machine");
      const std::size_t i = machine_of_[v.index];
      if (i >= machines_) throw DataError("fixed policy: machine index out of range");
      auto better = [&](std::size_t a, std::size_t b) { return rank_[a] != rank_[b] ? rank_[a] < rank_[b] : a < b; };
      if (!pick[i] || better(v.index, *pick[i])) pick[i] = v.index;
    }
    RateAssignment out;
    for (std::size_t i = 0; i < machines_; ++i)
      if (pick[i]) out.set(i, *pick[i], 1.0);
    return out;
  }

 private:
  PolicyInfo info_{"fixed", false, false, true};
  std::vector<std::size_t> machine_of_;
  std::vector<std::size_t> rank_;
};

struct PolicyOptions {
  double theta = 2.0 / 3.0;
  CpOptions cp;
};

inline const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names{"max-density", "greedy-wspt", "pf",         "max-density-so",
                                              "rr-so",       "rr",          "iter-greedy"};
  return names;
}

inline std::unique_ptr<Policy> make_policy(const std::string& name, const PolicyOptions& opt = {}) {
  if (name == "max-density") return std::make_unique<MaxDensityPolicy>();
  if (name == "greedy-wspt") return std::make_unique<GreedyWsptPolicy>(opt.theta);
  if (name == "pf") return std::make_unique<ProportionalFairnessPolicy>(opt.cp);
  if (name == "max-density-so") return std::make_unique<MaxDensitySpeedOrderedPolicy>();
  if (name == "rr-so") return std::make_unique<RoundRobinSpeedOrderedPolicy>();
  if (name == "rr") return std::make_unique<RoundRobinPolicy>();
  if (name == "iter-greedy") return std::make_unique<IterativeGreedyPolicy>();
  throw DataError("unknown policy '" + name + "'");
}

}  // namespace sosched
