#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sosched/matrix.hpp"

namespace sosched {

// Bad input data or arguments. The CLI maps this to exit code 2.
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure (solver did not converge, livelock). Exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, double residual = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

inline constexpr double kFeasibilityTol = 1e-9;

struct Job {
  int id = 0;
  double release = 0.0;
  double weight = 1.0;
  double volume = 1.0;
};

// Lazily resolved adversarial speeds, identified by rule name.
struct OracleSpec {
  std::string name;
  std::map<std::string, double> params;

  double param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw DataError("oracle '" + name + "' is missing parameter '" + key + "'");
    return it->second;
  }
  friend bool operator==(const OracleSpec&, const OracleSpec&) = default;
};

using SpeedSpec = std::variant<Matrix, OracleSpec>;

struct Instance {
  std::vector<Job> jobs;
  std::size_t machine_count = 0;
  SpeedSpec speeds = Matrix{};
  std::optional<Matrix> predictions;
  bool speed_ordered = false;

  std::size_t job_count() const noexcept { return jobs.size(); }
  bool has_static_speeds() const noexcept { return std::holds_alternative<Matrix>(speeds); }
  const Matrix& static_speeds() const {
    if (const auto* m = std::get_if<Matrix>(&speeds)) return *m;
    throw DataError("instance speeds are an adaptive oracle, not a static matrix");
  }
};

struct RateEntry {
  std::size_t machine = 0;
  std::size_t job = 0;
  double rate = 0.0;
  friend bool operator==(const RateEntry&, const RateEntry&) = default;
};

// Sparse machine rates for one decision epoch. Job indices are instance
// positions, not ids.
struct RateAssignment {
  std::vector<RateEntry> entries;

  void set(std::size_t machine, std::size_t job, double rate) {
    if (rate > 0.0) entries.push_back({machine, job, rate});
  }
  bool empty() const noexcept { return entries.empty(); }
  double rate(std::size_t machine, std::size_t job) const {
    double total = 0.0;
    for (const auto& e : entries)
      if (e.machine == machine && e.job == job) total += e.rate;
    return total;
  }
  friend bool operator==(const RateAssignment&, const RateAssignment&) = default;
};

struct EpochRecord {
  double start = 0.0;
  double end = 0.0;
  std::size_t alive_count = 0;
  double alive_weight = 0.0;
  std::size_t decision = 0;  // index into SimulationResult::decisions
};

struct SimulationResult {
  std::vector<double> completions;  // NaN until completed
  std::vector<double> delivered;    // integrated progress per job
  double objective = 0.0;
  std::vector<EpochRecord> epochs;
  std::vector<RateAssignment> decisions;
  Matrix resolved_speeds;  // NaN where never resolved during the run
  Matrix final_speeds;     // adaptive oracles completed after the run

  const RateAssignment& rates_of(const EpochRecord& e) const { return decisions.at(e.decision); }
  double makespan() const {
    double out = 0.0;
    for (double c : completions)
      if (!std::isnan(c)) out = std::max(out, c);
    return out;
  }
};

struct DistortionError {
  double mu1 = 1.0;
  double mu2 = 1.0;
  double mu = 1.0;
};

inline bool is_speed_ordered(const Matrix& speeds) {
  for (std::size_t j = 0; j < speeds.cols(); ++j)
    for (std::size_t i = 1; i < speeds.rows(); ++i)
      if (speeds(i, j) > speeds(i - 1, j)) return false;
  return true;
}

inline std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  auto say = [&out](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    out.push_back(os.str());
  };

  if (inst.machine_count == 0) say("machine count must be positive");
  std::map<int, std::size_t> seen;
  for (std::size_t j = 0; j < inst.jobs.size(); ++j) {
    const Job& job = inst.jobs[j];
    if (!(job.release >= 0.0) || !std::isfinite(job.release)) say("job ", job.id, ": release must be >= 0");
    if (!(job.weight > 0.0) || !std::isfinite(job.weight)) say("job ", job.id, ": weight must be > 0");
    if (!(job.volume > 0.0) || !std::isfinite(job.volume)) say("job ", job.id, ": volume must be > 0");
    if (auto [it, fresh] = seen.emplace(job.id, j); !fresh) say("job ", job.id, ": duplicate id");
  }

  const std::size_t m = inst.machine_count, n = inst.jobs.size();
  if (const auto* s = std::get_if<Matrix>(&inst.speeds)) {
    if (s->rows() != m || s->cols() != n) {
      say("speed matrix is ", s->rows(), "x", s->cols(), ", expected ", m, "x", n);
    } else {
      for (std::size_t j = 0; j < n; ++j) {
        bool positive = false;
        for (std::size_t i = 0; i < m; ++i) {
          double v = (*s)(i, j);
          if (!(v >= 0.0) || !std::isfinite(v)) say("speed (", i, ",", j, ") must be finite and >= 0");
          positive = positive || v > 0.0;
        }
        if (!positive) say("job ", inst.jobs[j].id, ": no machine has positive speed");
      }
      if (inst.speed_ordered && !is_speed_ordered(*s)) say("speed_ordered is set but some column increases with machine index");
    }
  }
  if (inst.predictions) {
    const Matrix& p = *inst.predictions;
    if (p.rows() != m || p.cols() != n) {
      say("prediction matrix is ", p.rows(), "x", p.cols(), ", expected ", m, "x", n);
    } else {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!(p(i, j) > 0.0) || !std::isfinite(p(i, j))) say("prediction (", i, ",", j, ") must be > 0");
    }
  }
  return out;
}

inline double objective(const std::vector<double>& completions, const std::vector<Job>& jobs) {
  if (completions.size() != jobs.size()) throw DataError("completion list does not cover all jobs");
  double total = 0.0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (std::isnan(completions[j])) throw DataError("job " + std::to_string(jobs[j].id) + " has no completion time");
    total += jobs[j].weight * completions[j];
  }
  return total;
}

inline double objective(const SimulationResult& result, const std::vector<Job>& jobs) {
  return objective(result.completions, jobs);
}

// Zero true speeds are skipped; they only occur in the {0,1} construction.
inline DistortionError distortion_error(const Matrix& speeds, const Matrix& predictions) {
  if (speeds.rows() != predictions.rows() || speeds.cols() != predictions.cols())
    throw DataError("speed and prediction matrices differ in shape");
  double mu1 = 0.0, mu2 = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < speeds.rows(); ++i)
    for (std::size_t j = 0; j < speeds.cols(); ++j) {
      double s = speeds(i, j), p = predictions(i, j);
      if (!(s > 0.0)) continue;
      any = true;
      mu1 = std::max(mu1, p / s);
      mu2 = std::max(mu2, s / p);
    }
  if (!any) return {};
  return {mu1, mu2, mu1 * mu2};
}

inline std::vector<std::string> check_rates_feasible(const RateAssignment& rates, const std::vector<bool>& alive,
                                                     std::size_t machine_count, double tol = kFeasibilityTol) {
  std::vector<std::string> out;
  std::vector<double> machine_sum(machine_count, 0.0);
  std::vector<double> job_sum(alive.size(), 0.0);
  for (const auto& e : rates.entries) {
    if (e.machine >= machine_count || e.job >= alive.size()) {
      out.push_back("rate entry (" + std::to_string(e.machine) + "," + std::to_string(e.job) + ") out of range");
      continue;
    }
    if (e.rate < -tol) out.push_back("negative rate on (" + std::to_string(e.machine) + "," + std::to_string(e.job) + ")");
    if (!alive[e.job] && e.rate != 0.0) out.push_back("rate on non-alive job " + std::to_string(e.job));
    machine_sum[e.machine] += e.rate;
    job_sum[e.job] += e.rate;
  }
  for (std::size_t i = 0; i < machine_count; ++i)
    if (machine_sum[i] > 1.0 + tol)
      out.push_back("machine " + std::to_string(i) + " rate sum " + std::to_string(machine_sum[i]) + " exceeds 1");
  for (std::size_t j = 0; j < alive.size(); ++j)
    if (job_sum[j] > 1.0 + tol)
      out.push_back("job " + std::to_string(j) + " rate sum " + std::to_string(job_sum[j]) + " exceeds 1");
  return out;
}

}  // namespace sosched
