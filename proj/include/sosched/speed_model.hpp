#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sosched/model.hpp"

namespace sosched {

// True speeds as seen by the engine. Static instances are a lookup;
// adaptive oracles fix each entry the first time a positive rate touches it
// and never change it afterwards.
//
// Rules:
//   mu-lb            params mu1, mu2. Speed 1 on the first ceil(2 mu) - 1
//                    distinct machines that process a job, mu afterwards.
//   obs1             param eps. Speed eps on the first m - 1 distinct
//                    machines, 1 on the last one.
//   nonmigratory-lb  param n. Machine 0 has speed n^2 m. Machines 1..m-1
//                    all become 1 once any of them is touched; if none is
//                    touched they become n^2 m.
class SpeedModel {
 public:
  explicit SpeedModel(const Instance& inst)
      : m_(inst.machine_count), n_(inst.job_count()), memo_(inst.machine_count, inst.job_count(), kUnset) {
    if (inst.has_static_speeds()) {
      memo_ = inst.static_speeds();
      if (memo_.rows() != m_ || memo_.cols() != n_) throw DataError("speed matrix shape does not match instance");
      return;
    }
    spec_ = std::get<OracleSpec>(inst.speeds);
    touched_.assign(n_, 0);
    if (spec_.name == "mu-lb") {
      mu_ = spec_.param("mu1") * spec_.param("mu2");
      if (!(spec_.param("mu1") >= 1.0 && spec_.param("mu2") >= 1.0)) throw DataError("mu-lb needs mu1, mu2 >= 1");
      // ceil with a guard against mu = 2.0000000000000004 from sqrt products.
      slow_count_ = static_cast<std::size_t>(std::ceil(2.0 * mu_ - 1e-9)) - 1;
    } else if (spec_.name == "obs1") {
      eps_ = spec_.param("eps");
      if (!(eps_ > 0.0)) throw DataError("obs1 needs eps > 0");
    } else if (spec_.name == "nonmigratory-lb") {
      const double n = spec_.param("n");
      fast_ = n * n * static_cast<double>(m_);
      for (std::size_t j = 0; j < n_; ++j) memo_(0, j) = fast_;
    } else {
      throw DataError("unknown speed oracle '" + spec_.name + "'");
    }
  }

  bool adaptive() const noexcept { return !spec_.name.empty(); }
  bool resolved(std::size_t i, std::size_t j) const { return !std::isnan(memo_(i, j)); }
  const Matrix& memo() const noexcept { return memo_; }

  double resolve(std::size_t i, std::size_t j) {
    if (resolved(i, j)) return memo_(i, j);
    if (spec_.name == "mu-lb") {
      memo_(i, j) = ++touched_[j] <= slow_count_ ? 1.0 : mu_;
    } else if (spec_.name == "obs1") {
      memo_(i, j) = ++touched_[j] <= m_ - 1 ? eps_ : 1.0;
    } else {
      fill_rows(1.0);
    }
    return memo_(i, j);
  }

  // Resolves every remaining entry, continuing each job in machine-index
  // order. Returns the complete matrix without changing this model.
  Matrix finalize() const {
    SpeedModel copy = *this;
    if (spec_.name == "nonmigratory-lb" && m_ > 1 && !copy.resolved(1, 0)) copy.fill_rows(fast_);
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < m_; ++i) copy.resolve(i, j);
    return copy.memo_;
  }

 private:
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  void fill_rows(double v) {
    for (std::size_t i = 1; i < m_; ++i)
      for (std::size_t j = 0; j < n_; ++j) memo_(i, j) = v;
  }

  std::size_t m_, n_;
  Matrix memo_;
  OracleSpec spec_;
  std::vector<std::size_t> touched_;
  double mu_ = 1.0, eps_ = 0.0, fast_ = 0.0;
  std::size_t slow_count_ = 0;
};

}  // namespace sosched
