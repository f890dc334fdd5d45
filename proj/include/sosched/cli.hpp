#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sosched/analysis.hpp"
#include "sosched/engine.hpp"
#include "sosched/instances.hpp"
#include "sosched/io.hpp"
#include "sosched/svg.hpp"

namespace sosched::cli {

namespace fs = std::filesystem;

struct Io {
  std::ostream& out;
  std::ostream& err;
};

// Maps library failures to exit codes: 2 for bad data, 3 for numerics.
template <class F>
int guarded(Io io, F&& body) {
  try {
    return body();
  } catch (const DataError& e) {
    io.err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    io.err << "numeric failure: " << e.what();
    if (!std::isnan(e.residual())) io.err << " (residual " << fmt17(e.residual()) << ')';
    io.err << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    io.err << "error: " << e.what() << '\n';
    return 2;
  }
}

inline double load_rate(const std::string& preset) {
  if (preset == "low") return kLowLoad;
  if (preset == "high") return kHighLoad;
  throw DataError("unknown load preset '" + preset + "' (expected low or high)");
}

// Noisy predictions around the instance's own predictions, or around the
// true speeds when it has none.
inline Instance with_noise(Instance inst, double sigma, std::uint64_t noise_seed) {
  if (inst.predictions) {
    inst.predictions = add_prediction_noise(*inst.predictions, sigma, noise_seed);
  } else if (inst.has_static_speeds()) {
    inst.predictions = add_prediction_noise(inst.static_speeds(), sigma, noise_seed);
  }
  return inst;
}

inline double mean_completion(const SimulationResult& r) {
  double s = 0.0;
  for (double c : r.completions) s += c;
  return r.completions.empty() ? 0.0 : s / static_cast<double>(r.completions.size());
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::uint64_t seed = 0;
  std::size_t jobs = 100;
  double rate = kLowLoad;
  bool sort_big = false;
  std::string out;
};

inline Instance generate_instance(const GenerateArgs& a) {
  SyntheticConfig c;
  c.seed = a.seed;
  c.job_count = a.jobs;
  c.arrival_rate = a.rate;
  c.sort_big = a.sort_big;
  return gen_synthetic(c);
}

inline int cmd_generate(const GenerateArgs& a, Io io) {
  return guarded(io, [&] {
    if (a.out.empty()) throw DataError("--out is required");
    Instance inst = generate_instance(a);
    write_file(a.out, instance_text(inst));
    io.out << "wrote " << inst.job_count() << " jobs on " << inst.machine_count << " machines to " << a.out << '\n';
    return 0;
  });
}

// --------------------------------------------------------------------- run

struct RunArgs {
  std::string instance;
  std::string policy;
  double sigma = 0.0;
  std::uint64_t noise_seed = 0;
  double dt = 1.0;
  double theta = 2.0 / 3.0;
  std::string out;
  std::string trace;
};

struct RunOutput {
  Instance instance;
  SimulationResult result;
};

inline RunOutput run_instance(const Instance& base, const RunArgs& a) {
  auto policy = make_policy(a.policy, PolicyOptions{a.theta, {}});
  Instance inst = with_noise(base, a.sigma, a.noise_seed);
  SimulationOptions opt;
  opt.dt = a.dt;
  auto res = simulate(inst, *policy, opt);
  return {std::move(inst), std::move(res)};
}

inline int cmd_run(const RunArgs& a, Io io) {
  return guarded(io, [&] {
    make_policy(a.policy);  // reject unknown names before touching files
    RunOutput r = run_instance(load_instance(a.instance), a);
    const std::string csv = result_csv(r.instance, r.result);
    if (a.out.empty()) io.out << csv;
    else write_file(a.out, csv);
    if (!a.trace.empty()) write_file(a.trace, trace_csv(r.result, r.instance.machine_count));
    if (!a.out.empty()) io.out << "objective " << fmt17(r.result.objective) << '\n';
    return 0;
  });
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::vector<std::string> policies = policy_names();
  std::vector<double> sigmas{0.0, 0.25, 0.5, 1.0, 2.0};
  std::size_t repeats = 3;
  std::size_t workloads = 1;
  std::vector<std::string> loads{"low", "high"};
  std::uint64_t seed = 0;
  std::size_t parallel = 1;
  std::size_t jobs = 100;
  bool sort_big = true;
  bool traces = false;
  double dt = 1.0;
  std::string out;
};

struct SweepCell {
  std::string load;
  std::size_t workload = 0;
  std::string policy;
  double sigma = 0.0;
  std::size_t repeat = 0;
  bool ok = false;
  double avg_completion = std::numeric_limits<double>::quiet_NaN();
  std::string error;
  std::string name;
};

struct SweepOutput {
  std::vector<SweepCell> cells;
  std::vector<AggregateRow> aggregate;
  std::size_t failures = 0;
};

inline std::uint64_t workload_seed(std::uint64_t seed, std::size_t w) { return stream_seed(seed, 1000 + w); }
inline std::uint64_t noise_seed(std::uint64_t seed, std::size_t w, std::size_t r) {
  return stream_seed(stream_seed(seed, 2000 + w), r);
}

inline std::string sigma_tag(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", s);
  return buf;
}

inline SweepOutput run_sweep(const SweepArgs& a) {
  if (a.repeats < 1) throw DataError("--repeats must be >= 1");
  if (a.workloads < 1) throw DataError("--workloads must be >= 1");
  if (a.parallel < 1) throw DataError("--parallel must be >= 1");
  if (a.policies.empty() || a.sigmas.empty() || a.loads.empty()) throw DataError("empty sweep");
  for (double s : a.sigmas)
    if (!(s >= 0.0)) throw DataError("sigmas must be >= 0");
  for (const auto& p : a.policies) make_policy(p);
  for (const auto& l : a.loads) load_rate(l);

  SweepOutput out;
  for (const auto& load : a.loads)
    for (std::size_t w = 0; w < a.workloads; ++w)
      for (const auto& p : a.policies)
        for (double s : a.sigmas)
          for (std::size_t r = 0; r < a.repeats; ++r) {
            SweepCell c;
            c.load = load;
            c.workload = w;
            c.policy = p;
            c.sigma = s;
            c.repeat = r;
            c.name = load + "_w" + std::to_string(w) + "_" + p + "_s" + sigma_tag(s) + "_r" + std::to_string(r);
            out.cells.push_back(std::move(c));
          }

  if (!a.out.empty()) fs::create_directories(fs::path(a.out) / "cells");
  if (!a.out.empty() && a.traces) fs::create_directories(fs::path(a.out) / "traces");

  auto run_cell = [&](SweepCell& c) {
    try {
      GenerateArgs g;
      g.seed = workload_seed(a.seed, c.workload);
      g.jobs = a.jobs;
      g.rate = load_rate(c.load);
      g.sort_big = a.sort_big;
      RunArgs ra;
      ra.policy = c.policy;
      ra.sigma = c.sigma;
      ra.noise_seed = noise_seed(a.seed, c.workload, c.repeat);
      ra.dt = a.dt;
      RunOutput r = run_instance(generate_instance(g), ra);
      c.avg_completion = mean_completion(r.result);
      c.ok = true;
      if (!a.out.empty()) {
        write_file((fs::path(a.out) / "cells" / (c.name + ".csv")).string(), result_csv(r.instance, r.result));
        if (a.traces)
          write_file((fs::path(a.out) / "traces" / (c.name + ".csv")).string(),
                     trace_csv(r.result, r.instance.machine_count));
      }
    } catch (const std::exception& e) {
      c.error = e.what();
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < out.cells.size();) run_cell(out.cells[k]);
  };
  const std::size_t threads = std::min(a.parallel, out.cells.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Sequential aggregation in the factorial order.
  for (const auto& load : a.loads)
    for (const auto& p : a.policies)
      for (double s : a.sigmas) {
        std::vector<double> v;
        for (const auto& c : out.cells)
          if (c.ok && c.load == load && c.policy == p && c.sigma == s) v.push_back(c.avg_completion);
        AggregateRow row{load, p, s, v.size(), std::numeric_limits<double>::quiet_NaN(), 0.0};
        if (!v.empty()) {
          double mean = 0.0, var = 0.0;
          for (double x : v) mean += x;
          mean /= static_cast<double>(v.size());
          for (double x : v) var += (x - mean) * (x - mean);
          row.mean = mean;
          row.std = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
        }
        out.aggregate.push_back(row);
      }
  for (const auto& c : out.cells) out.failures += c.ok ? 0 : 1;

  if (!a.out.empty()) {
    write_file((fs::path(a.out) / "aggregate.csv").string(), aggregate_csv(out.aggregate));
    std::ostringstream fails;
    fails << "cell,error\n";
    for (const auto& c : out.cells)
      if (!c.ok) fails << c.name << ",\"" << c.error << "\"\n";
    if (out.failures) write_file((fs::path(a.out) / "failures.csv").string(), fails.str());
  }
  return out;
}

inline int cmd_sweep(const SweepArgs& a, Io io) {
  return guarded(io, [&] {
    if (a.out.empty()) throw DataError("--out is required");
    SweepOutput s = run_sweep(a);
    io.out << s.cells.size() - s.failures << " of " << s.cells.size() << " cells succeeded; aggregate in "
           << (fs::path(a.out) / "aggregate.csv").string() << '\n';
    for (const auto& c : s.cells)
      if (!c.ok) io.err << "cell " << c.name << " failed: " << c.error << '\n';
    return s.failures < s.cells.size() ? 0 : 3;
  });
}

// --------------------------------------------------------------- adversary

struct AdversaryArgs {
  std::vector<std::string> constructions = construction_names();
  std::vector<double> ladder;  // overrides the default ladder values
  std::string policy;          // overrides the default algorithm
  std::optional<std::size_t> n, m;
  std::optional<double> eps, mu1, mu2;
  std::string out;
};

struct AdversaryRow {
  std::string construction;
  double param = 0.0;
  std::string policy;
  double objective = 0.0;
  double reference = 0.0;  // the proof's competing schedule, simulated
  double ratio = 0.0;
  double growth = std::numeric_limits<double>::quiet_NaN();
  double closed_form = std::numeric_limits<double>::quiet_NaN();
};

inline std::string adversary_csv(const std::vector<AdversaryRow>& rows) {
  std::ostringstream os;
  os << "construction,param,policy,objective,reference,ratio,growth,closed_form\n";
  for (const auto& r : rows)
    os << r.construction << ',' << fmt17(r.param) << ',' << r.policy << ',' << fmt17(r.objective) << ','
       << fmt17(r.reference) << ',' << fmt17(r.ratio) << ',' << fmt17(r.growth) << ',' << fmt17(r.closed_form) << '\n';
  return os.str();
}

namespace detail {

struct LadderPoint {
  double param;
  Instance instance;
};

inline std::vector<double> ladder_or(const AdversaryArgs& a, std::vector<double> fallback) {
  return a.ladder.empty() ? fallback : a.ladder;
}

inline std::size_t as_size(double v, const char* what) {
  if (!(v >= 0.0) || v != std::floor(v)) throw DataError(std::string(what) + " ladder values must be integers");
  return static_cast<std::size_t>(v);
}

inline std::vector<LadderPoint> ladder(const std::string& name, const AdversaryArgs& a) {
  std::vector<LadderPoint> out;
  if (name == "mu-lb") {
    std::vector<double> mus = ladder_or(a, {2, 4, 8});
    if (a.mu1 || a.mu2) mus = {a.mu1.value_or(1.0) * a.mu2.value_or(1.0)};
    for (double mu : mus) {
      const double m1 = a.mu1 ? *a.mu1 : std::sqrt(mu), m2 = a.mu2 ? *a.mu2 : mu / m1;
      const auto m = a.m.value_or(2 * static_cast<std::size_t>(std::ceil(2.0 * m1 * m2 - 1e-9)));
      out.push_back({mu, construct_mu_lb(m1, m2, m)});
    }
  } else if (name == "obs1") {
    for (double m : ladder_or(a, {2, 4, 8, 16})) out.push_back({m, construct_obs1(as_size(m, "m"), a.eps.value_or(0.01))});
  } else if (name == "greedy-lb") {
    for (double n : ladder_or(a, {9, 17, 33}))
      out.push_back({n, construct_greedy_lb(as_size(n, "n"), a.m.value_or(2), a.eps.value_or(1e-3))});
  } else if (name == "so-md-lb") {
    for (double n : ladder_or(a, {8, 16, 32})) out.push_back({n, construct_so_md_lb(as_size(n, "n"), a.eps.value_or(std::pow(n, -3.0)))});
  } else if (name == "rr-so-lb") {
    for (double m : ladder_or(a, {1, 2, 4, 8, 16, 32, 64})) out.push_back({m, construct_rr_so_lb(as_size(m, "m"))});
  } else if (name == "nonmigratory-lb") {
    for (double m : ladder_or(a, {2, 4, 8})) out.push_back({m, construct_nonmigratory_lb(a.n.value_or(16), as_size(m, "m"))});
  } else {
    throw DataError("unknown construction '" + name + "'");
  }
  return out;
}

inline std::string default_policy(const std::string& name) {
  if (name == "mu-lb") return "max-density";
  if (name == "obs1") return "rr";
  if (name == "greedy-lb") return "iter-greedy";
  if (name == "so-md-lb") return "max-density-so";
  if (name == "rr-so-lb") return "rr-so";
  return "";  // nonmigratory-lb replays its two fixed branches
}

}  // namespace detail

inline std::vector<AdversaryRow> run_adversary(const AdversaryArgs& a) {
  if (!a.policy.empty()) make_policy(a.policy);
  std::vector<AdversaryRow> rows;
  for (const auto& name : a.constructions) {
    std::map<std::string, double> prev;
    for (auto& point : detail::ladder(name, a)) {
      const Instance& inst = point.instance;
      std::vector<std::pair<std::string, std::function<SimulationResult()>>> algs;
      if (name == "nonmigratory-lb") {
        const std::size_t n = inst.job_count(), m = inst.machine_count;
        algs.emplace_back("pinned", [&inst, n] { return simulate(inst, FixedAssignmentPolicy(std::vector<std::size_t>(n, 0))); });
        algs.emplace_back("spread", [&inst, n, m] {
          std::vector<std::size_t> mach;
          for (std::size_t j = 0; j < n; ++j) mach.push_back(j % m);
          return simulate(inst, FixedAssignmentPolicy(mach));
        });
      } else {
        const std::string pol = a.policy.empty() ? detail::default_policy(name) : a.policy;
        algs.emplace_back(pol, [&inst, pol] { return simulate(inst, pol); });
      }
      for (auto& [label, run] : algs) {
        SimulationResult alg = run();
        const Instance fixed = with_static_speeds(inst, alg.final_speeds);
        auto alt = simulate(fixed, proof_alternative(name, inst, alg.final_speeds));
        AdversaryRow row{name, point.param, label, alg.objective, alt.objective, empirical_ratio(alg.objective, alt.objective)};
        if (auto it = prev.find(label); it != prev.end()) row.growth = row.ratio / it->second;
        prev[label] = row.ratio;
        if (name == "rr-so-lb" && label == "rr-so") {
          double s = 0.0;
          for (double c : closed_form_rr_so(inst.machine_count)) s += c;
          row.closed_form = s;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

inline int cmd_adversary(const AdversaryArgs& a, Io io) {
  return guarded(io, [&] {
    const std::string csv = adversary_csv(run_adversary(a));
    if (a.out.empty()) io.out << csv;
    else write_file(a.out, csv);
    return 0;
  });
}

// ------------------------------------------------------------------- bound

struct BoundArgs {
  std::string instance;
  std::string id;
  std::string result;  // prior result CSV to compare against
  std::string policy;  // or simulate this policy
  double sigma = 0.0;
  std::uint64_t noise_seed = 0;
  std::string variant = "lp";
  std::size_t horizon = 0;
  std::size_t max_columns = 4000;
  std::string out;
};

inline LpVariant parse_variant(const std::string& v) {
  if (v == "lp") return LpVariant::Preemptive;
  if (v == "np-lp") return LpVariant::NonPreemptive;
  throw DataError("unknown LP variant '" + v + "' (expected lp or np-lp)");
}

inline std::size_t lp_column_count(const Instance& inst, std::size_t horizon) {
  const Matrix& s = inst.static_speeds();
  std::size_t cols = 0;
  for (std::size_t j = 0; j < inst.job_count(); ++j) {
    const auto first = static_cast<std::size_t>(std::ceil(inst.jobs[j].release));
    if (first > horizon) continue;
    for (std::size_t i = 0; i < inst.machine_count; ++i)
      if (s(i, j) > 0.0) cols += horizon - first + 1;
  }
  return cols;
}

inline BoundRow compute_bound(const Instance& inst, const std::string& id, const std::string& policy, double objective,
                              LpVariant variant, std::size_t horizon, std::size_t max_columns) {
  BoundRow row;
  row.instance = id;
  row.policy = policy.empty() ? "-" : policy;
  row.objective = objective;
  row.trivial_lb = trivial_lower_bound(inst);
  const std::size_t T = horizon == 0 ? default_horizon(inst) : horizon;
  const std::size_t cols = lp_column_count(inst, T);
  if (cols > max_columns) {
    row.note = "lp skipped: " + std::to_string(cols) + " columns exceed " + std::to_string(max_columns);
  } else {
    auto sol = solve_lp(build_lp(inst, variant, 1.0, T));
    if (sol.status == LpStatus::Optimal) row.lp_lb = sol.value;
    else row.note = "lp " + to_string(sol.status);
  }
  if (!std::isnan(objective)) {
    row.ratio_trivial = empirical_ratio(objective, row.trivial_lb);
    if (!std::isnan(row.lp_lb) && row.lp_lb > 0.0) row.ratio_lp = empirical_ratio(objective, row.lp_lb);
    if (row.ratio_trivial < 1.0 || row.ratio_lp < 1.0) row.note += row.note.empty() ? "ratio below 1" : "; ratio below 1";
  }
  return row;
}

inline int cmd_bound(const BoundArgs& a, Io io) {
  return guarded(io, [&] {
    const LpVariant variant = parse_variant(a.variant);
    Instance inst = load_instance(a.instance);
    if (!inst.has_static_speeds()) throw DataError("bounds need a static speed matrix");
    double objective = std::numeric_limits<double>::quiet_NaN();
    if (!a.result.empty()) {
      objective = result_csv_objective(read_file(a.result));
    } else if (!a.policy.empty()) {
      RunArgs ra;
      ra.policy = a.policy;
      ra.sigma = a.sigma;
      ra.noise_seed = a.noise_seed;
      objective = run_instance(inst, ra).result.objective;
    }
    const std::string id = a.id.empty() ? fs::path(a.instance).stem().string() : a.id;
    BoundRow row = compute_bound(inst, id, a.policy, objective, variant, a.horizon, a.max_columns);
    const std::string csv = bound_csv({row});
    if (a.out.empty()) io.out << csv;
    else write_file(a.out, csv);
    if (!row.note.empty()) io.err << "note: " << row.note << '\n';
    return 0;
  });
}

// ------------------------------------------------------------------ report

struct ReportArgs {
  std::string aggregate;
  std::vector<std::string> traces;
  std::string out;
};

inline int cmd_report(const ReportArgs& a, Io io) {
  return guarded(io, [&] {
    if (a.out.empty()) throw DataError("--out is required");
    if (a.aggregate.empty() && a.traces.empty()) throw DataError("nothing to plot: pass --aggregate and/or --traces");
    fs::create_directories(a.out);
    std::size_t written = 0;
    if (!a.aggregate.empty()) {
      CsvTable t = parse_csv(read_file(a.aggregate));
      const int cp = t.column("policy"), cs = t.column("sigma"), cm = t.column("mean_avg_completion");
      const int cd = t.column("std_avg_completion"), cl = t.column("load");
      if (cp < 0 || cs < 0 || cm < 0) throw DataError("aggregate needs policy, sigma and mean_avg_completion columns");
      if (t.rows.empty()) throw DataError("aggregate file has no rows");
      if (cd < 0) io.err << "warning: no std_avg_completion column, plotting without shading\n";
      std::map<std::string, std::vector<svg::Series>> by_load;
      for (const auto& r : t.rows) {
        if (r.size() < t.header.size()) throw DataError("short row in aggregate file");
        const std::string load = cl >= 0 ? r[cl] : "all";
        auto& series = by_load[load];
        auto it = std::find_if(series.begin(), series.end(), [&](const svg::Series& s) { return s.name == r[cp]; });
        if (it == series.end()) {
          series.push_back({r[cp], {}});
          it = series.end() - 1;
        }
        const double mean = parse_double(r[cm]);
        if (std::isnan(mean)) continue;
        it->points.push_back({parse_double(r[cs]), mean, cd >= 0 ? parse_double(r[cd]) : std::nan("")});
      }
      for (const auto& [load, series] : by_load) {
        const std::string file = (fs::path(a.out) / ("completion_" + load + ".svg")).string();
        write_file(file, svg::line_plot(series, "Average completion time (" + load + " load)", "sigma",
                                        "mean average completion time"));
        ++written;
      }
    }
    if (!a.traces.empty()) {
      std::map<std::size_t, double> hist;
      for (const auto& path : a.traces) {
        CsvTable t = parse_csv(read_file(path));
        const int c0 = t.column("start"), c1 = t.column("end"), cl = t.column("load");
        if (c0 < 0 || c1 < 0 || cl < 0) throw DataError("'" + path + "' is not a trace CSV");
        for (const auto& r : t.rows) {
          const double d = parse_double(r[c1]) - parse_double(r[c0]);
          if (d > 0.0 && std::isfinite(d)) hist[static_cast<std::size_t>(parse_double(r[cl]))] += d;
        }
      }
      if (hist.empty()) throw DataError("trace files contain no epochs");
      double total = 0.0;
      for (const auto& [k, v] : hist) total += v;
      for (auto& [k, v] : hist) v /= total;
      write_file((fs::path(a.out) / "load_distribution.svg").string(),
                 svg::bar_plot(hist, "Distribution of the system load", "alive jobs", "fraction of time"));
      ++written;
    }
    io.out << "wrote " << written << " plot(s) to " << a.out << '\n';
    return 0;
  });
}

// -------------------------------------------------------------------- main

inline int main_entry(int argc, const char* const* argv, Io io) {
  CLI::App app{"Speed-oblivious online scheduling simulator"};
  app.require_subcommand(1, 1);

  GenerateArgs gen;
  std::string gen_load;
  auto* g = app.add_subcommand("generate", "write a synthetic instance as JSON");
  g->add_option("--seed", gen.seed, "workload seed");
  g->add_option("--jobs", gen.jobs, "number of jobs");
  auto* g_rate = g->add_option("--rate", gen.rate, "Poisson arrival rate (jobs per time unit)");
  g->add_option("--load", gen_load, "arrival preset: low or high")->excludes(g_rate);
  g->add_flag("--sort-big", gen.sort_big, "sort big-core speeds so machines are speed-ordered");
  g->add_option("--out", gen.out, "output JSON path")->required();

  RunArgs run;
  auto* r = app.add_subcommand("run", "simulate one policy on an instance");
  r->add_option("--instance", run.instance, "instance JSON")->required();
  r->add_option("--policy", run.policy, "policy name")->required();
  r->add_option("--sigma", run.sigma, "log-normal prediction noise");
  r->add_option("--noise-seed", run.noise_seed, "noise seed");
  r->add_option("--dt", run.dt, "decision grid spacing");
  r->add_option("--theta", run.theta, "greedy-wspt delay factor");
  r->add_option("--out", run.out, "result CSV (stdout if omitted)");
  r->add_option("--trace", run.trace, "epoch trace CSV");

  SweepArgs sw;
  bool no_sort = false;
  auto* s = app.add_subcommand("sweep", "full factorial synthetic experiment");
  s->add_option("--policy", sw.policies, "policies (comma separated)")->delimiter(',');
  s->add_option("--sigma", sw.sigmas, "noise levels (comma separated)")->delimiter(',');
  s->add_option("--repeats", sw.repeats, "noise repeats per workload");
  s->add_option("--workloads", sw.workloads, "random workloads per load preset");
  s->add_option("--loads", sw.loads, "load presets (comma separated)")->delimiter(',');
  s->add_option("--jobs", sw.jobs, "jobs per workload");
  s->add_option("--seed", sw.seed, "base seed");
  s->add_option("--parallel", sw.parallel, "concurrent cells");
  s->add_option("--dt", sw.dt, "decision grid spacing");
  s->add_flag("--no-sort-big", no_sort, "keep big-core speeds unsorted");
  s->add_flag("--traces", sw.traces, "also write epoch traces per cell");
  s->add_option("--out", sw.out, "output directory")->required();

  AdversaryArgs adv;
  std::string construction = "all";
  std::size_t adv_n = 0, adv_m = 0;
  double adv_eps = 0, adv_mu1 = 0, adv_mu2 = 0;
  auto* a = app.add_subcommand("adversary", "lower-bound constructions across a parameter ladder");
  a->add_option("--construction", construction, "construction name or all");
  a->add_option("--ladder", adv.ladder, "ladder values (comma separated)")->delimiter(',');
  a->add_option("--policy", adv.policy, "algorithm to run instead of the default");
  auto* o_n = a->add_option("--n", adv_n, "fixed job count where the ladder varies m");
  auto* o_m = a->add_option("--m", adv_m, "fixed machine count where the ladder varies n");
  auto* o_eps = a->add_option("--eps", adv_eps, "epsilon");
  auto* o_mu1 = a->add_option("--mu1", adv_mu1, "mu-lb prediction factor");
  auto* o_mu2 = a->add_option("--mu2", adv_mu2, "mu-lb speed factor");
  a->add_option("--out", adv.out, "output CSV (stdout if omitted)");

  BoundArgs bd;
  auto* b = app.add_subcommand("bound", "trivial and LP lower bounds for an instance");
  b->add_option("--instance", bd.instance, "instance JSON")->required();
  b->add_option("--id", bd.id, "instance label");
  b->add_option("--result", bd.result, "result CSV to compare against");
  b->add_option("--policy", bd.policy, "simulate this policy for the ratio");
  b->add_option("--sigma", bd.sigma, "noise for the simulated policy");
  b->add_option("--noise-seed", bd.noise_seed, "noise seed");
  b->add_option("--variant", bd.variant, "lp or np-lp");
  b->add_option("--horizon", bd.horizon, "time grid horizon (0 = automatic)");
  b->add_option("--max-columns", bd.max_columns, "skip the LP above this many columns");
  b->add_option("--out", bd.out, "output CSV (stdout if omitted)");

  ReportArgs rp;
  auto* p = app.add_subcommand("report", "render SVG plots");
  p->add_option("--aggregate", rp.aggregate, "aggregate CSV from sweep");
  p->add_option("--traces", rp.traces, "trace CSVs")->delimiter(',');
  p->add_option("--out", rp.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg, err;
    const int code = app.exit(e, msg, err);
    io.out << msg.str();
    io.err << err.str();
    return code == 0 ? 0 : 2;
  }

  if (g->parsed()) {
    if (!gen_load.empty()) {
      const int code = guarded(io, [&] {
        gen.rate = load_rate(gen_load);
        return 0;
      });
      if (code) return code;
    }
    return cmd_generate(gen, io);
  }
  if (r->parsed()) return cmd_run(run, io);
  if (s->parsed()) {
    sw.sort_big = !no_sort;
    return cmd_sweep(sw, io);
  }
  if (a->parsed()) {
    if (construction != "all") adv.constructions = {construction};
    if (o_n->count()) adv.n = adv_n;
    if (o_m->count()) adv.m = adv_m;
    if (o_eps->count()) adv.eps = adv_eps;
    if (o_mu1->count()) adv.mu1 = adv_mu1;
    if (o_mu2->count()) adv.mu2 = adv_mu2;
    return cmd_adversary(adv, io);
  }
  if (b->parsed()) return cmd_bound(bd, io);
  return cmd_report(rp, io);
}

}  // namespace sosched::cli
