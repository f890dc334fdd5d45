#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sosched/engine.hpp"
#include "sosched/model.hpp"

namespace sosched {

using json = nlohmann::json;

// Shortest round-trip text for CSV cells.
inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json matrix_to_json(const Matrix& m) { return m.to_rows(); }

inline Matrix matrix_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw DataError(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) throw DataError(std::string(what) + " rows must be arrays");
    std::vector<double> row;
    for (const auto& v : r) {
      if (!v.is_number()) throw DataError(std::string(what) + " entries must be numbers");
      row.push_back(v.get<double>());
    }
    rows.push_back(std::move(row));
  }
  try {
    return Matrix::from_rows(rows);
  } catch (const std::invalid_argument&) {
    throw DataError(std::string(what) + " is ragged");
  }
}

inline json instance_to_json(const Instance& inst) {
  json out;
  out["machines"] = inst.machine_count;
  out["jobs"] = json::array();
  for (const auto& j : inst.jobs)
    out["jobs"].push_back({{"id", j.id}, {"release", j.release}, {"weight", j.weight}, {"volume", j.volume}});
  if (const auto* s = std::get_if<Matrix>(&inst.speeds)) {
    out["speeds"] = matrix_to_json(*s);
  } else {
    const auto& o = std::get<OracleSpec>(inst.speeds);
    out["speeds"] = {{"oracle", o.name}, {"params", o.params}};
  }
  if (inst.predictions) out["predictions"] = matrix_to_json(*inst.predictions);
  out["speed_ordered"] = inst.speed_ordered;
  return out;
}

inline Instance instance_from_json(const json& j) {
  try {
    Instance inst;
    inst.machine_count = j.at("machines").get<std::size_t>();
    for (const auto& job : j.at("jobs"))
      inst.jobs.push_back({job.at("id").get<int>(), job.value("release", 0.0), job.value("weight", 1.0),
                           job.at("volume").get<double>()});
    const json& s = j.at("speeds");
    if (s.is_object()) {
      OracleSpec o;
      o.name = s.at("oracle").get<std::string>();
      if (s.contains("params")) o.params = s.at("params").get<std::map<std::string, double>>();
      inst.speeds = o;
    } else {
      inst.speeds = matrix_from_json(s, "speeds");
    }
    if (j.contains("predictions") && !j.at("predictions").is_null())
      inst.predictions = matrix_from_json(j.at("predictions"), "predictions");
    inst.speed_ordered = j.value("speed_ordered", false);
    return inst;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed instance: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("write to '" + path + "' failed");
}

inline Instance load_instance(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw DataError("'" + path + "' is not valid JSON: " + e.what());
  }
  Instance inst = instance_from_json(j);
  if (auto bad = validate_instance(inst); !bad.empty()) throw DataError("'" + path + "': " + bad.front());
  return inst;
}

inline std::string instance_text(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

// One row per job, then a trailer row with the objective.
inline std::string result_csv(const Instance& inst, const SimulationResult& res) {
  std::ostringstream os;
  os << "id,release,weight,volume,completion,flow\n";
  double total_c = 0.0;
  for (std::size_t j = 0; j < inst.job_count(); ++j) {
    const Job& job = inst.jobs[j];
    const double c = res.completions[j];
    total_c += c;
    os << job.id << ',' << fmt17(job.release) << ',' << fmt17(job.weight) << ',' << fmt17(job.volume) << ','
       << fmt17(c) << ',' << fmt17(c - job.release) << '\n';
  }
  const double mean = inst.job_count() ? total_c / static_cast<double>(inst.job_count()) : 0.0;
  os << "objective," << fmt17(res.objective) << ",total_weighted_completion," << fmt17(res.objective)
     << ",mean_completion," << fmt17(mean) << '\n';
  return os.str();
}

// Objective from the trailer row of a result CSV.
inline double result_csv_objective(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("objective,", 0) != 0) continue;
    std::string rest = line.substr(10);
    try {
      return std::stod(rest.substr(0, rest.find(',')));
    } catch (const std::exception&) {
      throw DataError("bad objective in result file");
    }
  }
  throw DataError("result file has no objective row");
}

inline std::string trace_csv(const SimulationResult& res, std::size_t machine_count) {
  std::ostringstream os;
  os << "start,end,load";
  for (std::size_t i = 0; i < machine_count; ++i) os << ",busy_" << i + 1;
  os << '\n';
  for (const auto& e : res.epochs) {
    os << fmt17(e.start) << ',' << fmt17(e.end) << ',' << e.alive_count;
    for (double b : busy_fractions(res.rates_of(e), machine_count)) os << ',' << fmt17(b);
    os << '\n';
  }
  return os.str();
}

struct BoundRow {
  std::string instance;
  std::string policy;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double trivial_lb = std::numeric_limits<double>::quiet_NaN();
  double lp_lb = std::numeric_limits<double>::quiet_NaN();
  double ratio_trivial = std::numeric_limits<double>::quiet_NaN();
  double ratio_lp = std::numeric_limits<double>::quiet_NaN();
  std::string note;
};

inline std::string bound_csv(const std::vector<BoundRow>& rows) {
  std::ostringstream os;
  os << "instance,policy,objective,trivial_lb,lp_lb,ratio_trivial,ratio_lp,note\n";
  for (const auto& r : rows)
    os << r.instance << ',' << r.policy << ',' << fmt17(r.objective) << ',' << fmt17(r.trivial_lb) << ','
       << fmt17(r.lp_lb) << ',' << fmt17(r.ratio_trivial) << ',' << fmt17(r.ratio_lp) << ',' << r.note << '\n';
  return os.str();
}

struct AggregateRow {
  std::string load;
  std::string policy;
  double sigma = 0.0;
  std::size_t cells = 0;
  double mean = 0.0;
  double std = std::numeric_limits<double>::quiet_NaN();
};

inline std::string aggregate_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream os;
  os << "load,policy,sigma,cells,mean_avg_completion,std_avg_completion\n";
  for (const auto& r : rows)
    os << r.load << ',' << r.policy << ',' << fmt17(r.sigma) << ',' << r.cells << ',' << fmt17(r.mean) << ','
       << fmt17(r.std) << '\n';
  return os.str();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

// Header-driven CSV read: column name -> values per row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return static_cast<int>(k);
    return -1;
  }
};

inline CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      t.header = split(line, ',');
      first = false;
    } else {
      t.rows.push_back(split(line, ','));
    }
  }
  return t;
}

inline double parse_double(const std::string& s) {
  if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw DataError("bad number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw DataError("bad number '" + s + "'");
  }
}

}  // namespace sosched
