#include "vrgames/serialize.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace vrgames {

namespace {

Vector vector_from_json(const nlohmann::json& arr, const char* name) {
  if (!arr.is_array() || arr.empty())
    throw std::invalid_argument(std::string("point file: '") + name +
                                "' must be a non-empty array");
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const auto& e : arr) {
    if (!e.is_number())
      throw std::invalid_argument(std::string("point file: '") + name +
                                  "' holds a non-numeric entry");
    v[i++] = e.get<double>();
  }
  return v;
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

Point load_point_json(std::istream& in, SetupKind kind) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("point file: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("x") || !j.contains("y"))
    throw std::invalid_argument("point file: expected an object with 'x' and 'y' arrays");
  Point z;
  z.kind = kind;
  z.x = vector_from_json(j["x"], "x");
  z.y = vector_from_json(j["y"], "y");
  return z;
}

Point load_point_json_file(const std::string& path, SetupKind kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return load_point_json(in, kind);
}

void save_point_json(std::ostream& out, const Point& z) {
  nlohmann::json j;
  j["x"] = vector_to_json(z.x);
  j["y"] = vector_to_json(z.y);
  out << j.dump(2) << "\n";
}

void save_point_json_file(const std::string& path, const Point& z) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_point_json(out, z);
}

void write_report_json(std::ostream& out, const SolveReport& report) {
  nlohmann::json j;
  j["config"] = {{"setup", setup_name(report.config.kind)},
                 {"estimator", estimator_name(report.config.variant)},
                 {"alpha", report.config.alpha},
                 {"eta", report.config.eta},
                 {"tau", std::isfinite(report.config.tau) ? nlohmann::json(report.config.tau)
                                                          : nlohmann::json()},
                 {"epsilon", report.config.epsilon},
                 {"T", report.config.inner_iterations},
                 {"K", report.config.outer_iterations},
                 {"seed", report.config.seed},
                 {"gap_check_every", report.config.gap_check_every},
                 {"early_stop", report.config.early_stop},
                 {"theorem_mode", report.config.theorem_mode},
                 {"restarted_oracle", report.config.use_restarted_oracle},
                 {"restart_phases", report.config.restart_phases}};
  j["gap"] = report.measured_gap;
  j["converged"] = report.converged;
  j["outer_iterations_run"] = report.outer_iterations_run;
  j["inner_steps_run"] = report.inner_steps_run;
  j["work"] = {{"total", report.work.total()},
               {"gradient", report.work.gradient},
               {"estimator", report.work.estimator},
               {"step", report.work.step},
               {"gap", report.work.gap}};
  j["final_point"] = {{"x", vector_to_json(report.final_point.x)},
                      {"y", vector_to_json(report.final_point.y)}};
  nlohmann::json trace = nlohmann::json::array();
  for (const TraceRecord& rec : report.trace) {
    nlohmann::json row = {{"k", rec.k}, {"work", rec.work}, {"gap", rec.gap}};
    if (std::isfinite(rec.divergence_to_reference))
      row["divergence_to_reference"] = rec.divergence_to_reference;
    trace.push_back(row);
  }
  j["trace"] = trace;
  out << j.dump(2) << "\n";
}

void write_report_json_file(const std::string& path, const SolveReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_report_json(out, report);
}

void write_trace_csv(std::ostream& out, const SolveReport& report) {
  out << "k,work,gap\n";
  char buf[64];
  for (const TraceRecord& rec : report.trace) {
    std::snprintf(buf, sizeof buf, "%.17g", rec.gap);
    out << rec.k << "," << rec.work << "," << buf << "\n";
  }
}

void write_trace_csv_file(const std::string& path, const SolveReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_trace_csv(out, report);
}

}  // namespace vrgames
