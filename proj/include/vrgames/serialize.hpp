#ifndef VRGAMES_SERIALIZE_HPP
#define VRGAMES_SERIALIZE_HPP

#include <iosfwd>
#include <string>

#include "vrgames/solvers.hpp"

namespace vrgames {

/// Point files are JSON {"x": [...], "y": [...]}; schema-validated on load.
/// Loading does not check domain feasibility (the gap metric does).
Point load_point_json(std::istream& in, SetupKind kind);
Point load_point_json_file(const std::string& path, SetupKind kind);
void save_point_json(std::ostream& out, const Point& z);
void save_point_json_file(const std::string& path, const Point& z);

void write_report_json(std::ostream& out, const SolveReport& report);
void write_report_json_file(const std::string& path, const SolveReport& report);

/// Trace CSV columns: k,work,gap (header row mandatory).
void write_trace_csv(std::ostream& out, const SolveReport& report);
void write_trace_csv_file(const std::string& path, const SolveReport& report);

}  // namespace vrgames

#endif  // VRGAMES_SERIALIZE_HPP
