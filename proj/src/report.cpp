// Copyright 2026 The nnmip authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nnmip/report.hpp"

#include <fstream>
#include <sstream>

namespace nnmip {

namespace {

double phase_or_zero(const SolveReport& report, const char* name) {
  const auto it = report.phase_times.find(name);
  return it == report.phase_times.end() ? 0.0 : it->second;
}

}  // namespace

std::string report_csv_header() {
  return "instance,method,subsolver,seed,objective,converged,iterations,"
         "residual_inf,mip_feas,nn_feas,total_s,mip_s,nn_s,nodes,binaries,"
         "rows";
}

std::string report_csv_row(const SolveReport& report) {
  std::string out;
  out += report.instance_name;
  out += ',' + report.method;
  out += ',' + report.subsolver;
  out += ',' + std::to_string(report.seed);
  out += ',' + format_double(report.objective);
  out += report.converged ? ",1" : ",0";
  out += ',' + std::to_string(report.iterations);
  out += ',' + format_double(report.primal_residual);
  out += ',' + format_double(report.mip_feasibility);
  out += ',' + format_double(report.nn_feasibility);
  out += ',' + format_double(phase_or_zero(report, "total"));
  out += ',' + format_double(phase_or_zero(report, "mip"));
  out += ',' + format_double(phase_or_zero(report, "nn"));
  out += ',' + std::to_string(report.nodes);
  out += ',' + std::to_string(report.binaries);
  out += ',' + std::to_string(report.rows);
  return out;
}

std::string trace_csv_header() {
  return "k,residual_inf,residual_2,merit,rho,mip_time_s,nn_time_s,"
         "inner_converged,inner_violation";
}

std::string trace_csv_row(const TraceRow& row) {
  std::string out;
  out += std::to_string(row.k);
  out += ',' + format_double(row.residual_inf);
  out += ',' + format_double(row.residual_2);
  out += ',' + format_double(row.merit);
  out += ',' + format_double(row.rho);
  out += ',' + format_double(row.mip_time_s);
  out += ',' + format_double(row.nn_time_s);
  out += row.inner_converged ? ",1" : ",0";
  out += ',' + format_double(row.inner_violation);
  return out;
}

std::string trace_csv(const DdTrace& trace) {
  std::string out = trace_csv_header() + "\n";
  for (const TraceRow& row : trace.rows) out += trace_csv_row(row) + "\n";
  return out;
}

std::string strip_time_columns(const std::string& csv_line) {
  // Columns 10..12 (0-based) of the report schema are wall-clock.
  std::stringstream in(csv_line);
  std::string field;
  std::string out;
  int idx = 0;
  while (std::getline(in, field, ',')) {
    if (idx < 10 || idx > 12) {
      if (!out.empty()) out += ',';
      out += field;
    }
    ++idx;
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

}  // namespace nnmip
