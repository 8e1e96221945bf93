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
//
// CSV emitters. All numbers go through the shortest-round-trip formatter,
// so rows are byte-stable across runs except for the wall-clock columns.

#ifndef NNMIP_REPORT_HPP_
#define NNMIP_REPORT_HPP_

#include <string>
#include <vector>

#include "nnmip/dd.hpp"
#include "nnmip/instance.hpp"

namespace nnmip {

/// instance,method,subsolver,seed,objective,converged,iterations,
/// residual_inf,mip_feas,nn_feas,total_s,mip_s,nn_s,nodes,binaries,rows
std::string report_csv_header();

/// One row matching report_csv_header(). Booleans print as 1/0; missing
/// phase times print as 0.
std::string report_csv_row(const SolveReport& report);

/// k,residual_inf,residual_2,merit,rho,mip_time_s,nn_time_s,
/// inner_converged,inner_violation (the last two are artifact extras).
std::string trace_csv_header();

std::string trace_csv_row(const TraceRow& row);

/// Full trace file content: header plus one line per outer iteration.
std::string trace_csv(const DdTrace& trace);

/// Drops the wall-clock fields (total_s, mip_s, nn_s) from a report CSV
/// line, keeping the byte-stable remainder for determinism comparisons.
std::string strip_time_columns(const std::string& csv_line);

/// Writes content to path, throwing Error on any I/O failure.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nnmip

#endif  // NNMIP_REPORT_HPP_
