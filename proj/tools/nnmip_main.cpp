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
// Command-line front end: generate benchmark instances, solve them by any
// method, run the desk-scale experiment sweeps, and validate files.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nnmip/benchgen.hpp"
#include "nnmip/dd.hpp"
#include "nnmip/harness.hpp"
#include "nnmip/instance_io.hpp"
#include "nnmip/report.hpp"
#include "nnmip/ssg.hpp"

namespace {

using nnmip::format_double;

double display_objective(const nnmip::ProblemInstance& inst, double min_form) {
  return inst.sense == "max" ? -min_form : min_form;
}

void print_report(const nnmip::ProblemInstance& inst,
                  const nnmip::SolveReport& report) {
  std::cout << "instance: " << report.instance_name << "\n"
            << "method: " << report.method
            << (report.subsolver.empty() ? "" : " (" + report.subsolver + ")")
            << "\n"
            << "status: " << report.status << "\n"
            << "objective (" << inst.sense
            << "): " << format_double(display_objective(inst, report.objective))
            << "\n"
            << "converged: " << (report.converged ? "yes" : "no") << "\n"
            << "iterations: " << report.iterations << "\n"
            << "residual_inf: " << format_double(report.primal_residual) << "\n"
            << "mip_feas: " << format_double(report.mip_feasibility) << "\n"
            << "nn_feas: " << format_double(report.nn_feasibility) << "\n"
            << "total_s: "
            << format_double(report.phase_times.count("total")
                                 ? report.phase_times.at("total")
                                 : 0.0)
            << "\n";
  if (!report.notes.empty()) std::cout << "notes: " << report.notes << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-integer solver toolkit for problems with embedded "
               "feedforward networks"};
  app.require_subcommand(1);

  // --- gen ---------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a benchmark instance");
  std::string gen_kind;
  gen->add_option("kind", gen_kind, "water | tree | smooth")->required();
  std::string gen_out = "instance.nnmip";
  gen->add_option("-o,--out", gen_out, "Output path");
  std::uint64_t gen_seed = 42;
  gen->add_option("--seed", gen_seed, "Generator seed");
  int gen_n = 4;
  gen->add_option("--n", gen_n, "Water: samples to treat");
  int gen_features = 9;
  gen->add_option("--features", gen_features, "Water: feature dimension");
  double gen_budget = 2.0;
  gen->add_option("--budget", gen_budget, "Water: per-feature budget");
  int gen_grid = 2;
  gen->add_option("--grid", gen_grid, "Tree: grid side length");
  double gen_plant_budget = -1.0;
  gen->add_option("--plant-budget", gen_plant_budget,
                  "Tree: planting budget (negative = generous default)");
  int gen_sterilize = -1;
  gen->add_option("--sterilize-budget", gen_sterilize,
                  "Tree: sterilization cap (negative = half the sites)");
  int gen_p = 3;
  gen->add_option("--p", gen_p, "Smooth: variable count");
  std::vector<int> gen_arch;
  gen->add_option("--arch", gen_arch, "Hidden layer widths");

  // --- solve -------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  std::string solve_path;
  solve->add_option("instance", solve_path, "Instance file (.nnmip)")
      ->required();
  std::string method = "dd";
  solve->add_option("--method", method, "dd | bigm | ssg");
  std::string subsolver = "auto";
  solve->add_option("--subsolver", subsolver, "auto | pgd | barrier");
  nnmip::DdConfig dd_config;
  solve->add_option("--rho0", dd_config.rho0, "Initial penalty");
  solve->add_option("--eta", dd_config.eta, "Subsolver step size");
  solve->add_option("--epsilon", dd_config.epsilon, "Convergence tolerance");
  solve->add_option("--max-iters", dd_config.max_outer, "Outer iteration cap");
  solve->add_option("--inner-steps", dd_config.inner_steps,
                    "Subsolver step budget per outer iteration");
  solve->add_option("--time-budget", dd_config.time_budget_s,
                    "Wall-clock budget in seconds");
  bool fixed_rho = false;
  solve->add_flag("--fixed-rho", fixed_rho, "Disable penalty adaptation");
  std::uint64_t ssg_seed = 42;
  solve->add_option("--seed", ssg_seed, "ssg: start-point seed");
  std::string report_path;
  solve->add_option("--report", report_path, "Write the report CSV here");
  std::string trace_path;
  solve->add_option("--trace", trace_path,
                    "dd only: write the iteration trace CSV here");

  // --- experiment ----------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "Run a desk-scale sweep");
  std::string exp_name;
  exp->add_option("name", exp_name, "e1 | e2 | e3 | e4 | e5")->required();
  std::vector<std::uint64_t> exp_seeds;
  exp->add_option("--seeds", exp_seeds, "Seed list (default: paper set)");
  int jobs = 1;
  exp->add_option("--jobs", jobs, "Parallel solver runs");
  std::string exp_out;
  exp->add_option("-o,--out", exp_out, "Write the CSV here (default stdout)");
  int exp_count = 20;
  exp->add_option("--count", exp_count, "e3/e5: instance count");

  // --- validate ------------------------------------------------------------
  auto* check = app.add_subcommand("validate", "Validate an instance file");
  std::string check_path;
  check->add_option("instance", check_path, "Instance file (.nnmip)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      nnmip::ProblemInstance inst;
      if (gen_kind == "water") {
        nnmip::WaterParams params;
        params.n = gen_n;
        params.feature_dim = gen_features;
        params.budgets_up.assign(gen_features, gen_budget);
        params.budgets_down.assign(gen_features, gen_budget);
        if (!gen_arch.empty()) params.arch = gen_arch;
        params.seed = gen_seed;
        inst = nnmip::gen_water_potability(params);
      } else if (gen_kind == "tree") {
        nnmip::TreeParams params;
        params.grid_n = gen_grid;
        params.plant_budget = gen_plant_budget;
        params.sterilize_budget = gen_sterilize;
        if (!gen_arch.empty()) params.arch = gen_arch;
        params.seed = gen_seed;
        inst = nnmip::gen_tree_planting(params);
      } else if (gen_kind == "smooth") {
        nnmip::SmoothParams params;
        params.p = gen_p;
        params.seed = gen_seed;
        inst = nnmip::gen_smooth_surrogate(params);
      } else {
        std::cerr << "unknown generator kind: " << gen_kind << "\n";
        return 2;
      }
      nnmip::save_instance_file(inst, gen_out);
      std::cout << "wrote " << gen_out << " (" << inst.p() << " variables, "
                << inst.m1() + inst.m2() << " rows, "
                << inst.network.param_count() << " parameters)\n";
      return 0;
    }

    if (solve->parsed()) {
      const nnmip::ProblemInstance inst =
          nnmip::load_instance_file(solve_path);
      nnmip::SolveReport report;
      nnmip::DdTrace trace;
      if (method == "dd") {
        dd_config.adapt_rho_enabled = !fixed_rho;
        nnmip::SubsolverKind kind;
        if (subsolver == "auto") {
          kind = nnmip::SubsolverKind::kAuto;
        } else if (subsolver == "pgd") {
          kind = nnmip::SubsolverKind::kPgd;
        } else if (subsolver == "barrier") {
          kind = nnmip::SubsolverKind::kBarrier;
        } else {
          std::cerr << "unknown subsolver: " << subsolver << "\n";
          return 2;
        }
        report = nnmip::dd_solve(inst, dd_config, kind, &trace);
        if (!trace_path.empty()) {
          nnmip::write_text_file(trace_path, nnmip::trace_csv(trace));
        }
      } else if (method == "bigm") {
        report = nnmip::solve_bigm(inst);
      } else if (method == "ssg") {
        nnmip::SsgConfig config;
        config.seed = ssg_seed;
        report = nnmip::ssg_solve(inst, config);
      } else {
        std::cerr << "unknown method: " << method << "\n";
        return 2;
      }
      report.seed = static_cast<long>(ssg_seed);
      print_report(inst, report);
      if (!report_path.empty()) {
        nnmip::write_text_file(report_path, nnmip::report_csv_header() + "\n" +
                                                nnmip::report_csv_row(report) +
                                                "\n");
      }
      return 0;
    }

    if (exp->parsed()) {
      std::string csv;
      if (exp_name == "e1") {
        nnmip::E1Params params;
        params.seeds = exp_seeds;
        params.jobs = jobs;
        csv = nnmip::run_e1(params);
      } else if (exp_name == "e2") {
        nnmip::E2Params params;
        params.seeds = exp_seeds;
        params.jobs = jobs;
        csv = nnmip::run_e2(params);
      } else if (exp_name == "e3") {
        nnmip::E3Params params;
        params.seeds = exp_seeds;
        params.jobs = jobs;
        params.count = exp_count;
        csv = nnmip::run_e3(params);
      } else if (exp_name == "e5") {
        nnmip::E5Params params;
        params.seeds = exp_seeds;
        params.jobs = jobs;
        params.count = exp_count;
        csv = nnmip::run_e5(params);
      } else if (exp_name == "e4") {
        std::cout << nnmip::e4_notice() << "\n";
        return 0;
      } else {
        std::cerr << "unknown experiment: " << exp_name << "\n";
        return 2;
      }
      if (exp_out.empty()) {
        std::cout << csv;
      } else {
        nnmip::write_text_file(exp_out, csv);
        std::cout << "wrote " << exp_out << "\n";
      }
      return 0;
    }

    if (check->parsed()) {
      const nnmip::ProblemInstance inst =
          nnmip::load_instance_file(check_path);
      std::cout << check_path << ": valid (" << inst.p() << " variables, "
                << inst.m1() << "+" << inst.m2() << " rows, "
                << inst.network.param_count() << " parameters)\n";
      return 0;
    }
  } catch (const nnmip::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const nnmip::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 1;
  } catch (const nnmip::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
