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

#include "nnmip/dd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nnmip/bnb.hpp"
#include "nnmip/nn_engine.hpp"

namespace nnmip {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

DdState dual_update(DdState state, const DdConfig& config) {
  const Vector raw = state.lambda + state.rho * (state.u - state.x);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double clamped =
        std::min(std::max(raw(i), -config.lambda_bound), config.lambda_bound);
    if (clamped != raw(i)) ++state.lambda_clamp_events;
    state.lambda(i) = clamped;
  }
  return state;
}

double adapt_rho(const DdState& state, const DdConfig& config) {
  const auto& h = state.history;
  if (h.empty()) throw Error("adapt_rho: history is empty");
  if (h.size() < 2) return state.rho;
  const double r_now = h.back().residual2;
  const double r_prev = h[h.size() - 2].residual2;
  if (r_now > config.residual_stall_factor * r_prev) {
    // The cap keeps a run that cannot reach consensus from inflating the
    // penalty past the range where the subproblems stay well scaled.
    return std::min(state.rho * config.rho_growth, config.rho0 * 1e8);
  }
  if (h.size() >= 6) {
    const double r_old = h[h.size() - 6].residual2;
    if (r_now <= 0.1 * r_old) {
      return std::max(state.rho / config.rho_growth, config.rho0 / 10.0);
    }
  }
  return state.rho;
}

double merit(const DdState& state, const ProblemInstance& inst) {
  double g = 0.0;
  if (inst.q() > 0) g = inst.d.dot(forward(inst.network, state.u));
  const Vector shifted = state.u - state.x + state.lambda / state.rho;
  return g + inst.c.dot(state.x) + 0.5 * state.rho * shifted.squaredNorm() -
         state.lambda.squaredNorm() / (2.0 * state.rho);
}

double estimate_smoothness(const NnModel& model, const Vector& d,
                           const Vector& box_lo, const Vector& box_up,
                           int samples, std::uint64_t seed) {
  if (samples < 2) throw Error("estimate_smoothness: need at least 2 samples");
  const int p = model.input_dim();
  Rng rng(seed);
  const auto draw = [&] {
    Vector u(p);
    for (int i = 0; i < p; ++i) u(i) = rng.uniform(box_lo(i), box_up(i));
    return u;
  };

  std::vector<Vector> points;
  std::vector<Vector> grads;
  points.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    Vector u = draw();
    // Coincident pairs would divide by zero; redraw.
    for (int guard = 0; guard < 100; ++guard) {
      bool distinct = true;
      for (const Vector& prev : points) {
        if ((u - prev).norm() < 1e-12) {
          distinct = false;
          break;
        }
      }
      if (distinct) break;
      u = draw();
    }
    Tape tape;
    forward(model, u, &tape);
    points.push_back(u);
    grads.push_back(vjp(model, tape, d));
  }

  double lip = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      const double dist = (points[i] - points[j]).norm();
      if (dist < 1e-12) continue;
      lip = std::max(lip, (grads[i] - grads[j]).norm() / dist);
    }
  }
  return lip;
}

MeritTrace merit_trace(const DdTrace& trace) {
  MeritTrace out;
  out.values.reserve(trace.rows.size());
  for (const TraceRow& row : trace.rows) out.values.push_back(row.merit);
  return out;
}

SolveReport dd_solve(const ProblemInstance& inst, const DdConfig& config,
                     SubsolverKind kind, DdTrace* trace) {
  validate_or_throw(inst);
  const SubsolverKind routed = route_subsolver(inst, kind);
  const int p = inst.p();
  const auto start = std::chrono::steady_clock::now();

  SolveReport report;
  report.instance_name = inst.name;
  report.method = "dd";
  report.subsolver = routed == SubsolverKind::kPgd ? "pgd" : "barrier";
  report.rows = inst.m1() + inst.m2();

  DdState state;
  // Box center start; each subsolver pulls u into its own feasible set
  // (pgd projects, barrier runs phase-1) on the first u-step.
  state.u = 0.5 * (inst.lower + inst.upper);
  state.x = state.u;
  for (int i = 0; i < p; ++i) state.x(i) = std::round(state.x(i));
  state.x = state.x.cwiseMax(inst.lower).cwiseMin(inst.upper);
  state.lambda = Vector::Zero(p);
  state.rho = config.rho0;

  double mip_total = 0.0;
  double nn_total = 0.0;
  bool converged = false;
  bool timed_out = false;

  for (int k = 1; k <= config.max_outer; ++k) {
    state.k = k;

    const auto mip_start = std::chrono::steady_clock::now();
    const MilpModel sub = build_mip_subproblem(inst, state.u, state.lambda,
                                               state.rho);
    MilpResult mip = solve_milp(sub);
    if (mip.status == MilpStatus::kInfeasible) {
      throw InfeasibleError("dd_solve: MIP subproblem infeasible at iteration " +
                            std::to_string(k));
    }
    report.nodes += mip.nodes;
    state.x = mip.z;
    const double mip_time = seconds_since(mip_start);
    mip_total += mip_time;

    const auto nn_start = std::chrono::steady_clock::now();
    SubsolverRequest request;
    request.instance = &inst;
    request.x_k = state.x;
    request.lambda = state.lambda;
    request.rho = state.rho;
    request.u_start = state.u;
    request.inner_budget = config.inner_steps;
    request.eta = config.eta;
    SubsolverResult nn;
    try {
      // The original kind, not the routed one: kAuto keeps its fallback
      // from barrier to projected gradient inside run_subsolver.
      nn = run_subsolver(request, kind);
    } catch (const InfeasibleError& e) {
      throw InfeasibleError(std::string(e.what()) + " (iteration " +
                            std::to_string(k) + ")");
    }
    state.u = nn.u;
    const double nn_time = seconds_since(nn_start);
    nn_total += nn_time;

    const double r_inf = (state.u - state.x).cwiseAbs().maxCoeff();
    const double r_2 = (state.u - state.x).norm();

    state = dual_update(std::move(state), config);
    const double merit_value = merit(state, inst);
    state.history.push_back({k, r_2, merit_value, state.rho});
    if (trace != nullptr) {
      trace->rows.push_back({k, r_inf, r_2, merit_value, state.rho, mip_time,
                             nn_time, nn.inner_converged, nn.violation});
    }
    report.iterations = k;

    if (r_inf < config.epsilon) {
      converged = true;
      break;
    }
    if (config.adapt_rho_enabled) {
      state.rho = adapt_rho(state, config);
    }
    if (seconds_since(start) > config.time_budget_s) {
      timed_out = true;
      break;
    }
  }

  if (config.max_outer == 0) {
    // Zero-iteration contract: report the rounded starting point.
    state.x = state.u;
    for (int i = 0; i < p; ++i) state.x(i) = std::round(state.x(i));
    state.x = state.x.cwiseMax(inst.lower).cwiseMin(inst.upper);
  }

  report.converged = converged;
  report.status = converged ? "converged"
                            : (timed_out ? "timeout" : "iteration_cap");
  report.x_final = state.x;
  report.u_final = state.u;
  report.objective = objective_value(inst, state.x);
  report.primal_residual =
      (state.u - state.x).cwiseAbs().maxCoeff();
  report.mip_feasibility = mip_violation(inst, state.x);
  report.nn_feasibility = nn_violation(inst, state.x);
  report.phase_times["mip"] = mip_total;
  report.phase_times["nn"] = nn_total;
  report.phase_times["total"] = seconds_since(start);
  return report;
}

}  // namespace nnmip
