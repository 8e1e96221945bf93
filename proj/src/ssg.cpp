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

#include "nnmip/ssg.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "nnmip/nn_engine.hpp"

namespace nnmip {

namespace {

// round() then clamp; fractional box edges can push a rounded coordinate out.
Vector round_into_box(const ProblemInstance& inst, const Vector& x) {
  Vector r(x.size());
  for (int i = 0; i < x.size(); ++i) r(i) = std::round(x(i));
  return r.cwiseMax(inst.lower).cwiseMin(inst.upper);
}

}  // namespace

double ssg_step_size(const SsgConfig& config, int t) {
  return config.eta0 / std::sqrt(1.0 + config.eta_decay * t);
}

SolveReport ssg_solve(const ProblemInstance& instance,
                      const SsgConfig& config) {
  if (config.max_steps < 1) throw Error("ssg_solve: max_steps must be >= 1");
  if (config.mu_lin < 0.0 || config.mu_nn < 0.0) {
    throw Error("ssg_solve: penalty weights must be nonnegative");
  }
  const auto t_start = std::chrono::steady_clock::now();

  const int p = instance.p();
  const int q = instance.q();
  const int m1 = instance.m1();
  const int m2 = instance.m2();

  // Start at the box center plus seeded jitter of amplitude 0.1 * width.
  Rng rng(config.seed);
  Vector x = 0.5 * (instance.lower + instance.upper);
  for (int i = 0; i < p; ++i) {
    const double width = instance.upper(i) - instance.lower(i);
    x(i) += 0.1 * width * rng.uniform(-1.0, 1.0);
  }
  x = x.cwiseMax(instance.lower).cwiseMin(instance.upper);

  bool have_incumbent = false;
  Vector incumbent;
  double best_lin = kInf;  // scored on c.x alone, matching the update rule
  int discarded = 0;

  for (int t = 1; t <= config.max_steps; ++t) {
    // Penalties and gradient at the current point x^{t-1}.
    Tape tape;
    Vector fx;
    if (q > 0) fx = forward(instance.network, x, &tape);

    Vector p_lin = Vector::Zero(m1);
    if (m1 > 0) p_lin = (instance.a_mip * x - instance.b_mip).cwiseMax(0.0);
    Vector p_nn = Vector::Zero(m2);
    if (m2 > 0) {
      Vector xy(p + q);
      xy.head(p) = x;
      if (q > 0) xy.tail(q) = fx;
      p_nn = (instance.a_nn * xy - instance.b_nn).cwiseMax(0.0);
    }
    const bool feasible_here = (m1 == 0 || p_lin.maxCoeff() == 0.0) &&
                               (m2 == 0 || p_nn.maxCoeff() == 0.0);

    Vector grad = instance.c;
    // Everything flowing through the network shares one backward pass:
    // d (objective) plus 2 * mu_nn * a_nn_f^T p_nn (hinge rows).
    Vector cotangent = Vector::Zero(q);
    if (q > 0) cotangent = instance.d;
    if (m1 > 0) {
      grad += 2.0 * config.mu_lin * instance.a_mip.transpose() * p_lin;
    }
    if (m2 > 0) {
      grad += 2.0 * config.mu_nn *
              instance.a_nn.leftCols(p).transpose() * p_nn;
      if (q > 0) {
        cotangent +=
            2.0 * config.mu_nn * instance.a_nn.rightCols(q).transpose() * p_nn;
      }
    }
    if (q > 0) grad += vjp(instance.network, tape, cotangent);

    x = (x - ssg_step_size(config, t) * grad)
            .cwiseMax(instance.lower)
            .cwiseMin(instance.upper);

    // Incumbent rule: feasibility was measured before the step, the score
    // and the rounding use the point after it.
    if (feasible_here) {
      const double lin_cost = instance.c.dot(x);
      if (lin_cost < best_lin) {
        const Vector cand = round_into_box(instance, x);
        if (mip_violation(instance, cand) <= config.feas_tol &&
            nn_violation(instance, cand) <= config.feas_tol) {
          best_lin = lin_cost;
          incumbent = cand;
          have_incumbent = true;
        } else {
          ++discarded;
        }
      }
    }
  }

  SolveReport report;
  report.method = "ssg";
  report.instance_name = instance.name;
  report.seed = static_cast<long>(config.seed);
  report.iterations = config.max_steps;
  report.u_final = x;
  report.converged = have_incumbent;
  report.x_final = have_incumbent ? incumbent : round_into_box(instance, x);
  report.objective = objective_value(instance, report.x_final);
  report.primal_residual = (report.u_final - report.x_final)
                               .cwiseAbs()
                               .maxCoeff();
  report.mip_feasibility = mip_violation(instance, report.x_final);
  report.nn_feasibility = nn_violation(instance, report.x_final);
  if (!have_incumbent) report.status = "no_incumbent";
  if (discarded > 0) {
    report.notes = "discarded_incumbents=" + std::to_string(discarded);
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  report.phase_times["total"] = total;
  report.phase_times["nn"] = total;
  report.phase_times["mip"] = 0.0;
  return report;
}

}  // namespace nnmip
