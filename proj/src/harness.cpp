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

#include "nnmip/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "nnmip/bigm.hpp"
#include "nnmip/bnb.hpp"
#include "nnmip/nn_engine.hpp"
#include "nnmip/report.hpp"

namespace nnmip {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// Runs body(i) for i in [0, count) on up to jobs threads. Results must be
// written to pre-sized slots; assembly stays deterministic.
void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

double median(std::vector<double> v) {
  if (v.empty()) throw Error("median of empty sample");
  std::sort(v.begin(), v.end());
  const size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Display objective in the instance's declared sense.
double display_objective(const ProblemInstance& inst, double min_form) {
  return inst.sense == "max" ? -min_form : min_form;
}

// Random rectifier network with one hidden layer and q outputs. Weights
// are scaled so layer outputs stay O(1) over the unit-ish box.
NnModel random_relu_net(int in_dim, int hidden, int out_dim, Rng* rng) {
  NnModel net;
  Layer l1, l2;
  l1.activation = Activation::kRelu;
  l1.w = Matrix::Zero(hidden, in_dim);
  l1.b = Vector::Zero(hidden);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (int r = 0; r < hidden; ++r) {
    for (int c = 0; c < in_dim; ++c) l1.w(r, c) = s1 * rng->normal();
    l1.b(r) = 0.2 * rng->normal();
  }
  l2.activation = Activation::kIdentity;
  l2.w = Matrix::Zero(out_dim, hidden);
  l2.b = Vector::Zero(out_dim);
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (int r = 0; r < out_dim; ++r) {
    for (int c = 0; c < hidden; ++c) l2.w(r, c) = s2 * rng->normal();
    l2.b(r) = 0.2 * rng->normal();
  }
  net.layers = {std::move(l1), std::move(l2)};
  return net;
}

// Empirical bound on |grad g| over the box, for scaling d safely.
double grad_scale_bound(const NnModel& net, const Vector& d, const Vector& lo,
                        const Vector& up, Rng* rng) {
  double bound = 0.0;
  for (int s = 0; s < 32; ++s) {
    Vector u(lo.size());
    for (int i = 0; i < lo.size(); ++i) u(i) = rng->uniform(lo(i), up(i));
    Tape tape;
    forward(net, u, &tape);
    bound = std::max(bound, vjp(net, tape, d).cwiseAbs().maxCoeff());
  }
  return bound;
}

}  // namespace

SolveReport solve_bigm(const ProblemInstance& instance, double gap_tol,
                       long node_limit) {
  validate_or_throw(instance);
  const auto start = std::chrono::steady_clock::now();
  const MilpModel milp = encode_instance(instance);
  const EncodingStats stats = encoding_stats(instance);
  const MilpResult res = solve_milp(milp, gap_tol, node_limit);
  if (res.status == MilpStatus::kInfeasible) {
    throw InfeasibleError("bigm: compiled model is infeasible");
  }

  SolveReport report;
  report.method = "bigm";
  report.instance_name = instance.name;
  report.binaries = stats.num_binaries;
  report.rows = stats.num_rows;
  report.nodes = res.nodes;
  report.iterations = res.nodes;
  report.converged = res.status == MilpStatus::kOptimal;
  report.status = report.converged ? "optimal" : "node_limit";
  const int p = instance.p();
  report.x_final = res.z.head(p);
  for (int i = 0; i < p; ++i) {
    report.x_final(i) = std::round(report.x_final(i));
  }
  report.x_final =
      report.x_final.cwiseMax(instance.lower).cwiseMin(instance.upper);
  report.u_final = report.x_final;
  report.objective = objective_value(instance, report.x_final);
  report.primal_residual = 0.0;
  report.mip_feasibility = mip_violation(instance, report.x_final);
  report.nn_feasibility = nn_violation(instance, report.x_final);
  const double total = seconds_since(start);
  report.phase_times["total"] = total;
  report.phase_times["mip"] = total;
  report.phase_times["nn"] = 0.0;
  return report;
}

std::vector<std::uint64_t> default_seeds() {
  return {42, 123, 456, 789, 1024};
}

// ---------------------------------------------------------------------------
// Families.

ProblemInstance exactness_instance(int index, std::uint64_t seed) {
  const std::uint64_t mixed = seed * 1000003ULL + static_cast<std::uint64_t>(index);
  switch (index % 5) {
    case 0:
    case 1: {
      SmoothParams sp;
      sp.p = 2 + index % 3;
      sp.seed = mixed;
      sp.rho_hint = 10.0;
      return gen_smooth_surrogate(sp);
    }
    case 2: {
      // Steep linear cost, mild rectifier term: the cost fixes the vertex,
      // the network term cannot flip any coordinate.
      Rng rng(mixed);
      const int p = 2 + index % 2;
      ProblemInstance inst;
      inst.name = "steepc_p" + std::to_string(p) + "_s" +
                  std::to_string(mixed);
      inst.c = Vector::Zero(p);
      for (int i = 0; i < p; ++i) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        inst.c(i) = sign * rng.uniform(3.0, 6.0);
      }
      inst.lower = Vector::Constant(p, 0.0);
      inst.upper = Vector::Constant(p, 3.0);
      inst.integrality.assign(p, true);
      inst.a_mip = Matrix::Zero(0, p);
      inst.b_mip = Vector::Zero(0);
      inst.a_nn = Matrix::Zero(0, p + 1);
      inst.b_nn = Vector::Zero(0);
      inst.network = random_relu_net(p, 4, 1, &rng);
      Vector d = Vector::Ones(1);
      const double bound =
          grad_scale_bound(inst.network, d, inst.lower, inst.upper, &rng);
      // Keep the network slope under a fifth of the smallest cost entry.
      const double cap = 0.2 * inst.c.cwiseAbs().minCoeff();
      inst.d = d * (bound > 1e-12 ? cap / bound : 1.0);
      validate_or_throw(inst);
      return inst;
    }
    case 3: {
      // Dense affine surrogate: same vertex law as the smooth family but
      // with off-diagonal mixing in the network.
      Rng rng(mixed);
      const int p = 2 + index % 3;
      const double width = 3.0;
      Matrix w = Matrix::Identity(p, p);
      for (int r = 0; r < p; ++r) {
        for (int c2 = 0; c2 < p; ++c2) {
          if (r != c2) w(r, c2) = 0.15 * rng.uniform(-1.0, 1.0);
        }
      }
      Vector g(p), c(p), bias(p);
      for (int i = 0; i < p; ++i) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        g(i) = sign * 10.0 * width * (4.0 + rng.uniform());
        c(i) = rng.uniform(-3.0, 3.0);
        bias(i) = rng.uniform(-0.5, 0.5);
      }
      // d solves W^T d = g so the composite gradient is exactly g.
      const Vector d = w.transpose().colPivHouseholderQr().solve(g);
      ProblemInstance inst;
      inst.name = "affine_p" + std::to_string(p) + "_s" +
                  std::to_string(mixed);
      inst.c = c;
      inst.d = d;
      inst.lower = Vector::Constant(p, 0.0);
      inst.upper = Vector::Constant(p, width);
      inst.integrality.assign(p, true);
      inst.a_mip = Matrix::Zero(0, p);
      inst.b_mip = Vector::Zero(0);
      inst.a_nn = Matrix::Zero(0, 2 * p);
      inst.b_nn = Vector::Zero(0);
      inst.network.layers.push_back({w, bias, Activation::kIdentity});
      validate_or_throw(inst);
      return inst;
    }
    default: {
      WaterParams wp;
      wp.n = 1;
      wp.feature_dim = 1;
      wp.grid_step = 0.5;
      wp.adjust_max = 2.0;
      wp.budgets_up = {1.5};
      wp.budgets_down = {1.5};
      wp.arch = {4};
      wp.seed = mixed;
      return gen_water_potability(wp);
    }
  }
}

DdConfig exactness_config() {
  DdConfig config;
  config.rho0 = 1.0;
  config.eta = 0.5;
  config.inner_steps = 40;
  config.max_outer = 60;
  return config;
}

ProblemInstance uonly_instance(int index, std::uint64_t seed) {
  const std::uint64_t mixed =
      seed * 2000003ULL + static_cast<std::uint64_t>(index);
  Rng rng(mixed);
  const int p = 2 + index % 3;
  ProblemInstance inst;
  inst.name = "uonly_p" + std::to_string(p) + "_s" + std::to_string(mixed);
  inst.c = Vector::Zero(p);
  for (int i = 0; i < p; ++i) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    inst.c(i) = sign * rng.uniform(3.0, 6.0);
  }
  inst.lower = Vector::Constant(p, 0.0);
  inst.upper = Vector::Constant(p, 3.0);
  inst.integrality.assign(p, true);
  inst.a_mip = Matrix::Zero(0, p);
  inst.b_mip = Vector::Zero(0);
  inst.network = random_relu_net(p, 4, 1, &rng);
  Vector d = Vector::Ones(1);
  const double bound =
      grad_scale_bound(inst.network, d, inst.lower, inst.upper, &rng);
  const double cap = 0.2 * inst.c.cwiseAbs().minCoeff();
  inst.d = d * (bound > 1e-12 ? cap / bound : 1.0);
  // One input-only row cutting off the cost vertex: the sum of the
  // coordinates pulled toward their upper bound is capped one unit short.
  Vector row = Vector::Zero(p);
  double cap_rhs = 0.0;
  int pulled = 0;
  for (int i = 0; i < p; ++i) {
    if (inst.c(i) < 0.0) {
      row(i) = 1.0;
      cap_rhs += inst.upper(i);
      ++pulled;
    }
  }
  if (pulled == 0) {
    // All coordinates head to the lower bound; cap their total from below
    // instead so the row still binds at the optimum.
    for (int i = 0; i < p; ++i) row(i) = -1.0;
    cap_rhs = -1.0;  // sum x >= 1
  } else {
    cap_rhs -= 1.0;
  }
  inst.a_nn = Matrix::Zero(1, p + 1);
  inst.a_nn.row(0).head(p) = row.transpose();
  inst.b_nn = Vector::Constant(1, cap_rhs);
  validate_or_throw(inst);
  return inst;
}

DdConfig uonly_config() {
  DdConfig config;
  config.rho0 = 1.0;
  config.eta = 0.5;
  config.inner_steps = 40;
  config.max_outer = 80;
  return config;
}

ProblemInstance ablation_instance(int index, std::uint64_t seed) {
  // Alternate between unconstrained exactness classes and row-constrained
  // instances; the latter is where plain descent plus rounding struggles.
  if (index % 2 == 0) return exactness_instance(index / 2, seed);
  return uonly_instance(index / 2, seed);
}

ProblemInstance scaling_instance(long target_params, std::uint64_t seed) {
  if (target_params < 100) {
    throw Error("scaling_instance: target_params too small");
  }
  const int p = 6;
  // One hidden layer of width w has w*(p+1) + (w+1) parameters.
  const int hidden = static_cast<int>(
      std::max<long>(1, (target_params - 1) / (p + 2)));
  Rng rng(seed * 3000017ULL + static_cast<std::uint64_t>(target_params));
  ProblemInstance inst;
  inst.name = "scale_P" + std::to_string(target_params) + "_s" +
              std::to_string(seed);
  inst.c = Vector::Zero(p);
  for (int i = 0; i < p; ++i) inst.c(i) = rng.uniform(-1.0, 1.0);
  inst.lower = Vector::Constant(p, 0.0);
  inst.upper = Vector::Constant(p, 3.0);
  inst.integrality.assign(p, true);
  // A fixed-size linear block keeps the discrete subproblem identical
  // across the parameter sweep.
  const int m1 = 8;
  inst.a_mip = Matrix::Zero(m1, p);
  inst.b_mip = Vector::Zero(m1);
  Rng row_rng(seed ^ 0x5bd1e995u);  // same rows for every target_params
  for (int r = 0; r < m1; ++r) {
    for (int i = 0; i < p; ++i) inst.a_mip(r, i) = row_rng.uniform(0.0, 1.0);
    inst.b_mip(r) = row_rng.uniform(1.0, 2.0) * inst.upper.sum();
  }
  inst.network = random_relu_net(p, hidden, 1, &rng);
  inst.d = Vector::Constant(1, 0.5);
  inst.a_nn = Matrix::Zero(0, p + 1);
  inst.b_nn = Vector::Zero(0);
  validate_or_throw(inst);
  return inst;
}

// ---------------------------------------------------------------------------
// Experiments.

std::string run_e1(const E1Params& params) {
  const auto seeds = params.seeds.empty() ? default_seeds() : params.seeds;
  if (seeds.empty()) throw Error("e1: seed list is empty");
  struct Cell {
    int n;
    std::uint64_t seed;
    std::string row;
  };
  std::vector<Cell> cells;
  for (const int n : params.sizes) {
    for (const auto seed : seeds) cells.push_back({n, seed, ""});
  }
  parallel_for(static_cast<int>(cells.size()), params.jobs, [&](int i) {
    Cell& cell = cells[i];
    WaterParams wp;
    wp.n = cell.n;
    wp.feature_dim = 2;
    wp.grid_step = 0.5;
    wp.arch = {4};
    wp.budgets_up.assign(2, 2.0);
    wp.budgets_down.assign(2, 2.0);
    wp.seed = cell.seed;
    const ProblemInstance inst = gen_water_potability(wp);

    DdConfig config = exactness_config();
    const SolveReport dd = dd_solve(inst, config);
    const SolveReport exact = solve_bigm(inst);
    const double dd_obj = display_objective(inst, dd.objective);
    const double exact_obj = display_objective(inst, exact.objective);
    double ratio;
    if (std::abs(exact_obj) > 1e-9) {
      ratio = dd_obj / exact_obj;
    } else {
      ratio = std::abs(dd_obj - exact_obj) <= 1e-9 ? 1.0 : kInf;
    }
    const double dd_t = dd.phase_times.at("total");
    const double ex_t = exact.phase_times.at("total");
    cell.row = inst.name + ',' + std::to_string(cell.n) + ',' +
               std::to_string(cell.seed) + ',' + format_double(dd_obj) + ',' +
               format_double(exact_obj) + ',' + format_double(ratio) + ',' +
               format_double(dd_t) + ',' + format_double(ex_t) + ',' +
               format_double(ex_t > 0.0 ? dd_t / ex_t : 0.0) + ',' +
               (dd.converged ? "1" : "0");
  });
  std::string csv =
      "instance,n,seed,dd_objective,bigm_objective,objective_ratio,"
      "dd_time_s,bigm_time_s,time_ratio,dd_converged\n";
  for (const Cell& cell : cells) csv += cell.row + "\n";
  return csv;
}

std::string run_e2(const E2Params& params) {
  const auto seeds = params.seeds.empty() ? default_seeds() : params.seeds;
  if (seeds.empty()) throw Error("e2: seed list is empty");
  if (params.param_counts.empty()) throw Error("e2: no parameter counts");
  struct Cell {
    long target;
    std::uint64_t seed;
    double nn_per_iter = 0.0;
    double mip_per_iter = 0.0;
    std::string row;
  };
  std::vector<Cell> cells;
  for (const long target : params.param_counts) {
    for (const auto seed : seeds) cells.push_back({target, seed, 0, 0, ""});
  }
  parallel_for(static_cast<int>(cells.size()), params.jobs, [&](int i) {
    Cell& cell = cells[i];
    const ProblemInstance inst = scaling_instance(cell.target, cell.seed);
    DdConfig config;
    config.rho0 = 5.0;
    config.eta = 0.05;
    config.inner_steps = 25;
    config.max_outer = params.outer_iters;
    config.epsilon = 0.0;  // run all iterations; this sweep measures time
    config.adapt_rho_enabled = false;
    std::vector<double> nn_samples, mip_samples;
    for (int r = 0; r < params.repeats; ++r) {
      const SolveReport rep =
          dd_solve(inst, config, SubsolverKind::kBarrier);
      nn_samples.push_back(rep.phase_times.at("nn") / rep.iterations);
      mip_samples.push_back(rep.phase_times.at("mip") / rep.iterations);
    }
    cell.nn_per_iter = median(nn_samples);
    cell.mip_per_iter = median(mip_samples);
    const long param_count = inst.network.param_count();
    cell.row = inst.name + ',' + std::to_string(cell.target) + ',' +
               std::to_string(param_count) + ',' + std::to_string(cell.seed) +
               ',' + format_double(cell.nn_per_iter) + ',' +
               format_double(cell.mip_per_iter);
  });
  // Median across seeds per target, then a single fitted slope.
  std::vector<double> xs, ys;
  std::vector<double> mip_medians;
  for (const long target : params.param_counts) {
    std::vector<double> nn_sample, mip_sample;
    for (const Cell& cell : cells) {
      if (cell.target == target) {
        nn_sample.push_back(cell.nn_per_iter);
        mip_sample.push_back(cell.mip_per_iter);
      }
    }
    xs.push_back(static_cast<double>(target));
    ys.push_back(median(nn_sample));
    mip_medians.push_back(median(mip_sample));
  }
  const double slope = loglog_slope(xs, ys);
  const double mip_lo =
      *std::min_element(mip_medians.begin(), mip_medians.end());
  const double mip_hi =
      *std::max_element(mip_medians.begin(), mip_medians.end());
  const double spread = mip_lo > 0.0 ? (mip_hi - mip_lo) / mip_lo : kInf;

  std::string csv =
      "instance,target_params,param_count,seed,nn_per_iter_s,mip_per_iter_s\n";
  for (const Cell& cell : cells) csv += cell.row + "\n";
  csv += "slope," + format_double(slope) + ",,,,\n";
  csv += "mip_spread," + format_double(spread) + ",,,,\n";
  return csv;
}

std::string run_e3(const E3Params& params) {
  const auto seeds = params.seeds.empty() ? default_seeds() : params.seeds;
  if (seeds.empty()) throw Error("e3: seed list is empty");
  struct Cell {
    int index;
    std::string row;
  };
  std::vector<Cell> cells;
  for (int i = 0; i < params.count; ++i) cells.push_back({i, ""});
  parallel_for(static_cast<int>(cells.size()), params.jobs, [&](int i) {
    Cell& cell = cells[i];
    const std::uint64_t seed = seeds[cell.index % seeds.size()];
    const ProblemInstance inst = ablation_instance(cell.index, seed);
    const SolveReport dd = dd_solve(inst, exactness_config());
    SsgConfig sc;
    sc.seed = seed;
    const SolveReport ssg = ssg_solve(inst, sc);
    cell.row = inst.name + ',' + std::to_string(seed) + ',' +
               format_double(dd.objective) + ',' + (dd.converged ? "1" : "0") +
               ',' + std::to_string(dd.iterations) + ',' +
               format_double(ssg.objective) + ',' +
               (ssg.converged ? "1" : "0") + ',' +
               std::to_string(ssg.iterations);
  });
  std::string csv =
      "instance,seed,dd_objective,dd_converged,dd_iterations,ssg_objective,"
      "ssg_found,ssg_iterations\n";
  for (const Cell& cell : cells) csv += cell.row + "\n";
  return csv;
}

std::string run_e5(const E5Params& params) {
  const auto seeds = params.seeds.empty() ? default_seeds() : params.seeds;
  if (seeds.empty()) throw Error("e5: seed list is empty");
  struct Cell {
    int index;
    std::string row;
  };
  std::vector<Cell> cells;
  for (int i = 0; i < params.count; ++i) cells.push_back({i, ""});
  parallel_for(static_cast<int>(cells.size()), params.jobs, [&](int i) {
    Cell& cell = cells[i];
    const std::uint64_t seed = seeds[cell.index % seeds.size()];
    const ProblemInstance inst = uonly_instance(cell.index, seed);
    const DdConfig config = uonly_config();
    const SolveReport pgd = dd_solve(inst, config, SubsolverKind::kPgd);
    const SolveReport barrier = dd_solve(inst, config, SubsolverKind::kBarrier);
    cell.row = inst.name + ',' + std::to_string(seed) + ',' +
               format_double(pgd.objective) + ',' +
               format_double(barrier.objective) + ',' +
               format_double(pgd.phase_times.at("total")) + ',' +
               format_double(barrier.phase_times.at("total")) + ',' +
               (pgd.converged ? "1" : "0") + ',' +
               (barrier.converged ? "1" : "0");
  });
  std::string csv =
      "instance,seed,pgd_objective,barrier_objective,pgd_time_s,"
      "barrier_time_s,pgd_converged,barrier_converged\n";
  for (const Cell& cell : cells) csv += cell.row + "\n";
  return csv;
}

std::string e4_notice() {
  return "e4 (architecture adaptability) is not implemented: this artifact "
         "covers dense rectifier networks only; the name is reserved so "
         "experiment numbering matches the study design.";
}

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error("loglog_slope: need at least two matched points");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) {
      throw Error("loglog_slope: data must be positive");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw Error("loglog_slope: degenerate x data");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace nnmip
