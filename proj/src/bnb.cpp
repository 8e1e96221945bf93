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

#include "nnmip/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "nnmip/relaxation.hpp"

namespace nnmip {

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
  Vector lower;
  Vector upper;
  double bound = -kInf;
  long seq = 0;
  int depth = 0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;  // FIFO among equal bounds
  }
};

// Lagrangian bound from the a-row duals: the box part is minimized in
// closed form per coordinate, so any y >= 0 yields a valid lower bound.
double dual_bound(const MilpModel& model, const Node& node, const Vector& y) {
  Vector w = model.lin;
  if (model.m() > 0) w += model.a.transpose() * y;
  double bound = model.constant - (model.m() > 0 ? y.dot(model.b) : 0.0);
  for (int i = 0; i < model.n(); ++i) {
    const double q = model.q_diag(i);
    const double lo = node.lower(i);
    const double up = node.upper(i);
    double zi;
    if (q > 0.0) {
      zi = std::min(std::max(-w(i) / q, lo), up);
    } else if (w(i) > 0.0) {
      zi = lo;
    } else if (w(i) < 0.0) {
      zi = up;
    } else {
      zi = std::isfinite(lo) ? lo : (std::isfinite(up) ? up : 0.0);
    }
    if (!std::isfinite(zi)) return -kInf;
    bound += 0.5 * q * zi * zi + w(i) * zi;
  }
  return bound;
}

// Completes a node whose integer slots are (nearly) integral: fixes them
// to the rounded values, re-optimizes the continuous rest, and reports
// the exact objective. Returns false when the fixing is infeasible.
bool fix_and_resolve(const MilpModel& model, const Node& node, const Vector& z,
                     Vector* z_out, double* value_out) {
  MilpModel fixed = model;
  fixed.lower = node.lower;
  fixed.upper = node.upper;
  bool any_continuous = false;
  for (int i = 0; i < model.n(); ++i) {
    if (model.integer[i]) {
      const double r = std::round(z(i));
      fixed.lower(i) = r;
      fixed.upper(i) = r;
    } else {
      any_continuous = true;
    }
  }
  Vector candidate;
  if (any_continuous) {
    RelaxResult relax;
    try {
      relax = solve_relaxation(fixed);
    } catch (const Error&) {
      return false;
    }
    if (relax.status != RelaxStatus::kOptimal) return false;
    candidate = relax.z;
    for (int i = 0; i < model.n(); ++i) {
      if (model.integer[i]) candidate(i) = fixed.lower(i);
    }
  } else {
    candidate = fixed.lower;
  }
  if (row_violation(model, candidate) > 1e-7) return false;
  *z_out = candidate;
  *value_out = evaluate(model, candidate);
  return true;
}

}  // namespace

MilpResult solve_milp(const MilpModel& model, double gap_tol, long node_limit) {
  const int n = model.n();
  if (n == 0) throw Error("solve_milp: empty model");
  if (static_cast<int>(model.integer.size()) != n) {
    throw Error("solve_milp: integer flags must cover every variable");
  }
  for (int i = 0; i < n; ++i) {
    if (model.integer[i] &&
        !(std::isfinite(model.lower(i)) && std::isfinite(model.upper(i)))) {
      throw Error("solve_milp: integer variable " + std::to_string(i) +
                  " must be bounded");
    }
  }

  MilpResult result;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  long seq = 0;

  Node root;
  // Integer boxes are tightened to their integral hull up front.
  root.lower = model.lower;
  root.upper = model.upper;
  for (int i = 0; i < n; ++i) {
    if (model.integer[i]) {
      root.lower(i) = std::ceil(root.lower(i) - kIntTol);
      root.upper(i) = std::floor(root.upper(i) + kIntTol);
      if (root.lower(i) > root.upper(i)) return result;  // empty integer box
    }
  }
  root.seq = seq++;
  queue.push(root);

  bool have_incumbent = false;
  bool proof_intact = true;  // false once a node is dropped unevaluated
  Vector best_z;
  double best_value = kInf;
  double proven_bound = -kInf;

  const auto record = [&] {
    result.incumbent_history.push_back(best_value);
    result.bound_history.push_back(proven_bound);
  };

  while (!queue.empty()) {
    Node node = queue.top();
    // Best-first: the top bound is the global one over all open nodes.
    proven_bound = std::max(proven_bound, node.bound);
    if (have_incumbent && node.bound >= best_value - gap_tol) {
      proven_bound = std::max(proven_bound, best_value - gap_tol);
      break;
    }
    queue.pop();

    if (result.nodes >= node_limit) {
      result.status = MilpStatus::kNodeLimit;
      result.z = best_z;
      result.value = best_value;
      result.bound = proven_bound;
      return result;
    }
    ++result.nodes;

    MilpModel relaxed = model;
    relaxed.lower = node.lower;
    relaxed.upper = node.upper;
    RelaxResult relax;
    bool have_relax = true;
    try {
      relax = solve_relaxation(relaxed);
    } catch (const InfeasibleError&) {
      record();
      continue;
    } catch (const Error&) {
      // Relaxation engine gave up on this node; the closed-form bound
      // below stays valid and branching needs no relaxation point.
      have_relax = false;
    }
    if (have_relax && relax.status == RelaxStatus::kInfeasible) {
      record();
      continue;
    }

    double node_bound = node.bound;
    if (!have_relax) {
      node_bound = std::max(node_bound,
                            dual_bound(model, node, Vector::Zero(model.m())));
    } else if (model.m() == 0) {
      node_bound = std::max(node_bound, relax.value);  // exact closed form
    } else {
      node_bound = std::max(node_bound, dual_bound(model, node, relax.row_duals));
    }
    if (have_incumbent && node_bound >= best_value - gap_tol) {
      record();
      continue;
    }

    if (!have_relax) {
      // Split the widest free integer range; a node with every integer
      // pinned cannot be completed without a relaxation, so dropping it
      // forfeits the optimality proof.
      int split = -1;
      double width = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!model.integer[i]) continue;
        const double w = node.upper(i) - node.lower(i);
        if (w > width) {
          width = w;
          split = i;
        }
      }
      if (split < 0) {
        Vector candidate;
        double candidate_value;
        if (fix_and_resolve(model, node, node.lower, &candidate,
                            &candidate_value)) {
          if (candidate_value < best_value) {
            best_value = candidate_value;
            best_z = candidate;
            have_incumbent = true;
          }
        } else {
          proof_intact = false;
        }
        record();
        continue;
      }
      const double mid =
          std::floor(0.5 * (node.lower(split) + node.upper(split)));
      Node left = node;
      left.upper(split) = mid;
      left.bound = node_bound;
      left.seq = seq++;
      left.depth = node.depth + 1;
      Node right = node;
      right.lower(split) = mid + 1.0;
      right.bound = node_bound;
      right.seq = seq++;
      right.depth = node.depth + 1;
      queue.push(std::move(left));
      queue.push(std::move(right));
      record();
      continue;
    }

    // Branching variable: most fractional, ties to the lowest index.
    int branch_var = -1;
    double branch_score = kIntTol;
    for (int i = 0; i < n; ++i) {
      if (!model.integer[i]) continue;
      const double frac = relax.z(i) - std::floor(relax.z(i));
      const double dist = std::min(frac, 1.0 - frac);
      if (dist > branch_score) {
        branch_score = dist;
        branch_var = i;
      }
    }

    if (branch_var < 0) {
      // Integral relaxation: complete it exactly.
      Vector candidate;
      double candidate_value;
      if (fix_and_resolve(model, node, relax.z, &candidate, &candidate_value)) {
        if (candidate_value < best_value) {
          best_value = candidate_value;
          best_z = candidate;
          have_incumbent = true;
        }
        if (candidate_value <= node_bound + gap_tol) {
          record();
          continue;  // node fully fathomed
        }
      }
      // The rounded completion did not close the node; split on any
      // still-free integer slot, or exhaust the (singleton) node.
      int split = -1;
      for (int i = 0; i < n; ++i) {
        if (model.integer[i] && node.lower(i) < node.upper(i)) {
          split = i;
          break;
        }
      }
      if (split < 0) {
        record();
        continue;
      }
      const double mid =
          std::floor(0.5 * (node.lower(split) + node.upper(split)));
      Node left = node;
      left.upper(split) = mid;
      left.bound = node_bound;
      left.seq = seq++;
      left.depth = node.depth + 1;
      Node right = node;
      right.lower(split) = mid + 1.0;
      right.bound = node_bound;
      right.seq = seq++;
      right.depth = node.depth + 1;
      queue.push(std::move(left));
      queue.push(std::move(right));
      record();
      continue;
    }

    double split_point = std::floor(relax.z(branch_var));
    split_point = std::min(split_point, node.upper(branch_var) - 1.0);
    split_point = std::max(split_point, node.lower(branch_var));
    Node left = node;
    left.upper(branch_var) = split_point;
    left.bound = node_bound;
    left.seq = seq++;
    left.depth = node.depth + 1;
    Node right = node;
    right.lower(branch_var) = split_point + 1.0;
    right.bound = node_bound;
    right.seq = seq++;
    right.depth = node.depth + 1;
    queue.push(std::move(left));
    queue.push(std::move(right));
    record();
  }

  if (!have_incumbent) {
    result.status = proof_intact ? MilpStatus::kInfeasible : MilpStatus::kNodeLimit;
    return result;
  }
  result.status = proof_intact ? MilpStatus::kOptimal : MilpStatus::kNodeLimit;
  result.z = best_z;
  result.value = best_value;
  result.bound = queue.empty() && proof_intact ? best_value : proven_bound;
  return result;
}

MilpModel build_mip_subproblem(const ProblemInstance& inst, const Vector& u_prev,
                               const Vector& lambda, double rho) {
  if (rho <= 0.0) throw Error("build_mip_subproblem: rho must be positive");
  const int p = inst.p();
  if (u_prev.size() != p || lambda.size() != p) {
    throw Error("build_mip_subproblem: dimension mismatch");
  }
  MilpModel model;
  // (c - lambda).x + rho/2 |u - x|^2 expands to a diagonal quadratic with
  // linear term c - lambda - rho*u; the constant rho/2 |u|^2 is dropped.
  model.q_diag = Vector::Constant(p, rho);
  model.lin = inst.c - lambda - rho * u_prev;
  model.a = inst.a_mip;
  model.b = inst.b_mip;
  model.lower = inst.lower;
  model.upper = inst.upper;
  model.integer.assign(inst.integrality.begin(), inst.integrality.end());
  model.constant = 0.0;
  return model;
}

}  // namespace nnmip
