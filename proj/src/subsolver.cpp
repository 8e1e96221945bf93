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

#include "nnmip/subsolver.hpp"

#include <algorithm>
#include <cmath>

#include "nnmip/nn_engine.hpp"
#include "nnmip/relaxation.hpp"

namespace nnmip {

namespace {

// Tangent push-forward matching vjp's subgradient convention.
Vector jvp(const NnModel& model, const Tape& tape, const Vector& v) {
  Vector t = v;
  for (size_t l = 0; l < model.layers.size(); ++l) {
    const Layer& layer = model.layers[l];
    t = layer.w * t;
    if (layer.activation == Activation::kRelu) {
      t = (tape.pre[l].array() > 0.0).select(t, 0.0);
    }
  }
  return t;
}

double nn_rows_violation(const ProblemInstance& inst, const Vector& u,
                         const Vector& fu) {
  if (inst.m2() == 0) return 0.0;
  Vector xy(inst.p() + inst.q());
  xy.head(inst.p()) = u;
  xy.tail(inst.q()) = fu;
  return std::max(0.0, (inst.a_nn * xy - inst.b_nn).maxCoeff());
}

}  // namespace

// Rows of a_nn whose network-output columns are all zero.
void u_only_rows(const ProblemInstance& inst, Matrix* a_u, Vector* b_u) {
  const int p = inst.p();
  const int q = inst.q();
  std::vector<int> rows;
  for (int r = 0; r < inst.m2(); ++r) {
    if (q == 0 || inst.a_nn.row(r).tail(q).cwiseAbs().maxCoeff() == 0.0) {
      rows.push_back(r);
    }
  }
  a_u->resize(rows.size(), p);
  b_u->resize(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    a_u->row(i) = inst.a_nn.row(rows[i]).head(p);
    (*b_u)(i) = inst.b_nn(rows[i]);
  }
}

double subproblem_objective(const SubsolverRequest& req, const Vector& u) {
  const ProblemInstance& inst = *req.instance;
  const Vector diff = u - req.x_k;
  double value = req.lambda.dot(diff) + 0.5 * req.rho * diff.squaredNorm();
  if (inst.q() > 0) value += inst.d.dot(forward(inst.network, u));
  return value;
}

bool has_coupled_rows(const ProblemInstance& inst) {
  const int q = inst.q();
  if (q == 0) return false;
  for (int r = 0; r < inst.m2(); ++r) {
    if (inst.a_nn.row(r).tail(q).cwiseAbs().maxCoeff() != 0.0) return true;
  }
  return false;
}

SubsolverKind route_subsolver(const ProblemInstance& inst,
                              SubsolverKind requested) {
  if (requested != SubsolverKind::kAuto) return requested;
  return has_coupled_rows(inst) ? SubsolverKind::kBarrier : SubsolverKind::kPgd;
}

Vector project_feasible(const Vector& u, const Vector& lower,
                        const Vector& upper, const Matrix& rows_a,
                        const Vector& rows_b) {
  if (rows_a.rows() == 0) {
    return u.cwiseMax(lower).cwiseMin(upper);
  }
  MilpModel qp;
  qp.q_diag = Vector::Ones(u.size());
  qp.lin = -u;
  qp.a = rows_a;
  qp.b = rows_b;
  qp.lower = lower;
  qp.upper = upper;
  qp.integer.assign(u.size(), false);
  const RelaxResult res = solve_relaxation(qp);
  if (res.status != RelaxStatus::kOptimal) {
    throw InfeasibleError("project_feasible: empty feasible set");
  }
  return res.z;
}

SubsolverResult pgd_step(const SubsolverRequest& req) {
  const ProblemInstance& inst = *req.instance;
  if (req.rho <= 0.0) throw Error("pgd_step: rho must be positive");

  Matrix a_u;
  Vector b_u;
  u_only_rows(inst, &a_u, &b_u);

  const double beta1 = 0.9;
  const double beta2 = 0.999;
  const double eps = 1e-8;

  Vector u = project_feasible(req.u_start, inst.lower, inst.upper, a_u, b_u);
  Vector m = Vector::Zero(inst.p());
  Vector v = Vector::Zero(inst.p());

  SubsolverResult best;
  best.u = u;
  best.objective = subproblem_objective(req, u);
  best.inner_iterations = 0;

  double pow_b1 = 1.0;
  double pow_b2 = 1.0;
  for (int t = 1; t <= req.inner_budget; ++t) {
    Tape tape;
    forward(inst.network, u, &tape);
    Vector grad = req.lambda + req.rho * (u - req.x_k);
    if (inst.q() > 0) grad += vjp(inst.network, tape, inst.d);

    m = beta1 * m + (1.0 - beta1) * grad;
    v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
    pow_b1 *= beta1;
    pow_b2 *= beta2;
    const Vector m_hat = m / (1.0 - pow_b1);
    const Vector v_hat = v / (1.0 - pow_b2);
    Vector step = req.eta * m_hat.cwiseQuotient(
                                v_hat.cwiseSqrt() + Vector::Constant(inst.p(), eps));
    Vector u_next =
        project_feasible(u - step, inst.lower, inst.upper, a_u, b_u);

    const double obj = subproblem_objective(req, u_next);
    if (obj < best.objective) {
      best.objective = obj;
      best.u = u_next;
    }
    best.inner_iterations = t;
    const double moved = (u_next - u).cwiseAbs().maxCoeff();
    u = u_next;
    if (moved <= 1e-12) {
      best.inner_converged = true;
      break;
    }
  }

  best.violation = nn_rows_violation(inst, best.u, forward(inst.network, best.u));
  return best;
}

SubsolverResult barrier_solve(const SubsolverRequest& req, double mu0,
                              double mu_shrink, int newton_iters,
                              int cg_iters) {
  const ProblemInstance& inst = *req.instance;
  if (req.rho <= 0.0) throw Error("barrier_solve: rho must be positive");
  const int p = inst.p();
  const int q = inst.q();
  const int m2 = inst.m2();
  const int rows = m2 + 2 * p;  // nn-block rows plus both box sides

  // slacks(u): b - a [u; f(u)] for nn rows, then up - u and u - lo.
  const auto slacks = [&](const Vector& u, const Vector& fu) {
    Vector s(rows);
    if (m2 > 0) {
      Vector xy(p + q);
      xy.head(p) = u;
      xy.tail(q) = fu;
      s.head(m2) = inst.b_nn - inst.a_nn * xy;
    }
    s.segment(m2, p) = inst.upper - u;
    s.tail(p) = u - inst.lower;
    return s;
  };

  Vector u = req.u_start;
  {
    Tape tape;
    const double margin = 1e-6;
    // Elastic phase-1: adaptive-moment descent on the worst violation
    // until every row has interior margin.
    const auto descend = [&](Vector* point, int budget) {
      Vector m = Vector::Zero(p);
      Vector v = Vector::Zero(p);
      double pow_b1 = 1.0;
      double pow_b2 = 1.0;
      for (int t = 1; t <= budget; ++t) {
        const Vector fu = forward(inst.network, *point, &tape);
        const Vector s = slacks(*point, fu);
        int worst;
        if (s.minCoeff(&worst) > margin) return true;
        // Subgradient of the active row's violation.
        Vector g;
        if (worst < m2) {
          g = inst.a_nn.row(worst).head(p).transpose();
          if (q > 0) {
            const Vector wf = inst.a_nn.row(worst).tail(q).transpose();
            g += vjp(inst.network, tape, wf);
          }
        } else if (worst < m2 + p) {
          g = Vector::Unit(p, worst - m2);
        } else {
          g = -Vector::Unit(p, worst - m2 - p);
        }
        m = 0.9 * m + 0.1 * g;
        v = 0.999 * v + 0.001 * g.cwiseProduct(g);
        pow_b1 *= 0.9;
        pow_b2 *= 0.999;
        const Vector m_hat = m / (1.0 - pow_b1);
        const Vector v_hat = v / (1.0 - pow_b2);
        *point -= 0.02 * m_hat.cwiseQuotient(v_hat.cwiseSqrt() +
                                             Vector::Constant(p, 1e-8));
      }
      return slacks(*point, forward(inst.network, *point)).minCoeff() > margin;
    };
    const Vector fu = forward(inst.network, u, &tape);
    if (slacks(u, fu).minCoeff() <= 1e-9 && !descend(&u, 2000)) {
      // Stacked inactive relu units flatten the violation surface and
      // strand the descent, so restarts must land inside a gated basin.
      // Box corners switch entire unit groups on; a seeded mix of corner
      // and uniform draws follows the two exact corners. Deterministic.
      Rng rng(0x9e3779b97f4a7c15ull);
      bool ok = false;
      for (int attempt = 0; attempt < 34 && !ok; ++attempt) {
        Vector cand(p);
        for (int i = 0; i < p; ++i) {
          if (attempt == 0) {
            cand(i) = inst.upper(i);
          } else if (attempt == 1) {
            cand(i) = inst.lower(i);
          } else if (attempt < 18) {
            cand(i) = rng.uniform() < 0.5 ? inst.lower(i) : inst.upper(i);
          } else {
            cand(i) = rng.uniform(inst.lower(i), inst.upper(i));
          }
        }
        if (descend(&cand, 400)) {
          u = cand;
          ok = true;
        }
      }
      if (!ok) {
        throw InfeasibleError(
            "barrier_solve: no strictly interior point found (phase-1)");
      }
    }
  }

  // phi(u) = subproblem objective - mu * sum log slack.
  const auto barrier_value = [&](const Vector& point, double mu,
                                 bool* interior) {
    const Vector fu = forward(inst.network, point);
    const Vector s = slacks(point, fu);
    if (s.minCoeff() <= 0.0) {
      *interior = false;
      return kInf;
    }
    *interior = true;
    return subproblem_objective(req, point) - mu * s.array().log().sum();
  };

  SubsolverResult result;
  result.inner_iterations = 0;
  double mu = mu0;
  bool last_stage_converged = false;
  while (mu >= 1e-6) {
    last_stage_converged = false;
    for (int it = 0; it < newton_iters; ++it) {
      Tape tape;
      const Vector fu = forward(inst.network, u, &tape);
      const Vector s = slacks(u, fu);

      // Row gradients of a_j [u; f(u)] and the barrier gradient.
      Matrix row_grads(rows, p);
      for (int r = 0; r < m2; ++r) {
        Vector g = inst.a_nn.row(r).head(p).transpose();
        if (q > 0) {
          const Vector wf = inst.a_nn.row(r).tail(q).transpose();
          g += vjp(inst.network, tape, wf);
        }
        row_grads.row(r) = g.transpose();
      }
      for (int i = 0; i < p; ++i) {
        row_grads.row(m2 + i) = Vector::Unit(p, i).transpose();
        row_grads.row(m2 + p + i) = -Vector::Unit(p, i).transpose();
      }

      Vector grad = req.lambda + req.rho * (u - req.x_k);
      if (q > 0) grad += vjp(inst.network, tape, inst.d);
      for (int r = 0; r < rows; ++r) {
        grad += (mu / s(r)) * row_grads.row(r).transpose();
      }

      // Gauss-Newton Hessian-vector products: rho I, |d|-weighted JJ^T
      // curvature surrogate, and the exact barrier rank-one terms.
      const Vector dabs = inst.d.cwiseAbs();
      const auto hv = [&](const Vector& x) {
        Vector out = req.rho * x;
        if (q > 0) {
          const Vector jx = jvp(inst.network, tape, x);
          out += vjp(inst.network, tape, dabs.cwiseProduct(jx));
        }
        for (int r = 0; r < rows; ++r) {
          const double coeff = mu / (s(r) * s(r));
          out += coeff * row_grads.row(r).dot(x) * row_grads.row(r).transpose();
        }
        return out;
      };

      // Conjugate gradients on hv for the damped Newton direction.
      Vector dir = Vector::Zero(p);
      Vector resid = -grad;
      Vector pdir = resid;
      double rr = resid.squaredNorm();
      for (int cg = 0; cg < cg_iters && rr > 1e-20; ++cg) {
        const Vector hp = hv(pdir);
        const double php = pdir.dot(hp);
        if (php <= 0.0) break;
        const double alpha = rr / php;
        dir += alpha * pdir;
        resid -= alpha * hp;
        const double rr_new = resid.squaredNorm();
        pdir = resid + (rr_new / rr) * pdir;
        rr = rr_new;
      }
      if (dir.squaredNorm() == 0.0) {
        last_stage_converged = true;
        break;
      }

      const double decrement_sq = -grad.dot(dir);
      if (decrement_sq * 0.5 < 1e-6) {
        last_stage_converged = true;
        break;
      }

      // Backtracking line search keeping strict feasibility.
      bool interior = false;
      const double phi0 = barrier_value(u, mu, &interior);
      double t_step = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 50; ++bt) {
        const Vector trial = u + t_step * dir;
        bool trial_interior = false;
        const double phi_trial = barrier_value(trial, mu, &trial_interior);
        if (trial_interior &&
            phi_trial <= phi0 - 0.25 * t_step * decrement_sq) {
          u = trial;
          accepted = true;
          break;
        }
        t_step *= 0.5;
      }
      ++result.inner_iterations;
      if (!accepted) {
        last_stage_converged = true;
        break;
      }
    }
    mu *= mu_shrink;
  }

  result.u = u;
  result.objective = subproblem_objective(req, u);
  result.violation = nn_rows_violation(inst, u, forward(inst.network, u));
  result.inner_converged = last_stage_converged;
  return result;
}

SubsolverResult run_subsolver(const SubsolverRequest& req, SubsolverKind kind) {
  const SubsolverKind routed = route_subsolver(*req.instance, kind);
  if (routed == SubsolverKind::kBarrier) {
    if (kind != SubsolverKind::kAuto) return barrier_solve(req);
    try {
      return barrier_solve(req);
    } catch (const InfeasibleError&) {
      // No strict interior reachable (vacuous or boundary-tight coupled
      // rows). The projected-gradient path still makes progress and
      // reports any coupled-row violation instead of aborting the solve.
      return pgd_step(req);
    }
  }
  return pgd_step(req);
}

}  // namespace nnmip
