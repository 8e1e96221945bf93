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

#include "nnmip/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <Eigen/Cholesky>

#include "nnmip/milp.hpp"

namespace nnmip {

double evaluate(const MilpModel& model, const Vector& z) {
  return 0.5 * z.dot(model.q_diag.cwiseProduct(z)) + model.lin.dot(z) +
         model.constant;
}

double row_violation(const MilpModel& model, const Vector& z) {
  if (model.m() == 0) return 0.0;
  return std::max(0.0, (model.a * z - model.b).maxCoeff());
}

namespace {

constexpr double kKktTol = 1e-8;
constexpr double kKktAccept = 1e-6;     // stall acceptance, scaled residuals
constexpr double kPrimalAccept = 1e-7;  // stall acceptance, raw row residual
constexpr double kNewtonReg = 1e-9;
constexpr int kMaxIters = 200;
constexpr double kScalingCap = 1e10;  // bounds y/s inside the normal matrix

// Minimizes 0.5*q*z^2 + w*z over [lo, up]; q >= 0.
double box_argmin(double q, double w, double lo, double up) {
  if (q > 0.0) {
    return std::min(std::max(-w / q, lo), up);
  }
  if (w > 0.0) return lo;
  if (w < 0.0) return up;
  // Flat coordinate: prefer a finite point, deterministically.
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(up)) return up;
  return 0.0;
}

// Largest alpha in (0, 1] with v + alpha*dv >= 0.
double max_step(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

struct IpmProblem {
  Vector q_newton;  // q_diag + regularization
  Vector lin;
  Matrix g;  // all inequality rows, box included
  Vector h;
};

struct IpmResult {
  Vector z;
  Vector y;  // duals for all g rows
  bool converged = false;
  double kkt = kInf;
  int iterations = 0;
};

IpmResult run_ipm(const IpmProblem& prob, const Vector& z0) {
  const Eigen::Index n = prob.lin.size();
  const Eigen::Index m = prob.h.size();
  IpmResult res;
  res.z = z0;
  Vector s = (prob.h - prob.g * res.z).cwiseMax(1.0);
  res.y = Vector::Ones(m);

  const double scale_d = 1.0 + prob.lin.cwiseAbs().maxCoeff();
  const double scale_p = 1.0 + (m > 0 ? prob.h.cwiseAbs().maxCoeff() : 0.0);

  // Best iterate seen, by scaled residual. Equality-like row pairs (empty
  // strict interior) can stall the iteration short of kKktTol; the best
  // iterate is then accepted if it sits within the looser thresholds.
  Vector best_z = res.z;
  Vector best_y = res.y;
  double best_kkt = kInf;
  double best_rp = kInf;

  for (int iter = 0; iter < kMaxIters; ++iter) {
    res.iterations = iter;
    const Vector rd =
        prob.q_newton.cwiseProduct(res.z) + prob.lin + prob.g.transpose() * res.y;
    const Vector rp = prob.g * res.z + s - prob.h;
    const double rp_raw = rp.cwiseAbs().maxCoeff();
    const double mu = s.dot(res.y) / static_cast<double>(m);
    res.kkt = std::max({rd.cwiseAbs().maxCoeff() / scale_d, rp_raw / scale_p, mu});
    if (res.kkt < best_kkt) {
      best_kkt = res.kkt;
      best_rp = rp_raw;
      best_z = res.z;
      best_y = res.y;
    }
    if (res.kkt <= kKktTol) {
      res.converged = true;
      return res;
    }

    // Tight row pairs push y/s entries 20 orders of magnitude apart; the cap
    // and the escalating diagonal bump keep the normal matrix factorable.
    const Vector d = res.y.cwiseQuotient(s).cwiseMin(kScalingCap);
    Matrix mtx = prob.g.transpose() * d.asDiagonal() * prob.g;
    mtx.diagonal() += prob.q_newton;
    Eigen::LDLT<Matrix> ldlt(mtx);
    if (ldlt.info() != Eigen::Success) {
      const double scale = std::max(1.0, mtx.cwiseAbs().maxCoeff());
      double bump = 0.0;
      for (double reg = scale * 1e-14;
           reg <= scale * 1e-6 && ldlt.info() != Eigen::Success; reg *= 100.0) {
        mtx.diagonal().array() += reg - bump;
        bump = reg;
        ldlt.compute(mtx);
      }
      if (ldlt.info() != Eigen::Success) break;
    }

    const auto solve_step = [&](const Vector& rc, Vector* dz, Vector* ds,
                                Vector* dy) {
      const Vector rhs =
          -rd - prob.g.transpose() * (d.cwiseProduct(rp) - rc.cwiseQuotient(s));
      *dz = ldlt.solve(rhs);
      *ds = -rp - prob.g * (*dz);
      *dy = (res.y.cwiseProduct(prob.g * (*dz) + rp) - rc).cwiseQuotient(s);
    };

    // Predictor.
    Vector dz_a(n), ds_a(m), dy_a(m);
    solve_step(res.y.cwiseProduct(s), &dz_a, &ds_a, &dy_a);
    const double ap_a = max_step(s, ds_a);
    const double ad_a = max_step(res.y, dy_a);
    const double mu_aff =
        (s + ap_a * ds_a).dot(res.y + ad_a * dy_a) / static_cast<double>(m);
    const double ratio = mu_aff / mu;
    const double sigma = std::clamp(ratio * ratio * ratio, 0.0, 1.0);

    // Corrector.
    Vector rc = res.y.cwiseProduct(s) + ds_a.cwiseProduct(dy_a) -
                Vector::Constant(m, sigma * mu);
    Vector dz(n), ds(m), dy(m);
    solve_step(rc, &dz, &ds, &dy);

    const double ap = std::min(1.0, 0.99 * max_step(s, ds));
    const double ad = std::min(1.0, 0.99 * max_step(res.y, dy));
    if (std::getenv("NNMIP_IPM_TRACE")) {
      std::fprintf(stderr,
                   "it=%3d mu=%9.2e kkt=%9.2e rd=%9.2e rp=%9.2e sg=%7.1e "
                   "ap=%6.4f ad=%6.4f\n",
                   iter, mu, res.kkt, rd.cwiseAbs().maxCoeff(),
                   rp.cwiseAbs().maxCoeff(), sigma, ap, ad);
    }
    res.z += ap * dz;
    s += ap * ds;
    res.y += ad * dy;
  }

  res.z = best_z;
  res.y = best_y;
  res.kkt = best_kkt;
  res.converged = best_kkt <= kKktAccept && best_rp <= kPrimalAccept;
  return res;
}

// Active-set refinement: pins the rows that look active, solves the
// equality-constrained problem through a regularized augmented system,
// and accepts the result only when it passes a strict KKT check of the
// original problem. Rescues iterates that the interior steps leave
// hovering near a degenerate face (tight rows with zero duals), where
// the predictor-corrector can stall short of kKktTol.
bool polish(const IpmProblem& prob, IpmResult* res) {
  const Eigen::Index n = prob.lin.size();
  const Eigen::Index m = prob.h.size();
  const double scale_d = 1.0 + prob.lin.cwiseAbs().maxCoeff();
  const double scale_h = 1.0 + prob.h.cwiseAbs().maxCoeff();

  // Rows within the detection band count as active; the band widens with
  // the iterate's residual so a sloppy stall still finds its face.
  const double band =
      std::max(1e-7, std::sqrt(std::min(res->kkt, 1.0)) * 1e-1);
  std::vector<Eigen::Index> act;
  {
    const Vector slack = prob.h - prob.g * res->z;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (slack(i) <= band * (1.0 + std::abs(prob.h(i)))) act.push_back(i);
    }
  }

  const double delta = 1e-10 * scale_h;
  Vector z = res->z;
  Vector y_act;
  std::vector<Eigen::Index> used;  // the set the last solve actually pinned
  for (int pass = 0; pass < 4; ++pass) {
    used = act;
    const Eigen::Index k = static_cast<Eigen::Index>(act.size());
    Matrix kkt = Matrix::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n).diagonal() = prob.q_newton.array() + delta;
    for (Eigen::Index j = 0; j < k; ++j) {
      kkt.block(0, n + j, n, 1) = prob.g.row(act[j]).transpose();
      kkt.block(n + j, 0, 1, n) = prob.g.row(act[j]);
      kkt(n + j, n + j) = -delta;
    }
    Vector rhs(n + k);
    rhs.head(n) = -prob.lin;
    for (Eigen::Index j = 0; j < k; ++j) rhs(n + j) = prob.h(act[j]);
    Eigen::LDLT<Matrix> ldlt(kkt);
    if (ldlt.info() != Eigen::Success) return false;
    Vector sol = ldlt.solve(rhs);
    // One refinement pass against the unregularized system.
    {
      Vector r = rhs;
      r.head(n) -= prob.q_newton.cwiseProduct(sol.head(n));
      for (Eigen::Index j = 0; j < k; ++j) {
        const double gj = prob.g.row(act[j]).dot(sol.head(n));
        r(n + j) -= gj;
        r.head(n) -= sol(n + j) * prob.g.row(act[j]).transpose();
      }
      sol += ldlt.solve(r);
    }
    z = sol.head(n);
    y_act = sol.tail(k);

    // Drop rows pinned with negative duals, add rows the point violates.
    std::vector<Eigen::Index> next;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (y_act(j) >= -1e-9 * scale_d) next.push_back(act[j]);
    }
    const Vector slack = prob.h - prob.g * z;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (slack(i) < -1e-11 * (1.0 + std::abs(prob.h(i))) &&
          std::find(next.begin(), next.end(), i) == next.end()) {
        next.push_back(i);
      }
    }
    std::sort(next.begin(), next.end());
    if (next == act) break;
    act = std::move(next);
  }

  // Strict KKT check; any miss leaves the caller's iterate untouched.
  Vector y = Vector::Zero(m);
  for (std::size_t j = 0; j < used.size(); ++j) {
    y(used[j]) = std::max(0.0, y_act(static_cast<Eigen::Index>(j)));
  }
  const Vector slack = prob.h - prob.g * z;
  double viol = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    viol = std::max(viol, -slack(i) / (1.0 + std::abs(prob.h(i))));
  }
  const double stat = (prob.q_newton.cwiseProduct(z) + prob.lin +
                       prob.g.transpose() * y)
                          .cwiseAbs()
                          .maxCoeff() /
                      scale_d;
  const double comp = slack.cwiseMax(0.0).dot(y) / static_cast<double>(m);
  if (stat > 1e-9 || viol > 1e-9 || comp > 1e-9) return false;
  res->z = z;
  res->y = y;
  res->kkt = std::max({stat, viol, comp});
  res->converged = true;
  return true;
}

// Default interior-ish start: box midpoint where finite.
Vector initial_point(const MilpModel& model) {
  Vector z(model.n());
  for (int i = 0; i < model.n(); ++i) {
    const double lo = model.lower(i);
    const double up = model.upper(i);
    if (std::isfinite(lo) && std::isfinite(up)) {
      z(i) = 0.5 * (lo + up);
    } else if (std::isfinite(lo)) {
      z(i) = lo + 1.0;
    } else if (std::isfinite(up)) {
      z(i) = up - 1.0;
    } else {
      z(i) = 0.0;
    }
  }
  return z;
}

// Stacks the model's a-rows with its finite box rows.
void build_rows(const MilpModel& model, Matrix* g, Vector* h) {
  const int n = model.n();
  const int ma = model.m();
  int extra = 0;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(model.upper(i))) ++extra;
    if (std::isfinite(model.lower(i))) ++extra;
  }
  g->setZero(ma + extra, n);
  h->resize(ma + extra);
  if (ma > 0) {
    g->topRows(ma) = model.a;
    h->head(ma) = model.b;
  }
  int r = ma;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(model.upper(i))) {
      (*g)(r, i) = 1.0;
      (*h)(r) = model.upper(i);
      ++r;
    }
    if (std::isfinite(model.lower(i))) {
      (*g)(r, i) = -1.0;
      (*h)(r) = -model.lower(i);
      ++r;
    }
  }
}

}  // namespace

RelaxResult solve_relaxation(const MilpModel& model) {
  const int n = model.n();
  if (n == 0) throw Error("solve_relaxation: empty model");
  if ((model.q_diag.array() < 0.0).any()) {
    throw Error("solve_relaxation: q_diag must be nonnegative");
  }
  if ((model.lower.array() > model.upper.array()).any()) {
    throw InfeasibleError("solve_relaxation: empty box");
  }

  RelaxResult out;

  // Separable closed form when no coupling rows exist.
  if (model.m() == 0) {
    out.z.resize(n);
    for (int i = 0; i < n; ++i) {
      if (model.q_diag(i) <= 0.0 && model.lin(i) != 0.0) {
        const double side = model.lin(i) > 0.0 ? model.lower(i) : model.upper(i);
        if (!std::isfinite(side)) {
          throw Error("solve_relaxation: unbounded linear coordinate " +
                      std::to_string(i));
        }
      }
      out.z(i) =
          box_argmin(model.q_diag(i), model.lin(i), model.lower(i),
                     model.upper(i));
    }
    out.value = evaluate(model, out.z);
    out.row_duals = Vector::Zero(0);
    out.kkt_residual = 0.0;
    return out;
  }

  IpmProblem prob;
  prob.q_newton = model.q_diag.array() + kNewtonReg;
  prob.lin = model.lin;
  build_rows(model, &prob.g, &prob.h);

  IpmResult ipm = run_ipm(prob, initial_point(model));
  polish(prob, &ipm);  // sharpens a solution, rescues a stall; no-op on failure

  if (!ipm.converged) {
    // Elastic phase-1: min t subject to g z - t e <= h. Its strict
    // interior is never empty, so the iteration is well behaved and its
    // optimum decides feasibility of the original rows.
    const Eigen::Index mg = prob.h.size();
    IpmProblem ph1;
    ph1.q_newton = Vector::Constant(n + 1, kNewtonReg);
    ph1.lin = Vector::Zero(n + 1);
    ph1.lin(n) = 1.0;
    ph1.g.setZero(mg + 1, n + 1);
    ph1.g.topLeftCorner(mg, n) = prob.g;
    ph1.g.col(n).head(mg).setConstant(-1.0);
    ph1.g(mg, n) = -1.0;  // t >= -10 keeps the LP bounded
    ph1.h.resize(mg + 1);
    ph1.h.head(mg) = prob.h;
    ph1.h(mg) = 10.0;

    Vector z0(n + 1);
    z0.head(n) = initial_point(model);
    z0(n) = (prob.g * z0.head(n) - prob.h).maxCoeff() + 1.0;
    IpmResult ph1_res = run_ipm(ph1, z0);
    polish(ph1, &ph1_res);
    if (!ph1_res.converged) {
      throw Error("solve_relaxation: phase-1 did not converge");
    }
    const double t_star = ph1_res.z(n);
    if (t_star > 1e-7) {
      // Farkas-style certificate: y >= 0, g^T y ~ 0, h^T y < 0.
      Vector y = ph1_res.y.head(mg);
      const double mass = y.lpNorm<1>();
      if (mass <= 0.0) {
        throw Error("solve_relaxation: infeasible but certificate is empty");
      }
      y /= mass;
      const double farkas_res = (prob.g.transpose() * y).cwiseAbs().maxCoeff();
      const double farkas_val = prob.h.dot(y);
      if (farkas_res <= 1e-6 && farkas_val < -1e-8) {
        out.status = RelaxStatus::kInfeasible;
        out.z = ph1_res.z.head(n);
        out.value = kInf;
        out.row_duals = Vector::Zero(model.m());
        return out;
      }
      if (t_star > 1e-5) {
        throw Error("solve_relaxation: feasibility is numerically ambiguous");
      }
      // Barely positive without a certificate: let phase-2 decide from
      // the elastic point. A truly infeasible model cannot pass its
      // primal-residual acceptance and still ends in a throw.
    }
    ipm = run_ipm(prob, ph1_res.z.head(n));
    polish(prob, &ipm);
    if (!ipm.converged) {
      if (std::getenv("NNMIP_IPM_DEBUG")) {
        std::fprintf(stderr, "ipm fail: n=%d m=%d kkt=%.3e iters=%d\n",
                     model.n(), model.m(), ipm.kkt, ipm.iterations);
        for (int i = 0; i < model.n(); ++i) {
          std::fprintf(stderr, "  box[%d] = [%g, %g] q=%g lin=%g\n", i,
                       model.lower(i), model.upper(i), model.q_diag(i),
                       model.lin(i));
        }
      }
      throw Error("solve_relaxation: interior method did not converge");
    }
  }

  out.z = ipm.z.cwiseMax(model.lower).cwiseMin(model.upper);
  out.value = evaluate(model, out.z);
  out.row_duals = ipm.y.head(model.m()).cwiseMax(0.0);
  out.kkt_residual = ipm.kkt;
  out.iterations = ipm.iterations;
  return out;
}

}  // namespace nnmip
