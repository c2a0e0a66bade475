/*
 * Copyright 2026 The skrylov developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/// \file skrylov/solvers.hpp
/// \brief Baseline iterative methods: minimal residual descent (MR),
///        Orthomin(k) / GCR, and restarted GMRES(m).
///
/// All solvers monitor the recursively updated residual for termination and
/// record per-iteration (or per-cycle) counter snapshots so the op-count
/// audit can inspect iteration deltas. The residual history holds 2-norms:
/// the initial residual plus one entry per iteration (MR/Omin) or restart
/// cycle (GMRES).

#ifndef SKRYLOV_SOLVERS_HPP
#define SKRYLOV_SOLVERS_HPP

#include <cstddef>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "skrylov/kernels.hpp"
#include "skrylov/operator.hpp"
#include "skrylov/report.hpp"
#include "skrylov/small_dense.hpp"

namespace skrylov {

enum class Method { mr, omin, gcr, gmres };

struct SolverConfig {
  Method method = Method::gmres;
  std::size_t k = 4;   ///< Orthomin window (direction blocks kept)
  std::size_t m = 10;  ///< GMRES restart length
  double tol = 1e-6;   ///< absolute threshold on ||r||_2
  std::size_t max_iterations = 100000;
  bool precondition = false;  ///< honored by the driver, not the core loops
  bool debug_checks = false;  ///< orthogonality / recurrence assertions
  double divergence_factor = 10.0;
};

namespace detail {

inline std::vector<double> initial_residual(const LinearOperator& op,
                                            std::span<const double> f,
                                            std::span<const double> x, OpCounter& c) {
  require(f.size() == op.size() && x.size() == op.size(),
          "solve: rhs/guess dimension mismatch");
  std::vector<double> r(f.begin(), f.end());
  if (!is_zero(x)) {
    std::vector<double> ax = op(x);
    ++c.matvecs;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= ax[i];
    ++c.vec_updates;
  }
  return r;
}

inline double checked_norm(std::span<const double> r, OpCounter& c) {
  ++c.termination_dots;
  return norm2(r);
}

/// One modified Gram-Schmidt Arnoldi step extending the basis q by one
/// vector. Returns the Hessenberg column (q.size() old entries plus the
/// subdiagonal norm). On happy breakdown the basis is not extended.
struct ArnoldiStep {
  std::vector<double> col;
  bool happy = false;
};

inline ArnoldiStep arnoldi_step(const LinearOperator& op,
                                std::vector<std::vector<double>>& q, OpCounter& c) {
  const std::size_t j = q.size();
  std::vector<double> w = op(q.back());
  ++c.matvecs;
  std::vector<double> col(j + 1);
  for (std::size_t i = 0; i < j; ++i) {
    col[i] = dot(q[i], w);
    axpy(-col[i], q[i], w);
  }
  c.dotprods += j;
  c.vec_updates += j;
  const double hsub = norm2(w);
  ++c.dotprods;
  col[j] = hsub;
  ArnoldiStep step;
  step.happy = hsub <= 1e-14 * norm2(col);
  if (!step.happy) {
    scale(1.0 / hsub, w);
    ++c.vec_updates;
    q.push_back(std::move(w));
  }
  step.col = std::move(col);
  return step;
}

}  // namespace detail

/// Standalone Arnoldi process (used by the basis-quality tests and the s=1
/// reduction checks). q holds the orthonormal basis, h the (steps+1) x steps
/// Hessenberg matrix; on happy breakdown h has steps columns and q stops at
/// steps vectors.
struct ArnoldiResult {
  std::vector<std::vector<double>> q;
  Matrix h;
  std::size_t steps = 0;
  bool happy = false;
};

inline ArnoldiResult arnoldi(const LinearOperator& op, std::span<const double> v1,
                             std::size_t m, OpCounter* counter = nullptr) {
  require(m >= 1, "arnoldi: m must be at least 1");
  OpCounter local;
  OpCounter& c = counter ? *counter : local;
  ArnoldiResult out;
  const double nv = norm2(v1);
  require(nv > 0.0, "arnoldi: start vector is zero");
  std::vector<double> q1(v1.begin(), v1.end());
  scale(1.0 / nv, q1);
  out.q.push_back(std::move(q1));
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < m; ++j) {
    auto step = detail::arnoldi_step(op, out.q, c);
    cols.push_back(std::move(step.col));
    ++out.steps;
    if (step.happy) {
      out.happy = true;
      break;
    }
  }
  out.h = Matrix(out.steps + 1, out.steps);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size() && i <= out.steps; ++i)
      out.h(i, j) = cols[j][i];
  return out;
}

/// Steepest-descent minimal residual: per step a = (r^T A r)/((A r)^T A r),
/// x += a r, r -= a A r.
inline SolveReport mr_solve(const LinearOperator& op, std::span<const double> f,
                            std::vector<double>& x, const SolverConfig& cfg) {
  SolveReport rep;
  OpCounter& c = rep.op_counts;
  auto r = detail::initial_residual(op, f, x, c);
  double rn = detail::checked_norm(r, c);
  rep.residual_history.push_back(rn);
  c.stored_vectors = 3;  // x, r, Ar
  rep.op_history.push_back(c);
  std::vector<double> ar(r.size());
  while (rn > cfg.tol && rep.iterations < cfg.max_iterations) {
    op.apply(r, ar);
    ++c.matvecs;
    const double den = dot(ar, ar);
    const double num = dot(r, ar);
    c.dotprods += 2;
    if (den == 0.0) {
      rep.breakdown = "stagnation: A r vanished while r is nonzero";
      break;
    }
    const double a = num / den;
    axpy(a, r, x);
    axpy(-a, ar, r);
    c.vec_updates += 2;
    ++rep.iterations;
    rn = detail::checked_norm(r, c);
    rep.residual_history.push_back(rn);
    rep.op_history.push_back(c);
  }
  rep.converged = rn <= cfg.tol;
  rep.final_residual = rep.residual_history.back();
  return rep;
}

/// Orthomin(k) / GCR. Directions are A^T A-orthogonalized against a sliding
/// window of the k most recent ones (all of them for GCR). A p is carried
/// by the recurrence of Algorithm steps 5-6, so each iteration costs one
/// operator application.
inline SolveReport omin_solve(const LinearOperator& op, std::span<const double> f,
                              std::vector<double>& x, const SolverConfig& cfg) {
  const bool gcr = cfg.method == Method::gcr;
  require(gcr || cfg.k >= 1, "omin: window k must be at least 1");
  SolveReport rep;
  OpCounter& c = rep.op_counts;
  rep.steady_iteration = gcr ? cfg.max_iterations + 1 : cfg.k;

  auto r = detail::initial_residual(op, f, x, c);
  const double r0n = detail::checked_norm(r, c);
  double rn = r0n;
  rep.residual_history.push_back(rn);

  struct Direction {
    std::vector<double> p, ap;
    double apap;
  };
  std::deque<Direction> window;
  std::size_t peak_window = 0;

  if (rn > cfg.tol) {
    Direction d;
    d.p.assign(r.begin(), r.end());
    d.ap = op(d.p);
    ++c.matvecs;
    d.apap = dot(d.ap, d.ap);
    ++c.dotprods;
    window.push_back(std::move(d));
    peak_window = 1;
  }
  rep.op_history.push_back(c);

  while (rn > cfg.tol && rep.iterations < cfg.max_iterations) {
    const Direction& cur = window.back();
    if (cur.apap == 0.0) {
      rep.breakdown = "breakdown: (A p)^T (A p) vanished";
      break;
    }
    const double num = dot(r, cur.ap);
    ++c.dotprods;
    const double a = num / cur.apap;
    axpy(a, cur.p, x);
    axpy(-a, cur.ap, r);
    c.vec_updates += 2;
    ++rep.iterations;
    rn = detail::checked_norm(r, c);
    rep.residual_history.push_back(rn);
    if (rn <= cfg.tol) break;
    if (rn > cfg.divergence_factor * r0n) {
      rep.breakdown = "divergence: residual grew beyond " +
                      std::to_string(cfg.divergence_factor) + "x the initial norm";
      break;
    }
    if (rep.iterations >= cfg.max_iterations) break;

    std::vector<double> ar = op(r);
    ++c.matvecs;
    std::vector<double> b(window.size());
    for (std::size_t j = 0; j < window.size(); ++j) b[j] = dot(ar, window[j].ap);
    c.dotprods += window.size();

    Direction next;
    next.p.assign(r.begin(), r.end());
    next.ap = std::move(ar);
    for (std::size_t j = 0; j < window.size(); ++j) {
      const double coef = -(b[j] / window[j].apap);
      axpy(coef, window[j].p, next.p);
      axpy(coef, window[j].ap, next.ap);
    }
    c.vec_updates += 2 * window.size();
    next.apap = dot(next.ap, next.ap);
    ++c.dotprods;

    if (cfg.debug_checks) {
      const double nn = norm2(next.ap);
      for (const Direction& d : window) {
        const double cross = std::abs(dot(next.ap, d.ap));
        if (cross > 1e-8 * nn * norm2(d.ap))
          throw std::logic_error("omin: window A-direction orthogonality lost");
      }
      if (rep.iterations % 10 == 0) {
        std::vector<double> true_r = op(x);
        for (std::size_t i = 0; i < true_r.size(); ++i) true_r[i] = f[i] - true_r[i];
        axpy(-1.0, r, true_r);
        if (norm2(true_r) > 1e-9 * norm2(f))
          throw std::logic_error("omin: recursive residual drifted from f - A x");
      }
    }

    window.push_back(std::move(next));
    peak_window = std::max(peak_window, window.size());
    if (!gcr && window.size() > cfg.k) window.pop_front();
    rep.op_history.push_back(c);
  }
  c.stored_vectors = 2 + 2 * peak_window;  // x, r, window of (p, Ap)
  rep.converged = rn <= cfg.tol;
  rep.final_residual = rep.residual_history.back();
  return rep;
}

/// Restarted GMRES(m): modified Gram-Schmidt Arnoldi, incremental Givens
/// least squares, early exit when the estimated residual passes the
/// threshold (the recomputed true residual must confirm it, otherwise the
/// next cycle runs).
inline SolveReport gmres_solve(const LinearOperator& op, std::span<const double> f,
                               std::vector<double>& x, const SolverConfig& cfg) {
  require(cfg.m >= 1, "gmres: restart length m must be at least 1");
  const std::size_t m = cfg.m;
  SolveReport rep;
  OpCounter& c = rep.op_counts;
  c.stored_vectors = m + 4;  // basis, x, r, w

  auto r = detail::initial_residual(op, f, x, c);
  double rn = detail::checked_norm(r, c);
  rep.residual_history.push_back(rn);
  rep.op_history.push_back(c);

  while (rn > cfg.tol && rep.iterations < cfg.max_iterations) {
    std::vector<std::vector<double>> q;
    q.reserve(m + 1);
    std::vector<double> q1(r.begin(), r.end());
    scale(1.0 / rn, q1);
    ++c.vec_updates;
    q.push_back(std::move(q1));

    HessenbergLsq lsq(rn);
    bool happy = false;
    std::size_t inner = 0;
    while (inner < m && rep.iterations < cfg.max_iterations) {
      auto step = detail::arnoldi_step(op, q, c);
      ++inner;
      ++rep.iterations;
      const double rho = lsq.append_column(std::move(step.col));
      if (step.happy) {
        happy = true;
        break;
      }
      if (rho <= cfg.tol) break;
    }

    std::vector<double> y;
    try {
      y = lsq.solve();
    } catch (const breakdown_error& e) {
      rep.breakdown = e.what();
      break;
    }
    for (std::size_t i = 0; i < y.size(); ++i) axpy(y[i], q[i], x);
    c.vec_updates += y.size();

    std::vector<double> ax = op(x);
    ++c.matvecs;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = f[i] - ax[i];
    ++c.vec_updates;
    ++rep.cycles;
    rn = detail::checked_norm(r, c);
    rep.residual_history.push_back(rn);
    if (inner == m && !happy) rep.op_history.push_back(c);
    if (happy && rn > cfg.tol) {
      rep.breakdown = "happy breakdown but residual above threshold";
      break;
    }
  }
  rep.converged = rn <= cfg.tol;
  rep.final_residual = rep.residual_history.back();
  return rep;
}

/// Dispatch on cfg.method.
inline SolveReport standard_solve(const LinearOperator& op, std::span<const double> f,
                                  std::vector<double>& x, const SolverConfig& cfg) {
  switch (cfg.method) {
    case Method::mr:
      return mr_solve(op, f, x, cfg);
    case Method::omin:
    case Method::gcr:
      return omin_solve(op, f, x, cfg);
    case Method::gmres:
      return gmres_solve(op, f, x, cfg);
  }
  throw std::invalid_argument("standard_solve: unknown method");
}

}  // namespace skrylov

#endif  // SKRYLOV_SOLVERS_HPP
