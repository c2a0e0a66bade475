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

#include <catch2/catch_amalgamated.hpp>

#include "skrylov/ilu0.hpp"
#include "skrylov/problem.hpp"
#include "skrylov/solvers.hpp"
#include "support/oracles.hpp"

using namespace skrylov;

namespace {

DiscretizedProblem symmetric_problem(std::size_t nx) {
  ProblemFunctions p = paper_problem(0.0, 0.0);
  p.d = [](double, double) { return 0.0; };
  p.e = [](double, double) { return 0.0; };
  return assemble(nx, p);
}

}  // namespace

TEST_CASE("mr with a zero initial residual does nothing", "[solvers]") {
  auto a = SparseMatrix::identity(4);
  LinearOperator op = as_operator(a);
  std::vector<double> f{1.0, 2.0, 3.0, 4.0};
  std::vector<double> x = f;  // exact solution
  SolverConfig cfg;
  cfg.method = Method::mr;
  auto rep = mr_solve(op, f, x, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(x == f);
}

TEST_CASE("mr solves a scaled identity in one step", "[solvers]") {
  auto a = SparseMatrix::from_triplets(3, 3, {{0, 0, 2.0}, {1, 1, 2.0}, {2, 2, 2.0}});
  LinearOperator op = as_operator(a);
  std::vector<double> f{2.0, 2.0, 2.0};
  std::vector<double> x(3, 0.0);
  SolverConfig cfg;
  cfg.method = Method::mr;
  auto rep = mr_solve(op, f, x, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  for (double e : x) CHECK(std::abs(e - 1.0) <= 1e-15);
}

TEST_CASE("mr equals gmres(1) cycle by cycle on an SPD problem", "[solvers]") {
  auto prob = assemble(3, constant_coefficient_problem(1.0, 1.0, 0.0, 0.0, 0.0));
  LinearOperator op = as_operator(prob.a);
  std::mt19937 rng(77);
  std::vector<double> f = oracle::random_vector(rng, 9);
  std::vector<double> x1(9, 0.0), x2(9, 0.0);

  SolverConfig mr_cfg;
  mr_cfg.method = Method::mr;
  mr_cfg.tol = 1e-30;
  mr_cfg.max_iterations = 20;
  auto mr_rep = mr_solve(op, f, x1, mr_cfg);

  SolverConfig g_cfg;
  g_cfg.method = Method::gmres;
  g_cfg.m = 1;
  g_cfg.tol = 1e-30;
  g_cfg.max_iterations = 20;
  auto g_rep = gmres_solve(op, f, x2, g_cfg);

  const double r0 = mr_rep.residual_history[0];
  REQUIRE(g_rep.residual_history.size() == mr_rep.residual_history.size());
  for (std::size_t t = 0; t < mr_rep.residual_history.size(); ++t) {
    if (mr_rep.residual_history[t] < 1e-2 * r0) break;
    CHECK(oracle::rel_diff(mr_rep.residual_history[t], g_rep.residual_history[t]) <=
          1e-12);
  }
}

TEST_CASE("omin with a zero initial residual does nothing", "[solvers]") {
  auto a = SparseMatrix::identity(3);
  LinearOperator op = as_operator(a);
  std::vector<double> f{1.0, 1.0, 1.0};
  std::vector<double> x = f;
  SolverConfig cfg;
  cfg.method = Method::omin;
  cfg.k = 2;
  auto rep = omin_solve(op, f, x, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
  CHECK(rep.op_counts.matvecs <= 1);
}

TEST_CASE("omin(1) matches gcr on a symmetric problem", "[solvers]") {
  auto prob = symmetric_problem(7);
  LinearOperator op = as_operator(prob.a);
  std::mt19937 rng(5);
  std::vector<double> f = oracle::random_vector(rng, prob.a.rows());
  std::vector<double> x1(f.size(), 0.0), x2(f.size(), 0.0);

  SolverConfig o_cfg;
  o_cfg.method = Method::omin;
  o_cfg.k = 1;
  o_cfg.tol = 1e-30;
  o_cfg.max_iterations = 25;
  auto o_rep = omin_solve(op, f, x1, o_cfg);

  SolverConfig g_cfg;
  g_cfg.method = Method::gcr;
  g_cfg.tol = 1e-30;
  g_cfg.max_iterations = 25;
  auto g_rep = omin_solve(op, f, x2, g_cfg);

  const double r0 = o_rep.residual_history[0];
  const std::size_t len =
      std::min(o_rep.residual_history.size(), g_rep.residual_history.size());
  for (std::size_t t = 0; t < len; ++t) {
    if (o_rep.residual_history[t] < 1e-3 * r0) break;
    CHECK(oracle::rel_diff(o_rep.residual_history[t], g_rep.residual_history[t]) <=
          1e-10);
  }
}

TEST_CASE("omin debug checks hold on the convection problem", "[solvers]") {
  ProblemSpec spec;
  spec.nx = 7;
  auto prob = discretize(spec);
  LinearOperator op = as_operator(prob.a);
  std::vector<double> x = prob.x0;
  SolverConfig cfg;
  cfg.method = Method::omin;
  cfg.k = 4;
  cfg.tol = 1e-6;
  cfg.debug_checks = true;
  auto rep = omin_solve(op, prob.rhs, x, cfg);
  CHECK(rep.converged);
  // residual history never increases
  for (std::size_t t = 1; t < rep.residual_history.size(); ++t)
    CHECK(rep.residual_history[t] <=
          rep.residual_history[t - 1] * (1.0 + 1e-12));
}

TEST_CASE("gmres on the identity converges in one inner step", "[solvers]") {
  auto a = SparseMatrix::identity(6);
  LinearOperator op = as_operator(a);
  std::vector<double> f{1.0, -1.0, 2.0, 0.5, 3.0, -2.0};
  std::vector<double> x(6, 0.0);
  SolverConfig cfg;
  cfg.method = Method::gmres;
  cfg.m = 5;
  auto rep = gmres_solve(op, f, x, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
}

TEST_CASE("gmres full cycle matches the dense direct solve", "[solvers]") {
  std::mt19937 rng(123);
  auto dense = oracle::random_dense(rng, 20, 5.0);
  auto a = oracle::to_sparse(dense);
  LinearOperator op = as_operator(a);
  std::vector<double> f = oracle::random_vector(rng, 20);
  std::vector<double> x(20, 0.0);
  SolverConfig cfg;
  cfg.method = Method::gmres;
  cfg.m = 20;
  cfg.tol = 1e-12;
  auto rep = gmres_solve(op, f, x, cfg);
  CHECK(rep.converged);
  auto want = oracle::dense_solve(dense, f);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    num += (x[i] - want[i]) * (x[i] - want[i]);
    den += want[i] * want[i];
  }
  CHECK(std::sqrt(num) <= 1e-8 * std::sqrt(den));
}

TEST_CASE("gmres detects happy breakdown", "[solvers]") {
  // minimal polynomial (x-2)(x-3): the Krylov space closes after two steps
  auto a = SparseMatrix::from_triplets(
      5, 5, {{0, 0, 2.0}, {1, 1, 2.0}, {2, 2, 2.0}, {3, 3, 3.0}, {4, 4, 3.0}});
  LinearOperator op = as_operator(a);
  std::vector<double> f{1.0, 1.0, 1.0, 1.0, 1.0};
  std::vector<double> x(5, 0.0);
  SolverConfig cfg;
  cfg.method = Method::gmres;
  cfg.m = 5;
  cfg.tol = 1e-10;
  auto rep = gmres_solve(op, f, x, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 2);
}

TEST_CASE("gcr residual equals the gmres least-squares optimum", "[solvers]") {
  ProblemSpec spec;
  spec.nx = 7;
  auto prob = discretize(spec);
  LinearOperator op = as_operator(prob.a);
  const std::size_t j = 10;
  std::vector<double> x1 = prob.x0, x2 = prob.x0;

  SolverConfig gcr_cfg;
  gcr_cfg.method = Method::gcr;
  gcr_cfg.tol = 1e-30;
  gcr_cfg.max_iterations = j;
  auto gcr_rep = omin_solve(op, prob.rhs, x1, gcr_cfg);

  SolverConfig g_cfg;
  g_cfg.method = Method::gmres;
  g_cfg.m = j;
  g_cfg.tol = 1e-30;
  g_cfg.max_iterations = j;
  auto g_rep = gmres_solve(op, prob.rhs, x2, g_cfg);

  CHECK(oracle::rel_diff(gcr_rep.residual_history.back(),
                         g_rep.residual_history.back()) <= 1e-8);
}

TEST_CASE("arnoldi basis is orthonormal and reproduces the Hessenberg identity",
          "[solvers]") {
  ProblemSpec spec;
  spec.nx = 7;
  auto prob = discretize(spec);
  auto factors = ilu0_factor(prob.a);
  LinearOperator pre = right_preconditioned(prob.a, factors);

  auto res = arnoldi(pre, prob.rhs, 30);
  REQUIRE(res.steps == 30);
  const std::size_t jdim = res.q.size();
  double orth = 0.0;
  for (std::size_t i = 0; i < jdim; ++i)
    for (std::size_t j2 = 0; j2 < jdim; ++j2) {
      const double v = dot(res.q[i], res.q[j2]) - (i == j2 ? 1.0 : 0.0);
      orth += v * v;
    }
  CHECK(std::sqrt(orth) <= 1e-10);

  // H_j = Q_j^T A Q_j on the raw operator
  LinearOperator raw = as_operator(prob.a);
  auto raw_res = arnoldi(raw, prob.rhs, 20);
  REQUIRE(raw_res.steps == 20);
  double err = 0.0;
  for (std::size_t jc = 0; jc < 20; ++jc) {
    auto aq = raw(raw_res.q[jc]);
    for (std::size_t i = 0; i < 20; ++i) {
      const double hij = dot(raw_res.q[i], aq);
      const double d = hij - raw_res.h(i, jc);
      err += d * d;
    }
  }
  CHECK(std::sqrt(err) <= 1e-8 * prob.a.frobenius_norm());
}

TEST_CASE("gmres cycle residuals are monotone and restart-consistent", "[solvers]") {
  ProblemSpec spec;
  spec.nx = 7;
  auto prob = discretize(spec);
  LinearOperator op = as_operator(prob.a);
  std::vector<double> x = prob.x0;
  SolverConfig cfg;
  cfg.method = Method::gmres;
  cfg.m = 5;
  cfg.tol = 1e-6;
  cfg.max_iterations = 4000;
  auto rep = gmres_solve(op, prob.rhs, x, cfg);
  CHECK(rep.converged);
  for (std::size_t t = 1; t < rep.residual_history.size(); ++t)
    CHECK(rep.residual_history[t] <=
          rep.residual_history[t - 1] * (1.0 + 1e-10));
}
