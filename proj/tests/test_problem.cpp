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

#include <cstdio>
#include <fstream>

#include "skrylov/problem.hpp"
#include "support/oracles.hpp"

using namespace skrylov;

TEST_CASE("coefficient functions at reference points", "[problem]") {
  auto c0 = coefficients(0.0, 0.0, 1.0, 50.0);
  CHECK(c0.b == 1.0);
  CHECK(c0.c == 1.0);
  CHECK(c0.d == 0.0);
  CHECK(c0.e == 0.0);
  CHECK(c0.f == 1.0);

  auto c1 = coefficients(1.0, 1.0, 1.0, 50.0);
  CHECK(oracle::rel_diff(c1.b, std::exp(-1.0)) <= 1e-15);
  CHECK(oracle::rel_diff(c1.c, std::exp(1.0)) <= 1e-15);
  CHECK(c1.d == 2.0);
  CHECK(c1.e == 100.0);
  CHECK(c1.f == 0.5);

  auto ch = coefficients(0.5, 0.5, 1.0, 50.0);
  CHECK(oracle::rel_diff(ch.b, std::exp(-0.25)) <= 1e-15);
  CHECK(oracle::rel_diff(ch.c, std::exp(0.25)) <= 1e-15);
  CHECK(ch.d == 1.0);
  CHECK(ch.e == 50.0);
  CHECK(oracle::rel_diff(ch.f, 0.8) <= 1e-15);
}

TEST_CASE("initial guess follows the mod-50 sawtooth", "[problem]") {
  auto x = initial_guess(60);
  CHECK(x[0] == 0.05);
  CHECK(x[1] == 0.10);
  CHECK(x[2] == Catch::Approx(0.15).margin(1e-15));
  CHECK(x[49] == 0.0);   // entry 50
  CHECK(x[50] == 0.05);  // entry 51
}

TEST_CASE("pure Laplacian override reproduces the classic stencil", "[problem]") {
  const std::size_t nx = 3;
  const double h = 1.0 / 4.0;
  auto prob = assemble(nx, constant_coefficient_problem(1.0, 1.0, 0.0, 0.0, 0.0));
  const double ih2 = 1.0 / (h * h);
  for (std::size_t row = 0; row < 9; ++row) {
    CHECK(oracle::rel_diff(prob.a.at(row, row), 4.0 * ih2) <= 1e-14);
    for (std::size_t col = 0; col < 9; ++col) {
      const double v = prob.a.at(row, col);
      if (col == row) continue;
      if (v != 0.0) CHECK(oracle::rel_diff(v, -ih2) <= 1e-14);
    }
  }
}

TEST_CASE("constant-coefficient convection rows sum to zero inside", "[problem]") {
  const std::size_t nx = 5;
  auto prob = assemble(nx, constant_coefficient_problem(0.0, 0.0, 3.0, 7.0, 0.0));
  // rows whose grid point has all four neighbors interior
  for (std::size_t j = 2; j < nx; ++j)
    for (std::size_t i = 2; i < nx; ++i) {
      const std::size_t row = (j - 1) * nx + (i - 1);
      double sum = 0.0;
      for (std::size_t col = 0; col < nx * nx; ++col) sum += prob.a.at(row, col);
      CHECK(std::abs(sum) <= 1e-12);
    }
}

TEST_CASE("five-point pattern and structural symmetry", "[problem]") {
  ProblemSpec spec;
  spec.nx = 6;
  auto prob = discretize(spec);
  const auto offs = prob.a.row_offsets();
  for (std::size_t i = 0; i < prob.a.rows(); ++i) {
    const std::size_t count = offs[i + 1] - offs[i];
    CHECK(count >= 1);
    CHECK(count <= 5);
  }
  // structural symmetry: (i,j) in pattern iff (j,i) in pattern
  const auto cols = prob.a.col_indices();
  for (std::size_t i = 0; i < prob.a.rows(); ++i)
    for (std::size_t p = offs[i]; p < offs[i + 1]; ++p)
      CHECK(prob.a.at(cols[p], i) != 0.0);
}

TEST_CASE("diffusion-only assembly is numerically symmetric", "[problem]") {
  ProblemFunctions p = paper_problem(1.0, 50.0);
  p.d = [](double, double) { return 0.0; };
  p.e = [](double, double) { return 0.0; };
  p.f = [](double, double) { return 0.0; };
  auto prob = assemble(7, p);
  double asym = 0.0;
  for (std::size_t i = 0; i < prob.a.rows(); ++i)
    for (std::size_t j = 0; j < prob.a.cols(); ++j) {
      const double d = prob.a.at(i, j) - prob.a.at(j, i);
      asym += d * d;
    }
  CHECK(std::sqrt(asym) <= 1e-12 * prob.a.frobenius_norm());
}

TEST_CASE("truncation error decays at second order", "[problem]") {
  auto tau = [](std::size_t nx) {
    ProblemSpec spec;
    spec.nx = nx;
    auto prob = discretize(spec);
    auto au = spmv(prob.a, prob.u_true);
    double m = 0.0;
    for (std::size_t i = 0; i < au.size(); ++i)
      m = std::max(m, std::abs(au[i] - prob.rhs[i]));
    return m;
  };
  const double t3 = tau(3);   // h = 1/4
  const double t7 = tau(7);   // h = 1/8
  const double ratio = t3 / t7;
  CHECK(ratio >= 2.5);
  CHECK(ratio <= 6.0);
}

TEST_CASE("manufactured solution converges at second order", "[problem]") {
  auto err = [](std::size_t nx) {
    ProblemSpec spec;
    spec.nx = nx;
    auto prob = discretize(spec);
    auto uh = oracle::dense_solve(oracle::to_dense(prob.a), prob.rhs);
    double m = 0.0;
    for (std::size_t i = 0; i < uh.size(); ++i)
      m = std::max(m, std::abs(uh[i] - prob.u_true[i]));
    return m;
  };
  const double ratio = err(7) / err(15);
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("problem export writes matrix market plus sidecar", "[problem]") {
  ProblemSpec spec;
  spec.nx = 3;
  auto prob = discretize(spec);
  const std::string base = "export_test_problem";
  export_problem(prob, spec, base);
  auto back = read_matrix_market(base + ".mtx");
  CHECK(back.rows() == 9);
  CHECK(back.nnz() == prob.a.nnz());
  std::ifstream side(base + ".json");
  std::string text((std::istreambuf_iterator<char>(side)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("\"nx\": 3") != std::string::npos);
  CHECK(text.find("\"gamma\": 50") != std::string::npos);
  std::remove((base + ".mtx").c_str());
  std::remove((base + ".json").c_str());
}

TEST_CASE("assemble rejects empty grids", "[problem]") {
  CHECK_THROWS_AS(assemble(0, paper_problem(1.0, 50.0)), std::invalid_argument);
}
