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

#include "skrylov/bench.hpp"
#include "support/oracles.hpp"

using namespace skrylov;

namespace {

RunConfig small_sweep_config() {
  nlohmann::json j = {
      {"problem", {{"nx", nlohmann::json::array({5, 7})}, {"beta", 1.0}, {"gamma", 50.0}}},
      {"methods",
       nlohmann::json::array(
           {{{"method", "omin"}, {"s", 1}, {"k", 4}, {"precond", "ilu0"}},
            {{"method", "somin"}, {"s", 2}, {"k", 2}, {"precond", "ilu0"}},
            {{"method", "gmres"}, {"s", 1}, {"m", 10}, {"precond", "ilu0"}},
            {{"method", "sgmres"}, {"s", 2}, {"m", 5}, {"precond", "ilu0"}}})},
      {"termination", 1e-6},
      {"audit", "bounded"}};
  return parse_run_config(j);
}

}  // namespace

TEST_CASE("solve_linear converges on the full Krylov space", "[bench]") {
  ProblemSpec spec;
  spec.nx = 3;
  auto prob = discretize(spec);
  MethodSpec ms;
  ms.method = "gmres";
  ms.m = 9;
  SolveSettings st;
  auto out = solve_linear(prob.a, prob.rhs, prob.x0, ms, st);
  CHECK(out.report.converged);
  CHECK(out.report.final_residual <= 1e-6);
  CHECK(out.report.residual_history.back() == out.report.final_residual);
}

TEST_CASE("strict termination squares the threshold", "[bench]") {
  ProblemSpec spec;
  spec.nx = 5;
  auto prob = discretize(spec);
  MethodSpec ms;
  ms.method = "gmres";
  ms.m = 25;
  ms.precondition = true;
  SolveSettings st;
  st.tol = 1e-5;
  st.strict_termination = true;
  auto out = solve_linear(prob.a, prob.rhs, prob.x0, ms, st);
  CHECK(out.report.converged);
  CHECK(out.report.final_residual <= 1e-10);
}

TEST_CASE("preconditioned solves keep the true residual", "[bench]") {
  ProblemSpec spec;
  spec.nx = 7;
  auto prob = discretize(spec);
  for (const char* method : {"omin", "somin", "gmres", "sgmres"}) {
    MethodSpec ms;
    ms.method = method;
    ms.s = ms.sstep_family() ? 2 : 1;
    ms.k = 4;
    ms.m = 10;
    ms.precondition = true;
    SolveSettings st;
    auto out = solve_linear(prob.a, prob.rhs, prob.x0, ms, st);
    INFO(method);
    CHECK(out.report.converged);
    CHECK(out.report.final_residual <= 1e-6);
  }
}

TEST_CASE("sweep reports are deterministic", "[bench]") {
  RunConfig rc = small_sweep_config();
  auto cells1 = run_sweep(rc);
  auto cells2 = run_sweep(rc);
  REQUIRE(cells1.size() == cells2.size());
  for (std::size_t i = 0; i < cells1.size(); ++i) {
    const std::string a = report_to_json(cells1[i]).dump(2);
    const std::string b = report_to_json(cells2[i]).dump(2);
    CHECK(a == b);
  }
}

TEST_CASE("iteration table has the published column shape", "[bench]") {
  RunConfig rc = small_sweep_config();
  auto cells = run_sweep(rc);
  const std::string table = emit_table_text(cells, "iterations");
  CHECK(table.find("s=1,k=4") != std::string::npos);
  CHECK(table.find("s=2,k=2") != std::string::npos);
  CHECK(table.find("s=1,m=10") != std::string::npos);
  CHECK(table.find("s=2,m=5") != std::string::npos);
  CHECK(table.find("dimension") != std::string::npos);
  // 2 problem rows
  CHECK(table.find("\n5 ") != std::string::npos);
  CHECK(table.find("\n7 ") != std::string::npos);
}

TEST_CASE("csv columns follow the report schema", "[bench]") {
  RunConfig rc = small_sweep_config();
  rc.problems.resize(1);
  auto cells = run_sweep(rc);
  const std::string csv = emit_table_csv(cells);
  CHECK(csv.rfind("nx,method,s,k_or_m,preconditioned,iterations,matvecs,dotprods,"
                  "updates,final_residual,converged,breakdown\n",
                  0) == 0);
  // one line per cell plus the header
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == cells.size() + 1);
}

TEST_CASE("single report renders a one-cell table", "[bench]") {
  RunConfig rc = small_sweep_config();
  rc.problems.resize(1);
  rc.methods.resize(1);
  auto cells = run_sweep(rc);
  REQUIRE(cells.size() == 1);
  const std::string table = emit_table_text(cells, "iterations");
  CHECK(table.find("s=1,k=4") != std::string::npos);
}

TEST_CASE("diverged and errored cells render explicit markers", "[bench]") {
  CellResult div;
  div.problem_label = "9";
  div.method.method = "omin";
  div.outcome = SolveOutcome{};
  div.outcome->report.converged = false;
  div.outcome->report.iterations = 17;
  div.outcome->report.breakdown = "divergence: residual grew beyond 10x";
  CellResult err;
  err.problem_label = "9";
  err.method.method = "gmres";
  err.error = "assembly failed";
  const std::string table = emit_table_text({div, err}, "iterations");
  CHECK(table.find("DIV(17)") != std::string::npos);
  CHECK(table.find("ERR") != std::string::npos);
}

TEST_CASE("opcounts layout reports matvecs", "[bench]") {
  RunConfig rc = small_sweep_config();
  rc.problems.resize(1);
  rc.methods.resize(1);
  auto cells = run_sweep(rc);
  const std::string table = emit_table_text(cells, "opcounts");
  CHECK(table.find("operator applications") != std::string::npos);
  const auto& rep = cells[0].outcome->report;
  CHECK(table.find(std::to_string(rep.op_counts.matvecs)) != std::string::npos);
}

TEST_CASE("external matrix-market problems run through the sweep", "[bench]") {
  ProblemSpec spec;
  spec.nx = 5;
  auto prob = discretize(spec);
  const std::string path = "bench_external_test.mtx";
  write_matrix_market(prob.a, path);

  nlohmann::json j = {{"problem", {{"matrix_market", path}}},
                      {"methods", nlohmann::json::array(
                                      {{{"method", "gmres"}, {"m", 10}, {"precond", "ilu0"}}})},
                      {"termination", 1e-8}};
  RunConfig rc = parse_run_config(j);
  auto cells = run_sweep(rc);
  REQUIRE(cells.size() == 1);
  REQUIRE(cells[0].error.empty());
  CHECK(cells[0].outcome->report.converged);
  std::remove(path.c_str());
}

TEST_CASE("run config validation", "[bench]") {
  nlohmann::json j = {{"problem", {{"nx", 5}}}, {"methods", nlohmann::json::array()}};
  CHECK_THROWS_AS(parse_run_config(j), std::invalid_argument);
  nlohmann::json j2 = {{"problem", {{"nx", 5}}},
                       {"methods", nlohmann::json::array({{{"method", "gmres"}}})},
                       {"termination", -1.0}};
  CHECK_THROWS_AS(parse_run_config(j2), std::invalid_argument);
}

TEST_CASE("audit verdicts are embedded in reports", "[bench]") {
  ProblemSpec spec;
  spec.nx = 7;
  auto prob = discretize(spec);
  MethodSpec ms;
  ms.method = "omin";
  ms.k = 4;
  SolveSettings st;
  st.audit = AuditMode::exact;
  auto out = solve_linear(prob.a, prob.rhs, prob.x0, ms, st);
  REQUIRE(out.audit.has_value());
  CHECK(out.audit->ok);
  CellResult cell;
  cell.problem_label = "7";
  cell.nx = 7;
  cell.method = ms;
  cell.outcome = out;
  auto j = report_to_json(cell);
  CHECK(j["audit"]["ok"].get<bool>());
}
