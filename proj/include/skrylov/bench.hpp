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

/// \file skrylov/bench.hpp
/// \brief Benchmark driver: problem x method sweeps, termination handling,
///        op-count audits, and table / JSON report emission.

#ifndef SKRYLOV_BENCH_HPP
#define SKRYLOV_BENCH_HPP

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "skrylov/accounting.hpp"
#include "skrylov/ilu0.hpp"
#include "skrylov/matrix_market.hpp"
#include "skrylov/problem.hpp"
#include "skrylov/solvers.hpp"
#include "skrylov/sstep.hpp"

namespace skrylov {

struct MethodSpec {
  std::string method;  ///< mr|omin|gcr|gmres|smr|somin|sgcr|sgmres
  std::size_t s = 1;
  std::size_t k = 4;
  std::size_t m = 10;
  bool precondition = false;

  bool sstep_family() const {
    return method == "smr" || method == "somin" || method == "sgcr" ||
           method == "sgmres";
  }

  /// Column label in the iteration table, e.g. "s=2,k=2" or "s=1,m=10".
  std::string label() const {
    if (method == "mr") return "mr";
    if (method == "smr") return "s=" + std::to_string(s) + ",mr";
    if (method == "gcr" || method == "sgcr") return "s=" + std::to_string(s) + ",gcr";
    if (method == "omin" || method == "somin")
      return "s=" + std::to_string(s) + ",k=" + std::to_string(k);
    return "s=" + std::to_string(s) + ",m=" + std::to_string(m);
  }

  std::size_t k_or_m() const {
    if (method == "gmres" || method == "sgmres") return m;
    if (method == "mr" || method == "smr") return 0;
    return k;
  }
};

struct SolveSettings {
  double tol = 1e-6;
  bool strict_termination = false;  ///< literal reading: ||r||_2 < tol^2
  std::size_t max_iterations = 100000;
  AuditMode audit = AuditMode::off;
  bool debug_checks = false;
};

struct SolveOutcome {
  std::vector<double> x;
  SolveReport report;
  std::optional<AuditReport> audit;
};

namespace detail {

inline SolveReport dispatch_method(const LinearOperator& op, std::span<const double> rhs,
                                   std::vector<double>& x, const MethodSpec& ms,
                                   double threshold, const SolveSettings& st) {
  if (!ms.sstep_family()) {
    SolverConfig cfg;
    cfg.k = ms.k;
    cfg.m = ms.m;
    cfg.tol = threshold;
    cfg.max_iterations = st.max_iterations;
    cfg.precondition = ms.precondition;
    cfg.debug_checks = st.debug_checks;
    if (ms.method == "mr")
      cfg.method = Method::mr;
    else if (ms.method == "omin")
      cfg.method = Method::omin;
    else if (ms.method == "gcr")
      cfg.method = Method::gcr;
    else if (ms.method == "gmres")
      cfg.method = Method::gmres;
    else
      throw std::invalid_argument("unknown method: " + ms.method);
    return standard_solve(op, rhs, x, cfg);
  }
  SStepConfig cfg;
  cfg.s = ms.s;
  cfg.k = ms.k;
  cfg.m = ms.m;
  cfg.tol = threshold;
  cfg.max_iterations = st.max_iterations;
  cfg.precondition = ms.precondition;
  cfg.unbounded_window = ms.method == "sgcr";
  cfg.debug_checks = st.debug_checks;
  if (ms.method == "smr") return smr_solve(op, rhs, x, cfg);
  if (ms.method == "somin" || ms.method == "sgcr") return somin_solve(op, rhs, x, cfg);
  if (ms.method == "sgmres") return sgmres_solve(op, rhs, x, cfg);
  throw std::invalid_argument("unknown method: " + ms.method);
}

inline std::optional<AuditReport> run_audit(const SolveReport& rep, const MethodSpec& ms,
                                            AuditMode mode) {
  if (mode == AuditMode::off) return std::nullopt;
  if (ms.method == "omin")
    return audit(rep, predicted_omin(ms.k, ms.k, 1), mode, somin_audit_slack(1));
  if (ms.method == "somin")
    return audit(rep, predicted_omin(ms.k, ms.k, ms.s), mode, somin_audit_slack(ms.s));
  if (ms.method == "gmres")
    return audit(rep, predicted_gmres(ms.m, 1).gmres, mode, gmres_audit_slack());
  if (ms.method == "sgmres" && ms.s > 1)
    return audit(rep, predicted_gmres(ms.m, ms.s).sgmres, mode,
                 sgmres_audit_slack(ms.m, ms.s));
  if (ms.method == "sgmres")  // s = 1 shares the standard GMRES path
    return audit(rep, predicted_gmres(ms.m, 1).gmres, mode, gmres_audit_slack());
  return std::nullopt;  // mr/smr/gcr/sgcr have no published table to audit
}

}  // namespace detail

/// Solve A x = f from guess x0 with the given method. Right preconditioning
/// iterates the preconditioned variable from zero (x = x0 + K^{-1} w), so
/// the residual the solver minimizes is the true residual throughout. The
/// final true residual is always recomputed and appended to the history.
inline SolveOutcome solve_linear(const SparseMatrix& a, std::span<const double> f,
                                 std::span<const double> x0, const MethodSpec& ms,
                                 const SolveSettings& st) {
  require(a.rows() == a.cols(), "solve_linear: matrix must be square");
  require(f.size() == a.rows() && x0.size() == a.rows(),
          "solve_linear: rhs/guess dimension mismatch");
  const double threshold = st.strict_termination ? st.tol * st.tol : st.tol;

  SolveOutcome out;
  out.x.assign(x0.begin(), x0.end());

  if (ms.precondition) {
    Ilu0Factors factors = ilu0_factor(a);
    LinearOperator op = right_preconditioned(a, factors);
    std::vector<double> r0 = spmv(a, out.x);
    for (std::size_t i = 0; i < r0.size(); ++i) r0[i] = f[i] - r0[i];
    std::vector<double> w(a.rows(), 0.0);
    out.report = detail::dispatch_method(op, r0, w, ms, threshold, st);
    out.report.op_counts.matvecs += 1;  // driver-side initial residual
    out.report.op_counts.vec_updates += 1;
    std::vector<double> z = ilu0_apply(factors, w);
    axpy(1.0, z, out.x);
    out.report.op_counts.vec_updates += 1;
  } else {
    LinearOperator op = as_operator(a);
    out.report = detail::dispatch_method(op, f, out.x, ms, threshold, st);
  }

  std::vector<double> ax = spmv(a, out.x);
  out.report.op_counts.matvecs += 1;
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] = f[i] - ax[i];
  out.report.op_counts.vec_updates += 1;
  out.report.op_counts.termination_dots += 1;
  const double true_norm = norm2(ax);
  out.report.residual_history.push_back(true_norm);
  out.report.final_residual = true_norm;
  if (out.report.converged && true_norm > threshold) {
    out.report.converged = false;
    out.report.breakdown = "recomputed true residual exceeds the threshold";
  }
  out.audit = detail::run_audit(out.report, ms, st.audit);
  return out;
}

struct RunConfig {
  std::vector<ProblemSpec> problems;  ///< ignored when matrix_market set
  std::string matrix_market;
  std::vector<MethodSpec> methods;
  SolveSettings settings;
  std::string output;
};

struct CellResult {
  std::string problem_label;
  std::size_t nx = 0;  ///< 0 for external matrices
  MethodSpec method;
  std::optional<SolveOutcome> outcome;
  std::string error;
};

inline MethodSpec parse_method(const nlohmann::json& j) {
  MethodSpec ms;
  ms.method = j.at("method").get<std::string>();
  if (j.contains("s")) ms.s = j["s"].get<std::size_t>();
  if (j.contains("k")) ms.k = j["k"].get<std::size_t>();
  if (j.contains("m")) ms.m = j["m"].get<std::size_t>();
  if (j.contains("precond")) {
    const auto p = j["precond"];
    if (p.is_string())
      ms.precondition = p.get<std::string>() == "ilu0";
    else
      ms.precondition = p.get<bool>();
  }
  return ms;
}

inline RunConfig parse_run_config(const nlohmann::json& j) {
  RunConfig rc;
  const auto& prob = j.at("problem");
  if (prob.contains("matrix_market")) {
    rc.matrix_market = prob["matrix_market"].get<std::string>();
  } else {
    ProblemSpec base;
    if (prob.contains("beta")) base.beta = prob["beta"].get<double>();
    if (prob.contains("gamma")) base.gamma = prob["gamma"].get<double>();
    const auto& nx = prob.at("nx");
    if (nx.is_array())
      for (const auto& v : nx) {
        ProblemSpec p = base;
        p.nx = v.get<std::size_t>();
        rc.problems.push_back(p);
      }
    else {
      base.nx = nx.get<std::size_t>();
      rc.problems.push_back(base);
    }
  }
  for (const auto& mj : j.at("methods")) rc.methods.push_back(parse_method(mj));
  require(!rc.methods.empty(), "run config: at least one method required");
  if (j.contains("termination")) rc.settings.tol = j["termination"].get<double>();
  require(rc.settings.tol > 0, "run config: termination threshold must be positive");
  if (j.contains("strict_termination"))
    rc.settings.strict_termination = j["strict_termination"].get<bool>();
  if (j.contains("max_iterations"))
    rc.settings.max_iterations = j["max_iterations"].get<std::size_t>();
  if (j.contains("audit")) {
    const std::string a = j["audit"].get<std::string>();
    rc.settings.audit = a == "exact"    ? AuditMode::exact
                        : a == "bounded" ? AuditMode::bounded
                                         : AuditMode::off;
  }
  if (j.contains("output")) rc.output = j["output"].get<std::string>();
  return rc;
}

/// Run every problem x method cell. Breakdowns and assembly errors are
/// recorded per cell; the sweep continues. Cells are ordered by config
/// position, so repeated runs of the same config are byte-identical.
inline std::vector<CellResult> run_sweep(const RunConfig& rc) {
  std::vector<CellResult> cells;
  struct Instance {
    std::string label;
    std::size_t nx;
    SparseMatrix a;
    std::vector<double> f, x0;
  };
  std::vector<Instance> instances;
  if (!rc.matrix_market.empty()) {
    Instance inst;
    inst.label = rc.matrix_market;
    inst.nx = 0;
    inst.a = read_matrix_market(rc.matrix_market);
    require(inst.a.rows() == inst.a.cols(), "sweep: external matrix must be square");
    std::vector<double> ones(inst.a.rows(), 1.0);
    inst.f = spmv(inst.a, ones);  // manufactured unit solution
    inst.x0 = initial_guess(inst.a.rows());
    instances.push_back(std::move(inst));
  } else {
    for (const ProblemSpec& spec : rc.problems) {
      Instance inst;
      inst.label = std::to_string(spec.nx);
      inst.nx = spec.nx;
      DiscretizedProblem prob = discretize(spec);
      inst.a = std::move(prob.a);
      inst.f = std::move(prob.rhs);
      inst.x0 = std::move(prob.x0);
      instances.push_back(std::move(inst));
    }
  }
  for (const Instance& inst : instances)
    for (const MethodSpec& ms : rc.methods) {
      CellResult cell;
      cell.problem_label = inst.label;
      cell.nx = inst.nx;
      cell.method = ms;
      try {
        cell.outcome = solve_linear(inst.a, inst.f, inst.x0, ms, rc.settings);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  return cells;
}

namespace detail {

inline std::string cell_text(const CellResult& cell, bool opcounts) {
  if (!cell.error.empty()) return "ERR";
  if (!cell.outcome) return "--";
  const SolveReport& rep = cell.outcome->report;
  const std::size_t value = opcounts ? rep.op_counts.matvecs : rep.iterations;
  if (rep.converged) return std::to_string(value);
  if (rep.breakdown && rep.breakdown->rfind("divergence", 0) == 0)
    return "DIV(" + std::to_string(rep.iterations) + ")";
  if (rep.breakdown) return "BRK(" + std::to_string(rep.iterations) + ")";
  return "MAX(" + std::to_string(rep.iterations) + ")";
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Text table: rows are problem dimensions, columns the methods, cells the
/// iteration counts (layout "iterations") or operator applications
/// (layout "opcounts"). Follows the shape of the published iteration table.
inline std::string emit_table_text(const std::vector<CellResult>& cells,
                                   const std::string& layout) {
  const bool opcounts = layout == "opcounts";
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  for (const CellResult& c : cells) {
    if (std::find(rows.begin(), rows.end(), c.problem_label) == rows.end())
      rows.push_back(c.problem_label);
    const std::string lab = c.method.label();
    if (std::find(columns.begin(), columns.end(), lab) == columns.end())
      columns.push_back(lab);
  }
  auto lookup = [&](const std::string& row, const std::string& col) -> std::string {
    for (const CellResult& c : cells)
      if (c.problem_label == row && c.method.label() == col)
        return detail::cell_text(c, opcounts);
    return "--";
  };
  std::size_t wid = 9;
  for (const auto& c : columns) wid = std::max(wid, c.size() + 2);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(wid)) << "dimension";
  for (const auto& c : columns) os << "| " << std::setw(static_cast<int>(wid)) << c;
  os << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(static_cast<int>(wid)) << r;
    for (const auto& c : columns) os << "| " << std::setw(static_cast<int>(wid)) << lookup(r, c);
    os << "\n";
  }
  os << "\n"
     << (opcounts ? "cells: operator applications (matvecs)\n"
                  : "cells: iterations\n")
     << "counting: Omin/MR families report outer iterations (one s-step each);\n"
     << "          the GMRES family reports inner steps summed over cycles.\n"
     << "markers: DIV(n) diverged, BRK(n) breakdown, MAX(n) iteration cap, ERR failed,\n"
     << "         -- missing cell.\n";
  return os.str();
}

/// CSV with one line per cell.
inline std::string emit_table_csv(const std::vector<CellResult>& cells) {
  std::ostringstream os;
  os << "nx,method,s,k_or_m,preconditioned,iterations,matvecs,dotprods,updates,"
        "final_residual,converged,breakdown\n";
  for (const CellResult& c : cells) {
    os << c.problem_label << "," << c.method.method << "," << c.method.s << ","
       << c.method.k_or_m() << "," << (c.method.precondition ? 1 : 0) << ",";
    if (c.outcome) {
      const SolveReport& rep = c.outcome->report;
      os << rep.iterations << "," << rep.op_counts.matvecs << ","
         << rep.op_counts.dotprods << "," << rep.op_counts.vec_updates << ","
         << detail::format_double(rep.final_residual) << ","
         << (rep.converged ? 1 : 0) << ","
         << (rep.breakdown ? *rep.breakdown : "");
    } else {
      os << ",,,,,0," << c.error;
    }
    os << "\n";
  }
  return os.str();
}

inline nlohmann::ordered_json report_to_json(const CellResult& cell) {
  nlohmann::ordered_json j;
  j["nx"] = cell.nx;
  j["problem"] = cell.problem_label;
  j["method"] = cell.method.method;
  j["s"] = cell.method.s;
  j["k_or_m"] = cell.method.k_or_m();
  j["preconditioned"] = cell.method.precondition;
  if (!cell.error.empty()) {
    j["error"] = cell.error;
    return j;
  }
  const SolveReport& rep = cell.outcome->report;
  j["iterations"] = rep.iterations;
  j["cycles"] = rep.cycles;
  j["matvecs"] = rep.op_counts.matvecs;
  j["dotprods"] = rep.op_counts.dotprods;
  j["updates"] = rep.op_counts.vec_updates;
  j["termination_dots"] = rep.op_counts.termination_dots;
  j["stored_vectors"] = rep.op_counts.stored_vectors;
  j["final_residual"] = rep.final_residual;
  j["converged"] = rep.converged;
  j["breakdown"] = rep.breakdown ? nlohmann::ordered_json(*rep.breakdown)
                                 : nlohmann::ordered_json(nullptr);
  j["fallback_cycles"] = rep.fallback_cycles;
  j["residual_history"] = rep.residual_history;
  if (!rep.notes.empty()) j["notes"] = rep.notes;
  if (cell.outcome->audit) {
    const AuditReport& a = *cell.outcome->audit;
    nlohmann::ordered_json aj;
    aj["ok"] = a.ok;
    aj["matvecs_exact"] = a.matvecs_exact;
    aj["dotprods_exact"] = a.dotprods_exact;
    aj["updates_exact"] = a.updates_exact;
    aj["diffs"] = a.diffs;
    j["audit"] = aj;
  } else {
    j["audit"] = nullptr;
  }
  return j;
}

}  // namespace skrylov

#endif  // SKRYLOV_BENCH_HPP
