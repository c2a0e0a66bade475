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

// solverbench: run one solve or a whole problem x method sweep of the
// convection-diffusion benchmark and emit iteration tables and JSON reports.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "skrylov/skrylov.hpp"

namespace {

int run_solve(std::size_t nx, double beta, double gamma, const skrylov::MethodSpec& ms,
              const skrylov::SolveSettings& settings, const std::string& out_path) {
  skrylov::ProblemSpec spec;
  spec.nx = nx;
  spec.beta = beta;
  spec.gamma = gamma;
  skrylov::DiscretizedProblem prob = skrylov::discretize(spec);

  skrylov::CellResult cell;
  cell.problem_label = std::to_string(nx);
  cell.nx = nx;
  cell.method = ms;
  try {
    cell.outcome = skrylov::solve_linear(prob.a, prob.rhs, prob.x0, ms, settings);
  } catch (const std::exception& e) {
    cell.error = e.what();
  }

  if (!cell.error.empty()) {
    std::cerr << "solve failed: " << cell.error << "\n";
    return 1;
  }
  const skrylov::SolveReport& rep = cell.outcome->report;
  std::cout << "method " << ms.label() << (ms.precondition ? " + ILU(0)" : "")
            << " on nx=" << nx << " (n=" << nx * nx << ")\n"
            << "  converged:      " << (rep.converged ? "yes" : "no") << "\n"
            << "  iterations:     " << rep.iterations << "\n";
  if (rep.cycles > 0) std::cout << "  cycles:         " << rep.cycles << "\n";
  std::cout << "  final residual: " << rep.final_residual << "\n"
            << "  matvecs:        " << rep.op_counts.matvecs << "\n"
            << "  dot products:   " << rep.op_counts.dotprods << " (+"
            << rep.op_counts.termination_dots << " termination)\n"
            << "  vector updates: " << rep.op_counts.vec_updates << "\n";
  if (rep.breakdown) std::cout << "  breakdown:      " << *rep.breakdown << "\n";
  for (const std::string& note : rep.notes) std::cout << "  note: " << note << "\n";
  if (cell.outcome->audit) {
    const skrylov::AuditReport& a = *cell.outcome->audit;
    std::cout << "  audit:          " << (a.ok ? "ok" : "MISMATCH") << "\n";
    for (const std::string& d : a.diffs) std::cout << "    " << d << "\n";
  }
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out.good()) {
      std::cerr << "cannot open " << out_path << "\n";
      return 1;
    }
    out << skrylov::report_to_json(cell).dump(2) << "\n";
    std::cout << "  report:         " << out_path << "\n";
  }
  return rep.converged ? 0 : 2;
}

int run_sweep_cmd(const std::string& config_path, std::string out_dir,
                  const std::string& layout) {
  std::ifstream in(config_path);
  if (!in.good()) {
    std::cerr << "cannot open config " << config_path << "\n";
    return 1;
  }
  nlohmann::json cfg_json = nlohmann::json::parse(in);
  skrylov::RunConfig rc = skrylov::parse_run_config(cfg_json);
  if (out_dir.empty()) out_dir = rc.output.empty() ? "." : rc.output;
  std::filesystem::create_directories(out_dir);

  std::vector<skrylov::CellResult> cells = skrylov::run_sweep(rc);

  const std::string table = skrylov::emit_table_text(cells, layout);
  std::cout << table;
  {
    std::ofstream t(out_dir + "/table.txt");
    t << table;
    std::ofstream c(out_dir + "/table.csv");
    c << skrylov::emit_table_csv(cells);
  }
  for (const skrylov::CellResult& cell : cells) {
    std::string name = "report_nx" + cell.problem_label + "_" + cell.method.method +
                       "_s" + std::to_string(cell.method.s);
    if (cell.method.method != "mr" && cell.method.method != "smr")
      name += (cell.method.method == "gmres" || cell.method.method == "sgmres")
                  ? "_m" + std::to_string(cell.method.m)
                  : "_k" + std::to_string(cell.method.k);
    if (cell.method.precondition) name += "_ilu0";
    std::ofstream out(out_dir + "/" + name + ".json");
    out << skrylov::report_to_json(cell).dump(2) << "\n";
  }
  std::cout << "reports written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"s-step Krylov solver benchmark"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "solve one generated problem");
  std::size_t nx = 64;
  double beta = 1.0, gamma = 50.0;
  std::string method = "gmres";
  skrylov::MethodSpec ms;
  skrylov::SolveSettings settings;
  std::string audit = "off";
  std::string out_path;
  solve->add_option("--nx", nx, "interior grid points per direction")->required();
  solve->add_option("--beta", beta, "convection scale in x (default 1)");
  solve->add_option("--gamma", gamma, "convection scale in y (default 50)");
  solve->add_option("--method", method, "mr|omin|gcr|gmres|somin|sgcr|sgmres")
      ->check(CLI::IsMember({"mr", "omin", "gcr", "gmres", "somin", "sgcr", "sgmres"}))
      ->required();
  solve->add_option("--s", ms.s, "s-step block size (default 1)");
  solve->add_option("--k", ms.k, "Orthomin window (default 4)");
  solve->add_option("--m", ms.m, "GMRES restart length (default 10)");
  std::string precond = "none";
  solve->add_option("--precond", precond, "ilu0|none")
      ->check(CLI::IsMember({"ilu0", "none"}));
  solve->add_option("--tol", settings.tol, "termination threshold on ||r||_2");
  solve->add_option("--max-iter", settings.max_iterations, "iteration cap");
  solve->add_flag("--strict-termination", settings.strict_termination,
                  "terminate on ||r||_2 < tol^2 (literal fourth-root reading)");
  solve->add_option("--audit", audit, "exact|bounded|off")
      ->check(CLI::IsMember({"exact", "bounded", "off"}));
  solve->add_option("--out", out_path, "write the JSON report here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a problem x method sweep");
  std::string config_path, out_dir, layout = "iterations";
  sweep->add_option("--config", config_path, "sweep config JSON")->required();
  sweep->add_option("--out-dir", out_dir, "output directory");
  sweep->add_option("--table", layout, "iterations|opcounts")
      ->check(CLI::IsMember({"iterations", "opcounts"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(solve)) {
      ms.method = method;
      ms.precondition = precond == "ilu0";
      settings.audit = audit == "exact"    ? skrylov::AuditMode::exact
                       : audit == "bounded" ? skrylov::AuditMode::bounded
                                            : skrylov::AuditMode::off;
      return run_solve(nx, beta, gamma, ms, settings, out_path);
    }
    return run_sweep_cmd(config_path, out_dir, layout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
