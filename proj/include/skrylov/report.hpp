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

/// \file skrylov/report.hpp
/// \brief Operation counters and the per-solve report.

#ifndef SKRYLOV_REPORT_HPP
#define SKRYLOV_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace skrylov {

/// Vector-operation counters. Only length-n work is counted: inner products,
/// vector updates (axpy/scale) and operator applications. Termination-check
/// inner products are tallied separately so that audits against the method's
/// analytic costs can exclude them.
struct OpCounter {
  std::uint64_t dotprods = 0;
  std::uint64_t matvecs = 0;
  std::uint64_t vec_updates = 0;
  std::uint64_t stored_vectors = 0;  ///< peak live length-n vectors
  std::uint64_t termination_dots = 0;
};

inline OpCounter operator-(const OpCounter& a, const OpCounter& b) {
  OpCounter d;
  d.dotprods = a.dotprods - b.dotprods;
  d.matvecs = a.matvecs - b.matvecs;
  d.vec_updates = a.vec_updates - b.vec_updates;
  d.stored_vectors = a.stored_vectors;
  d.termination_dots = a.termination_dots - b.termination_dots;
  return d;
}

struct SolveReport {
  bool converged = false;
  /// Inner steps for the GMRES family summed over cycles; outer iterations
  /// for MR/Orthomin and their s-step forms.
  std::size_t iterations = 0;
  std::size_t cycles = 0;  ///< restarts taken (GMRES family)
  /// True-residual 2-norms at checkpoints: the initial residual, one entry
  /// per iteration (MR/Omin) or per restart cycle (GMRES), and the final
  /// recomputed residual appended by the driver.
  std::vector<double> residual_history;
  double final_residual = 0.0;
  OpCounter op_counts;
  /// Counter snapshots: [0] after setup, then one entry per *complete*
  /// iteration/cycle. Deltas between consecutive snapshots are what the
  /// op-count audit inspects.
  std::vector<OpCounter> op_history;
  /// Iteration index from which per-iteration costs are in steady state
  /// (window full); 0 for the GMRES family.
  std::size_t steady_iteration = 0;
  std::optional<std::string> breakdown;
  std::size_t fallback_cycles = 0;  ///< standard-GMRES fallbacks taken (s-GMRES)
  std::vector<std::string> notes;   ///< non-fatal warnings (e.g. s above the stability cap)
};

}  // namespace skrylov

#endif  // SKRYLOV_REPORT_HPP
