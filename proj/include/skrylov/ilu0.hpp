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

/// \file skrylov/ilu0.hpp
/// \brief Zero-fill incomplete LU factorization on the matrix pattern and
///        the right-preconditioned operator A K^{-1}.

#ifndef SKRYLOV_ILU0_HPP
#define SKRYLOV_ILU0_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "skrylov/operator.hpp"
#include "skrylov/sparse.hpp"

namespace skrylov {

/// ILU(0) factors. L is unit lower triangular with the diagonal implicit;
/// U is upper triangular including the diagonal. Patterns are the strict
/// lower / upper parts of the source matrix, no fill-in.
struct Ilu0Factors {
  SparseMatrix l_unit;
  SparseMatrix u_upper;
};

/// Row-wise (IKJ-ordered) incomplete LU restricted to pattern(A). A pivot
/// with |U(i,i)| < 1e-14 * max |diag(A)| is reported as breakdown naming
/// the row.
inline Ilu0Factors ilu0_factor(const SparseMatrix& a) {
  require(a.rows() == a.cols(), "ilu0: matrix must be square");
  const std::size_t n = a.rows();
  const auto offs = a.row_offsets();
  const auto cols = a.col_indices();

  std::vector<double> lu(a.values().begin(), a.values().end());
  std::vector<std::size_t> diag(n);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    bool found = false;
    for (std::size_t p = offs[i]; p < offs[i + 1]; ++p)
      if (cols[p] == i) {
        diag[i] = p;
        found = true;
        max_diag = std::max(max_diag, std::abs(lu[p]));
      }
    require(found, "ilu0: row " + std::to_string(i + 1) + " has no diagonal entry");
  }
  const double pivot_floor = 1e-14 * max_diag;

  // position of each column of the current row, -1 when outside the pattern
  std::vector<std::ptrdiff_t> pos(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = offs[i]; p < offs[i + 1]; ++p)
      pos[cols[p]] = static_cast<std::ptrdiff_t>(p);
    for (std::size_t p = offs[i]; p < offs[i + 1] && cols[p] < i; ++p) {
      const std::size_t k = cols[p];
      if (std::abs(lu[diag[k]]) < pivot_floor)
        throw breakdown_error("ilu0: zero pivot at row " + std::to_string(k + 1));
      const double mult = lu[p] / lu[diag[k]];
      lu[p] = mult;
      for (std::size_t q = diag[k] + 1; q < offs[k + 1]; ++q) {
        const std::ptrdiff_t w = pos[cols[q]];
        if (w >= 0) lu[static_cast<std::size_t>(w)] -= mult * lu[q];
      }
    }
    if (std::abs(lu[diag[i]]) < pivot_floor)
      throw breakdown_error("ilu0: zero pivot at row " + std::to_string(i + 1));
    for (std::size_t p = offs[i]; p < offs[i + 1]; ++p) pos[cols[p]] = -1;
  }

  std::vector<std::tuple<std::size_t, std::size_t, double>> lent, uent;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = offs[i]; p < offs[i + 1]; ++p) {
      if (cols[p] < i)
        lent.emplace_back(i, cols[p], lu[p]);
      else
        uent.emplace_back(i, cols[p], lu[p]);
    }
  return {SparseMatrix::from_triplets(n, n, std::move(lent)),
          SparseMatrix::from_triplets(n, n, std::move(uent))};
}

/// z with L U z = r: forward substitution on unit L, then backward on U.
inline void ilu0_apply(const Ilu0Factors& f, std::span<const double> r,
                       std::span<double> z) {
  const std::size_t n = f.u_upper.rows();
  require(r.size() == n && z.size() == n, "ilu0_apply: dimension mismatch");
  const auto loffs = f.l_unit.row_offsets();
  const auto lcols = f.l_unit.col_indices();
  const auto lvals = f.l_unit.values();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = r[i];
    for (std::size_t p = loffs[i]; p < loffs[i + 1]; ++p) acc -= lvals[p] * z[lcols[p]];
    z[i] = acc;
  }
  const auto uoffs = f.u_upper.row_offsets();
  const auto ucols = f.u_upper.col_indices();
  const auto uvals = f.u_upper.values();
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = z[ii];
    double dia = 0.0;
    for (std::size_t p = uoffs[ii]; p < uoffs[ii + 1]; ++p) {
      if (ucols[p] == ii)
        dia = uvals[p];
      else
        acc -= uvals[p] * z[ucols[p]];
    }
    z[ii] = acc / dia;
  }
}

inline std::vector<double> ilu0_apply(const Ilu0Factors& f, std::span<const double> r) {
  std::vector<double> z(r.size(), 0.0);
  ilu0_apply(f, r, z);
  return z;
}

/// v -> A (L U)^{-1} v. The solvers iterate on this operator with the
/// right-hand side unchanged, so the residual they minimize is the true
/// residual of the original system. Applies are pure and safe to run
/// concurrently on shared factors.
inline LinearOperator right_preconditioned(const SparseMatrix& a, const Ilu0Factors& f) {
  require(a.rows() == a.cols(), "right_preconditioned: matrix must be square");
  return LinearOperator(a.rows(),
                        [&a, &f](std::span<const double> x, std::span<double> y) {
                          std::vector<double> tmp(x.size());
                          ilu0_apply(f, x, tmp);
                          spmv(a, tmp, y);
                        });
}

}  // namespace skrylov

#endif  // SKRYLOV_ILU0_HPP
