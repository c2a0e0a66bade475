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

// Brute-force oracles for the test suites. Everything here is deliberately
// naive (dense storage, textbook elimination) and independent of the
// library's code paths.

#ifndef SKRYLOV_TESTS_ORACLES_HPP
#define SKRYLOV_TESTS_ORACLES_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "skrylov/sparse.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const skrylov::SparseMatrix& a) {
  Dense d(a.rows(), std::vector<double>(a.cols(), 0.0));
  const auto offs = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = offs[i]; p < offs[i + 1]; ++p) d[i][cols[p]] = vals[p];
  return d;
}

inline std::vector<double> dense_matvec(const Dense& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    if (a[piv][col] == 0.0) throw std::runtime_error("dense_solve: singular matrix");
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double m = a[i][col] / a[col][col];
      if (m == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[i][j] -= m * a[col][j];
      b[i] -= m * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= a[ii][j] * x[j];
    x[ii] = acc / a[ii][ii];
  }
  return x;
}

// LU without pivoting; returns (L with unit diagonal, U). Used as the exact
// reference for ILU(0) on matrices whose LU has no fill.
inline std::pair<Dense, Dense> dense_lu_nopivot(Dense a) {
  const std::size_t n = a.size();
  Dense l(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) l[i][i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    if (a[col][col] == 0.0) throw std::runtime_error("dense_lu: zero pivot");
    for (std::size_t i = col + 1; i < n; ++i) {
      const double m = a[i][col] / a[col][col];
      l[i][col] = m;
      for (std::size_t j = col; j < n; ++j) a[i][j] -= m * a[col][j];
    }
  }
  return {l, a};
}

// min_c || r - B c ||_2 by normal equations; returns the attained residual
// norm. B is given column-wise.
inline double lsq_residual_norm(const std::vector<std::vector<double>>& b_cols,
                                const std::vector<double>& r) {
  const std::size_t m = b_cols.size();
  Dense g(m, std::vector<double>(m, 0.0));
  std::vector<double> rhs(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t t = 0; t < r.size(); ++t) g[i][j] += b_cols[i][t] * b_cols[j][t];
    for (std::size_t t = 0; t < r.size(); ++t) rhs[i] += b_cols[i][t] * r[t];
  }
  std::vector<double> c = dense_solve(g, rhs);
  double acc = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    double e = r[t];
    for (std::size_t i = 0; i < m; ++i) e -= b_cols[i][t] * c[i];
    acc += e * e;
  }
  return std::sqrt(acc);
}

inline std::vector<double> random_vector(std::mt19937& rng, std::size_t n,
                                         double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& e : v) e = dist(rng);
  return v;
}

// Dense random matrix shifted to be comfortably nonsingular.
inline Dense random_dense(std::mt19937& rng, std::size_t n, double diag_shift) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Dense a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = dist(rng);
  for (std::size_t i = 0; i < n; ++i) a[i][i] += diag_shift;
  return a;
}

inline skrylov::SparseMatrix to_sparse(const Dense& a) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != 0.0) entries.emplace_back(i, j, a[i][j]);
  return skrylov::SparseMatrix::from_triplets(a.size(), a.empty() ? 0 : a[0].size(),
                                              std::move(entries));
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle

#endif  // SKRYLOV_TESTS_ORACLES_HPP
