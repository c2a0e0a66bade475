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

/// \file skrylov/small_dense.hpp
/// \brief Small dense solves: s x s Gram systems, block-diagonal Cholesky,
///        and incremental Givens least squares for Hessenberg systems.

#ifndef SKRYLOV_SMALL_DENSE_HPP
#define SKRYLOV_SMALL_DENSE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "skrylov/dense_matrix.hpp"
#include "skrylov/kernels.hpp"

namespace skrylov {

/// Factored symmetric s x s Gram system. Cholesky when positive definite;
/// when a Cholesky pivot drops below 1e-13 * trace / s the factorization
/// falls back to LDL^T with symmetric diagonal pivoting. A pivot ratio
/// below 1e-15 is reported as breakdown: the s-step basis has lost
/// independence.
class GramSolver {
 public:
  explicit GramSolver(Matrix w) : w_(std::move(w)), order_(w_.rows()) {
    require(w_.rows() == w_.cols(), "GramSolver: matrix not square");
    require(order_ >= 1, "GramSolver: empty matrix");
    if (order_ == 1) {
      // Scalar case solved by plain division; this is also what keeps the
      // s = 1 block methods arithmetically identical to their standard
      // counterparts.
      pivots_ = {w_(0, 0)};
      if (w_(0, 0) == 0.0)
        throw breakdown_error("sym_solve: singular 1x1 Gram system");
      return;
    }
    if (!try_cholesky()) factor_ldlt();
    double pmin = std::abs(pivots_[0]), pmax = pmin;
    for (double p : pivots_) {
      pmin = std::min(pmin, std::abs(p));
      pmax = std::max(pmax, std::abs(p));
    }
    if (pmax == 0.0 || pmin / pmax < 1e-15)
      throw breakdown_error("sym_solve: numerically singular Gram system (pivot ratio " +
                            std::to_string(pmax == 0.0 ? 0.0 : pmin / pmax) + ")");
  }

  std::size_t order() const { return order_; }
  bool used_ldlt() const { return used_ldlt_; }
  std::span<const double> pivots() const { return pivots_; }

  /// min |pivot| / max |pivot|; crude conditioning estimate.
  double pivot_ratio() const {
    double pmin = std::abs(pivots_[0]), pmax = pmin;
    for (double p : pivots_) {
      pmin = std::min(pmin, std::abs(p));
      pmax = std::max(pmax, std::abs(p));
    }
    return pmax == 0.0 ? 0.0 : pmin / pmax;
  }

  std::vector<double> solve(std::span<const double> rhs) const {
    require(rhs.size() == order_, "sym_solve: rhs length mismatch");
    if (order_ == 1) return {rhs[0] / w_(0, 0)};
    std::vector<double> x(order_);
    if (!used_ldlt_) {
      // L L^T x = rhs
      for (std::size_t i = 0; i < order_; ++i) {
        double acc = rhs[i];
        for (std::size_t k = 0; k < i; ++k) acc -= fac_(i, k) * x[k];
        x[i] = acc / fac_(i, i);
      }
      for (std::size_t ii = order_; ii-- > 0;) {
        double acc = x[ii];
        for (std::size_t k = ii + 1; k < order_; ++k) acc -= fac_(k, ii) * x[k];
        x[ii] = acc / fac_(ii, ii);
      }
      return x;
    }
    // P^T W P = L D L^T; solve via permuted forward/backward sweeps.
    std::vector<double> b(order_);
    for (std::size_t i = 0; i < order_; ++i) b[i] = rhs[perm_[i]];
    for (std::size_t i = 0; i < order_; ++i) {
      double acc = b[i];
      for (std::size_t k = 0; k < i; ++k) acc -= fac_(i, k) * b[k];
      b[i] = acc;
    }
    for (std::size_t i = 0; i < order_; ++i) b[i] /= pivots_[i];
    for (std::size_t ii = order_; ii-- > 0;) {
      double acc = b[ii];
      for (std::size_t k = ii + 1; k < order_; ++k) acc -= fac_(k, ii) * b[k];
      b[ii] = acc;
    }
    for (std::size_t i = 0; i < order_; ++i) x[perm_[i]] = b[i];
    return x;
  }

  /// Column-wise solve: returns W^{-1} rhs.
  Matrix solve(const Matrix& rhs) const {
    require(rhs.rows() == order_, "sym_solve: rhs row count mismatch");
    Matrix x(order_, rhs.cols());
    std::vector<double> col(order_);
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
      for (std::size_t i = 0; i < order_; ++i) col[i] = rhs(i, j);
      auto sol = solve(col);
      for (std::size_t i = 0; i < order_; ++i) x(i, j) = sol[i];
    }
    return x;
  }

 private:
  bool try_cholesky() {
    const double floor = 1e-13 * std::abs(w_.trace()) / static_cast<double>(order_);
    fac_ = Matrix(order_, order_);
    pivots_.assign(order_, 0.0);
    for (std::size_t j = 0; j < order_; ++j) {
      double d = w_(j, j);
      for (std::size_t k = 0; k < j; ++k) d -= fac_(j, k) * fac_(j, k);
      if (d <= floor) return false;
      pivots_[j] = d;
      fac_(j, j) = std::sqrt(d);
      for (std::size_t i = j + 1; i < order_; ++i) {
        double acc = w_(i, j);
        for (std::size_t k = 0; k < j; ++k) acc -= fac_(i, k) * fac_(j, k);
        fac_(i, j) = acc / fac_(j, j);
      }
    }
    return true;
  }

  void factor_ldlt() {
    used_ldlt_ = true;
    Matrix m = w_;
    perm_.resize(order_);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    fac_ = Matrix(order_, order_);
    pivots_.assign(order_, 0.0);
    for (std::size_t j = 0; j < order_; ++j) {
      std::size_t p = j;
      for (std::size_t i = j + 1; i < order_; ++i)
        if (std::abs(m(i, i)) > std::abs(m(p, p))) p = i;
      if (p != j) {
        for (std::size_t t = 0; t < order_; ++t) std::swap(m(j, t), m(p, t));
        for (std::size_t t = 0; t < order_; ++t) std::swap(m(t, j), m(t, p));
        for (std::size_t t = 0; t < j; ++t) std::swap(fac_(j, t), fac_(p, t));
        std::swap(perm_[j], perm_[p]);
      }
      const double d = m(j, j);
      pivots_[j] = d;
      fac_(j, j) = 1.0;
      if (d == 0.0) continue;  // remaining pivots stay zero; ratio check rejects
      for (std::size_t i = j + 1; i < order_; ++i) fac_(i, j) = m(i, j) / d;
      for (std::size_t i = j + 1; i < order_; ++i)
        for (std::size_t k = j + 1; k <= i; ++k) {
          m(i, k) -= fac_(i, j) * d * fac_(k, j);
          m(k, i) = m(i, k);
        }
    }
  }

  Matrix w_;
  std::size_t order_;
  Matrix fac_;
  std::vector<double> pivots_;
  std::vector<std::size_t> perm_;
  bool used_ldlt_ = false;
};

/// Upper-triangular Cholesky factor: R^T R = W. Breakdown when W is not
/// positive definite.
inline Matrix cholesky_upper(const Matrix& w) {
  require(w.rows() == w.cols(), "cholesky_upper: matrix not square");
  const std::size_t n = w.rows();
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = w(i, i);
    for (std::size_t k = 0; k < i; ++k) d -= r(k, i) * r(k, i);
    if (d <= 0.0) throw breakdown_error("cholesky: matrix not positive definite");
    r(i, i) = std::sqrt(d);
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = w(i, j);
      for (std::size_t k = 0; k < i; ++k) acc -= r(k, i) * r(k, j);
      r(i, j) = acc / r(i, i);
    }
  }
  return r;
}

/// Factor of the block-diagonal Gram matrix D = diag(W_1, ..., W_k, t) with
/// trailing scalar t > 0. Returns the block-diagonal matrix L with
/// upper-triangular blocks satisfying L^T L = D; this orientation makes
/// L e_1 = ||v_1|| e_1 hold structurally.
inline Matrix block_cholesky(std::span<const Matrix> blocks, double trailing_scalar) {
  std::size_t n = 1;
  for (const Matrix& b : blocks) n += b.rows();
  Matrix l(n, n);
  std::size_t off = 0;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    Matrix r;
    try {
      r = cholesky_upper(blocks[bi]);
    } catch (const breakdown_error&) {
      throw breakdown_error("block_cholesky: block " + std::to_string(bi + 1) +
                            " not positive definite");
    }
    for (std::size_t i = 0; i < r.rows(); ++i)
      for (std::size_t j = 0; j < r.cols(); ++j) l(off + i, off + j) = r(i, j);
    off += r.rows();
  }
  if (trailing_scalar <= 0.0)
    throw breakdown_error("block_cholesky: trailing scalar not positive");
  l(off, off) = std::sqrt(trailing_scalar);
  return l;
}

/// Incremental QR of a Hessenberg-banded least-squares system
/// min || beta e_1 - G y || via Givens rotations. Columns arrive one at a
/// time with entries down to one row past the diagonal; the residual norm
/// of the growing system is available after every column.
class HessenbergLsq {
 public:
  explicit HessenbergLsq(double beta) : rhs_{beta}, residual_(std::abs(beta)) {}

  std::size_t columns() const { return rcols_.size(); }
  double residual_norm() const { return residual_; }

  double min_abs_diag() const {
    double m = rcols_.empty() ? 0.0 : std::abs(rcols_[0][0]);
    for (std::size_t j = 0; j < rcols_.size(); ++j) m = std::min(m, std::abs(rcols_[j][j]));
    return m;
  }

  /// Frobenius norm of the columns appended so far.
  double matrix_norm() const { return std::sqrt(gnorm_sq_); }

  /// Append column j (0-based) with entries for rows 0..j+1. Returns the
  /// least-squares residual norm of the extended system.
  double append_column(std::vector<double> col) {
    const std::size_t j = rcols_.size();
    require(col.size() == j + 2, "hessenberg lsq: column must reach one row below diagonal");
    for (double e : col) gnorm_sq_ += e * e;
    for (std::size_t t = 0; t < j; ++t) {
      const double a = col[t], b = col[t + 1];
      col[t] = cos_[t] * a + sin_[t] * b;
      col[t + 1] = -sin_[t] * a + cos_[t] * b;
    }
    const double a = col[j], b = col[j + 1];
    const double r = std::hypot(a, b);
    double c = 1.0, s = 0.0;
    if (r != 0.0) {
      c = a / r;
      s = b / r;
    }
    cos_.push_back(c);
    sin_.push_back(s);
    col[j] = r;
    col.pop_back();
    rcols_.push_back(std::move(col));
    rhs_.push_back(0.0);
    const double ra = rhs_[j], rb = rhs_[j + 1];
    rhs_[j] = c * ra + s * rb;
    rhs_[j + 1] = -s * ra + c * rb;
    residual_ = std::abs(rhs_[j + 1]);
    return residual_;
  }

  /// Solution of the current system by back substitution.
  std::vector<double> solve() const {
    const std::size_t m = rcols_.size();
    const double tol = 1e-14 * matrix_norm();
    std::vector<double> y(m, 0.0);
    for (std::size_t ii = m; ii-- > 0;) {
      double acc = rhs_[ii];
      for (std::size_t k = ii + 1; k < m; ++k) acc -= rcols_[k][ii] * y[k];
      if (std::abs(rcols_[ii][ii]) <= tol)
        throw breakdown_error("hessenberg lsq: rank-deficient R diagonal at column " +
                              std::to_string(ii + 1));
      y[ii] = acc / rcols_[ii][ii];
    }
    return y;
  }

 private:
  std::vector<std::vector<double>> rcols_;  // column j holds R rows 0..j
  std::vector<double> cos_, sin_, rhs_;
  double residual_;
  double gnorm_sq_ = 0.0;
};

struct LsqSolution {
  std::vector<double> y;
  double residual_norm = 0.0;
};

/// One-shot min_y || beta e_1 - G y ||_2 for a Hessenberg-banded G
/// (entries at most one row below the diagonal).
inline LsqSolution hessenberg_lsq(const Matrix& g, double beta) {
  require(g.rows() >= g.cols() + 1, "hessenberg_lsq: G must have more rows than columns");
  require(beta >= 0.0, "hessenberg_lsq: beta must be non-negative");
  HessenbergLsq lsq(beta);
  for (std::size_t j = 0; j < g.cols(); ++j) {
    for (std::size_t i = j + 2; i < g.rows(); ++i)
      require(g(i, j) == 0.0, "hessenberg_lsq: G is not Hessenberg-banded");
    std::vector<double> col(j + 2);
    for (std::size_t i = 0; i <= j + 1; ++i) col[i] = g(i, j);
    lsq.append_column(std::move(col));
  }
  LsqSolution out;
  out.y = lsq.solve();
  out.residual_norm = lsq.residual_norm();
  return out;
}

}  // namespace skrylov

#endif  // SKRYLOV_SMALL_DENSE_HPP
