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

/// \file skrylov/block.hpp
/// \brief Blocks of direction vectors and the blocked (BLAS3-style) kernels
///        the s-step methods are built from.

#ifndef SKRYLOV_BLOCK_HPP
#define SKRYLOV_BLOCK_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "skrylov/dense_matrix.hpp"
#include "skrylov/kernels.hpp"
#include "skrylov/operator.hpp"

namespace skrylov {

/// An n x s block of dense vectors. Columns are stored contiguously so the
/// blocked kernels stream one column at a time.
class DirectionBlock {
 public:
  DirectionBlock() = default;
  DirectionBlock(std::size_t n, std::size_t s) : n_(n), s_(s), data_(n * s, 0.0) {
    require(s >= 1, "DirectionBlock: width must be at least 1");
  }

  std::size_t length() const { return n_; }
  std::size_t width() const { return s_; }

  std::span<double> column(std::size_t j) {
    return {data_.data() + j * n_, n_};
  }
  std::span<const double> column(std::size_t j) const {
    return {data_.data() + j * n_, n_};
  }

 private:
  std::size_t n_ = 0, s_ = 0;
  std::vector<double> data_;
};

/// [v, A v, ..., A^{s-1} v]; column 1 is v itself.
inline DirectionBlock krylov_block(const LinearOperator& op, std::span<const double> v,
                                   std::size_t s) {
  require(s >= 1, "krylov_block: s must be at least 1");
  require(v.size() == op.size(), "krylov_block: vector/operator dimension mismatch");
  DirectionBlock block(v.size(), s);
  copy_into(v, block.column(0));
  for (std::size_t j = 1; j < s; ++j) op.apply(block.column(j - 1), block.column(j));
  return block;
}

/// U^T V, entry (j, l) = <U col j, V col l>.
inline Matrix block_gram(const DirectionBlock& u, const DirectionBlock& v) {
  require(u.length() == v.length(), "block_gram: block lengths differ");
  Matrix g(u.width(), v.width());
  for (std::size_t j = 0; j < u.width(); ++j)
    for (std::size_t l = 0; l < v.width(); ++l) g(j, l) = dot(u.column(j), v.column(l));
  return g;
}

/// U^T U with both triangles computed, then averaged into exact symmetry
/// (downstream Cholesky requires it).
inline Matrix block_gram_self(const DirectionBlock& u) {
  Matrix g = block_gram(u, u);
  for (std::size_t j = 0; j < g.rows(); ++j)
    for (std::size_t l = 0; l < g.cols(); ++l) {
      if (j < l) {
        const double avg = (g(j, l) + g(l, j)) / 2.0;
        g(j, l) = avg;
        g(l, j) = avg;
      }
    }
  return g;
}

/// U^T r.
inline std::vector<double> block_dot(const DirectionBlock& u, std::span<const double> r) {
  require(u.length() == r.size(), "block_dot: length mismatch");
  std::vector<double> out(u.width(), 0.0);
  for (std::size_t j = 0; j < u.width(); ++j) out[j] = dot(u.column(j), r);
  return out;
}

/// y += X c with c a coefficient vector of length X.width().
inline void block_axpy_inplace(std::span<double> y, const DirectionBlock& x,
                               std::span<const double> c) {
  require(c.size() == x.width(), "block_axpy: coefficient length mismatch");
  for (std::size_t l = 0; l < x.width(); ++l) axpy(c[l], x.column(l), y);
}

/// Y += X C. One pass over X per result column.
inline void block_axpy_inplace(DirectionBlock& y, const DirectionBlock& x,
                               const Matrix& c) {
  require(y.length() == x.length(), "block_axpy: block lengths differ");
  require(c.rows() == x.width() && c.cols() == y.width(),
          "block_axpy: coefficient shape mismatch");
  for (std::size_t jc = 0; jc < y.width(); ++jc)
    for (std::size_t l = 0; l < x.width(); ++l) axpy(c(l, jc), x.column(l), y.column(jc));
}

/// Y + X C.
inline DirectionBlock block_axpy(const DirectionBlock& y, const DirectionBlock& x,
                                 const Matrix& c) {
  DirectionBlock out(y.length(), y.width());
  for (std::size_t j = 0; j < y.width(); ++j) copy_into(y.column(j), out.column(j));
  block_axpy_inplace(out, x, c);
  return out;
}

}  // namespace skrylov

#endif  // SKRYLOV_BLOCK_HPP
