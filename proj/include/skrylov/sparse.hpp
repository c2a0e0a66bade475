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

/// \file skrylov/sparse.hpp
/// \brief Compressed-sparse-row matrix storage and the matrix-vector kernel.

#ifndef SKRYLOV_SPARSE_HPP
#define SKRYLOV_SPARSE_HPP

#include <algorithm>
#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "skrylov/kernels.hpp"
#include "skrylov/operator.hpp"

namespace skrylov {

/// CSR matrix. The constructor enforces the storage invariants: offsets
/// non-decreasing starting at zero, column indices strictly increasing
/// within each row and smaller than the column count.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  SparseMatrix(std::size_t n_rows, std::size_t n_cols,
               std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values)
      : n_rows_(n_rows),
        n_cols_(n_cols),
        row_offsets_(std::move(row_offsets)),
        col_indices_(std::move(col_indices)),
        values_(std::move(values)) {
    require(row_offsets_.size() == n_rows_ + 1, "SparseMatrix: bad offset length");
    require(row_offsets_.front() == 0, "SparseMatrix: offsets must start at 0");
    require(row_offsets_.back() == values_.size() &&
                col_indices_.size() == values_.size(),
            "SparseMatrix: offset/value length mismatch");
    for (std::size_t i = 0; i < n_rows_; ++i) {
      require(row_offsets_[i] <= row_offsets_[i + 1],
              "SparseMatrix: offsets not non-decreasing");
      for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
        require(col_indices_[p] < n_cols_, "SparseMatrix: column index out of range");
        require(p == row_offsets_[i] || col_indices_[p - 1] < col_indices_[p],
                "SparseMatrix: columns not strictly increasing within a row");
      }
    }
  }

  /// Build from (row, col, value) triplets; sorts row-major and rejects
  /// duplicate positions.
  static SparseMatrix from_triplets(
      std::size_t n_rows, std::size_t n_cols,
      std::vector<std::tuple<std::size_t, std::size_t, double>> entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return std::tie(std::get<0>(a), std::get<1>(a)) <
             std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::size_t> offsets(n_rows + 1, 0), cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t t = 0; t < entries.size(); ++t) {
      auto [i, j, v] = entries[t];
      require(i < n_rows && j < n_cols, "from_triplets: index out of range");
      if (t > 0) {
        auto [pi, pj, pv] = entries[t - 1];
        (void)pv;
        require(pi != i || pj != j, "from_triplets: duplicate entry");
      }
      offsets[i + 1]++;
      cols.push_back(j);
      vals.push_back(v);
    }
    for (std::size_t i = 0; i < n_rows; ++i) offsets[i + 1] += offsets[i];
    return SparseMatrix(n_rows, n_cols, std::move(offsets), std::move(cols),
                        std::move(vals));
  }

  static SparseMatrix identity(std::size_t n) {
    std::vector<std::size_t> offs(n + 1), cols(n);
    std::vector<double> vals(n, 1.0);
    for (std::size_t i = 0; i <= n; ++i) offs[i] = i;
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    return SparseMatrix(n, n, std::move(offs), std::move(cols), std::move(vals));
  }

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  std::size_t nnz() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Stored value at (i, j), 0 when the position is not in the pattern.
  double at(std::size_t i, std::size_t j) const {
    auto b = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    auto e = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    auto it = std::lower_bound(b, e, j);
    if (it == e || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
  }

  double frobenius_norm() const {
    double acc = 0.0;
    for (double v : values_) acc += v * v;
    return std::sqrt(acc);
  }

 private:
  std::size_t n_rows_ = 0, n_cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// y = A x, accumulated in ascending column order within each row.
inline void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  require(x.size() == a.cols(), "spmv: x length != column count");
  require(y.size() == a.rows(), "spmv: y length != row count");
  const auto offs = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t p = offs[i]; p < offs[i + 1]; ++p) acc += vals[p] * x[cols[p]];
    y[i] = acc;
  }
}

inline std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows(), 0.0);
  spmv(a, x, y);
  return y;
}

/// Wrap a square matrix as an operator. Binds by reference.
inline LinearOperator as_operator(const SparseMatrix& a) {
  require(a.rows() == a.cols(), "as_operator: matrix must be square");
  return LinearOperator(a.rows(), [&a](std::span<const double> x, std::span<double> y) {
    spmv(a, x, y);
  });
}

}  // namespace skrylov

#endif  // SKRYLOV_SPARSE_HPP
