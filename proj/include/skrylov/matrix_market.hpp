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

/// \file skrylov/matrix_market.hpp
/// \brief Matrix Market coordinate I/O ("matrix coordinate real general",
///        1-based indices).

#ifndef SKRYLOV_MATRIX_MARKET_HPP
#define SKRYLOV_MATRIX_MARKET_HPP

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "skrylov/sparse.hpp"

namespace skrylov {

inline SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "matrix market: empty stream");
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    require(banner == "%%MatrixMarket" && object == "matrix" &&
                format == "coordinate" && field == "real" && symmetry == "general",
            "matrix market: expected 'matrix coordinate real general' header");
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::size_t rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    require(static_cast<bool>(ss >> rows >> cols >> nnz), "matrix market: bad size line");
  }
  std::vector<std::tuple<std::size_t, std::size_t, double>> entries;
  entries.reserve(nnz);
  for (std::size_t t = 0; t < nnz; ++t) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    require(static_cast<bool>(in >> i >> j >> v), "matrix market: truncated entry list");
    require(i >= 1 && j >= 1 && i <= rows && j <= cols,
            "matrix market: entry index out of range");
    entries.emplace_back(i - 1, j - 1, v);
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(entries));
}

inline SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "matrix market: cannot open " + path);
  return read_matrix_market(in);
}

inline void write_matrix_market(const SparseMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << " " << a.cols() << " " << a.nnz() << "\n";
  const auto offs = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  char buf[64];
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t p = offs[i]; p < offs[i + 1]; ++p) {
      std::snprintf(buf, sizeof(buf), "%.17g", vals[p]);
      out << (i + 1) << " " << (cols[p] + 1) << " " << buf << "\n";
    }
}

inline void write_matrix_market(const SparseMatrix& a, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), "matrix market: cannot open " + path + " for writing");
  write_matrix_market(a, out);
}

}  // namespace skrylov

#endif  // SKRYLOV_MATRIX_MARKET_HPP
