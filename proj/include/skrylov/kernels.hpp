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

/// \file skrylov/kernels.hpp
/// \brief Vector kernels with a fixed, reproducible summation order.
///
/// Every reduction accumulates in ascending index order so that repeated
/// runs produce bit-identical results.

#ifndef SKRYLOV_KERNELS_HPP
#define SKRYLOV_KERNELS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace skrylov {

/// Numerical breakdown (singular Gram system, zero pivot, lost basis, ...).
class breakdown_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

/// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

/// v *= alpha
inline void scale(double alpha, std::span<double> v) {
  for (double& e : v) e *= alpha;
}

inline void copy_into(std::span<const double> src, std::span<double> dst) {
  require(src.size() == dst.size(), "copy_into: length mismatch");
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
}

inline bool is_zero(std::span<const double> v) {
  for (double e : v)
    if (e != 0.0) return false;
  return true;
}

/// max |v_i|
inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace skrylov

#endif  // SKRYLOV_KERNELS_HPP
