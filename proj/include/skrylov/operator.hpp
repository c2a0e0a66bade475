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

/// \file skrylov/operator.hpp
/// \brief Type-erased square linear operator handed to the solvers.

#ifndef SKRYLOV_OPERATOR_HPP
#define SKRYLOV_OPERATOR_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "skrylov/kernels.hpp"

namespace skrylov {

/// A square operator v -> A v. Wrappers bind their operand by reference;
/// the caller keeps the underlying matrix/factors alive for the solve.
class LinearOperator {
 public:
  using apply_fn = std::function<void(std::span<const double>, std::span<double>)>;

  LinearOperator() = default;
  LinearOperator(std::size_t n, apply_fn fn) : n_(n), fn_(std::move(fn)) {}

  std::size_t size() const { return n_; }

  void apply(std::span<const double> x, std::span<double> y) const {
    require(x.size() == n_ && y.size() == n_, "LinearOperator: dimension mismatch");
    fn_(x, y);
  }

  std::vector<double> operator()(std::span<const double> x) const {
    std::vector<double> y(n_, 0.0);
    apply(x, y);
    return y;
  }

 private:
  std::size_t n_ = 0;
  apply_fn fn_;
};

}  // namespace skrylov

#endif  // SKRYLOV_OPERATOR_HPP
