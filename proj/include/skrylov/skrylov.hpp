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

/// \file skrylov/skrylov.hpp
/// \brief Umbrella header.

#ifndef SKRYLOV_SKRYLOV_HPP
#define SKRYLOV_SKRYLOV_HPP

#include "skrylov/accounting.hpp"
#include "skrylov/bench.hpp"
#include "skrylov/block.hpp"
#include "skrylov/dense_matrix.hpp"
#include "skrylov/ilu0.hpp"
#include "skrylov/kernels.hpp"
#include "skrylov/matrix_market.hpp"
#include "skrylov/operator.hpp"
#include "skrylov/problem.hpp"
#include "skrylov/report.hpp"
#include "skrylov/small_dense.hpp"
#include "skrylov/solvers.hpp"
#include "skrylov/sparse.hpp"
#include "skrylov/sstep.hpp"

#endif  // SKRYLOV_SKRYLOV_HPP
