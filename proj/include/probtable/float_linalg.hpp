// Copyright 2026 The probtable Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include "probtable/matrix.hpp"

namespace probtable {

std::vector<double> singular_values(const Matrix<double>& m);

/// Numerical rank: number of singular values above `tol_rank`;
/// tol_rank <= 0 selects max(L,M) * sigma_max * machine epsilon.
std::size_t svd_rank(const Matrix<double>& m, double tol_rank = 0.0);

/// Minimum-norm least-squares solution of A x = b (column-pivoting QR).
std::vector<double> least_squares(const Matrix<double>& a,
                                  const std::vector<double>& b);

/// Least squares constrained to the affine hyperplane n . x = offset.
std::vector<double> least_squares_on_hyperplane(const Matrix<double>& a,
                                                const std::vector<double>& b,
                                                const std::vector<double>& n,
                                                double offset);

}  // namespace probtable
