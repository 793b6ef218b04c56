// Copyright 2026 The Framescale Authors.
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

#ifndef FRAMESCALE_LINALG_HPP_
#define FRAMESCALE_LINALG_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace framescale {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Singular values at or below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-9;

/// Numerical rank: number of singular values above rel_tol * sigma_max.
/// A matrix with no columns, or all-zero entries, has rank 0.
int numerical_rank(const Eigen::Ref<const Matrix>& m,
                   double rel_tol = kRankTolerance);

/// Columns of `m` at the given positions, in order.
Matrix select_columns(const Matrix& m, std::span<const int> columns);

/// M^{-1/2} for symmetric positive definite M, via eigendecomposition.
/// Throws SingularMatrixError when M has a non-positive eigenvalue.
Matrix inverse_sqrt_spd(const Matrix& m);

/// Largest entry in absolute value.
double max_abs(const Eigen::Ref<const Matrix>& m);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

std::vector<double> to_std(const Vector& v);
Vector from_std(std::span<const double> v);

}  // namespace framescale

#endif  // FRAMESCALE_LINALG_HPP_
