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

#include "framescale/linalg.hpp"

#include <limits>

#include "framescale/error.hpp"

namespace framescale {

int numerical_rank(const Eigen::Ref<const Matrix>& m, double rel_tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  if (!(sigma_max > 0.0)) return 0;
  int rank = 0;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > rel_tol * sigma_max) ++rank;
  }
  return rank;
}

Matrix select_columns(const Matrix& m, std::span<const int> columns) {
  Matrix out(m.rows(), static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    out.col(static_cast<Index>(k)) = m.col(columns[k]);
  }
  return out;
}

Matrix inverse_sqrt_spd(const Matrix& m) {
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success) {
    throw SingularMatrixError("eigendecomposition failed");
  }
  const Vector& lambda = eig.eigenvalues();
  if (!(lambda.minCoeff() > 0.0)) {
    throw SingularMatrixError("matrix is not positive definite");
  }
  const Vector inv_sqrt = lambda.array().rsqrt();
  return eig.eigenvectors() * inv_sqrt.asDiagonal() *
         eig.eigenvectors().transpose();
}

double max_abs(const Eigen::Ref<const Matrix>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step.
    const std::uint64_t factor = static_cast<std::uint64_t>(n - k + i);
    if (result > kMax / factor) return kMax;
    result = result * factor / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector from_std(std::span<const double> v) {
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Index>(i)) = v[i];
  return out;
}

}  // namespace framescale
