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

#include "framescale/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>

#include "framescale/error.hpp"

namespace framescale::kernels {
namespace {

constexpr Index kReductionBlock = 64;
constexpr std::uint64_t kSearchChunk = 2048;
constexpr int kMaxMaskBits = 20;

void check_mask_size(const Matrix& vectors) {
  if (vectors.cols() > kMaxMaskBits) {
    throw SizeLimitExceeded("subset rank table limited to 20 vectors");
  }
}

void gather_mask(const Matrix& vectors, std::uint32_t mask, Matrix& out) {
  const int count = std::popcount(mask);
  out.resize(vectors.rows(), count);
  Index k = 0;
  for (Index i = 0; i < vectors.cols(); ++i) {
    if (mask & (1u << i)) out.col(k++) = vectors.col(i);
  }
}

void gather_combo(const Matrix& vectors, std::span<const int> combo,
                  Matrix& out) {
  out.resize(vectors.rows(), static_cast<Index>(combo.size()));
  for (std::size_t k = 0; k < combo.size(); ++k) {
    out.col(static_cast<Index>(k)) = vectors.col(combo[k]);
  }
}

}  // namespace

int max_threads() { return omp_get_max_threads(); }

void unrank_combination(std::uint64_t rank, int n, int k, std::span<int> out) {
  int candidate = 0;
  for (int pos = 0; pos < k; ++pos) {
    for (;;) {
      const std::uint64_t below = binomial(n - candidate - 1, k - pos - 1);
      if (rank < below) break;
      rank -= below;
      ++candidate;
    }
    out[static_cast<std::size_t>(pos)] = candidate++;
  }
}

bool next_combination(std::span<int> combo, int n) {
  const int k = static_cast<int>(combo.size());
  int i = k - 1;
  while (i >= 0 && combo[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++combo[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) {
    combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
  }
  return true;
}

bool columns_independent(const Matrix& sub, double rel_tol) {
  if (sub.cols() > sub.rows()) return false;
  if (sub.cols() == 0) return true;
  if (sub.rows() == sub.cols()) {
    const Eigen::PartialPivLU<Matrix> lu(sub);
    const Matrix inverse = lu.inverse();
    const double denom = sub.norm() * inverse.norm();
    // The factor 2 keeps rounding in the bound itself away from the cutoff.
    if (std::isfinite(denom) && denom > 0.0 && 1.0 / denom > 2.0 * rel_tol) {
      return true;
    }
  }
  return numerical_rank(sub, rel_tol) == sub.cols();
}

namespace serial {

Matrix frame_operator(const Matrix& vectors) {
  Matrix s = Matrix::Zero(vectors.rows(), vectors.rows());
  for (Index i = 0; i < vectors.cols(); ++i) {
    s.noalias() += vectors.col(i) * vectors.col(i).transpose();
  }
  return s;
}

Matrix weighted_frame_operator(const Matrix& vectors, const Vector& weights) {
  Matrix s = Matrix::Zero(vectors.rows(), vectors.rows());
  for (Index i = 0; i < vectors.cols(); ++i) {
    s.noalias() += weights(i) * vectors.col(i) * vectors.col(i).transpose();
  }
  return s;
}

std::vector<std::uint8_t> subset_ranks(const Matrix& vectors, double rel_tol) {
  check_mask_size(vectors);
  const std::uint32_t total = 1u << vectors.cols();
  std::vector<std::uint8_t> ranks(total, 0);
  Matrix sub;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    gather_mask(vectors, mask, sub);
    ranks[mask] = static_cast<std::uint8_t>(numerical_rank(sub, rel_tol));
  }
  return ranks;
}

std::optional<std::vector<int>> first_dependent_subset(const Matrix& vectors,
                                                       int k, double rel_tol) {
  const int n = static_cast<int>(vectors.cols());
  if (k <= 0 || k > n) return std::nullopt;
  std::vector<int> combo(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) combo[static_cast<std::size_t>(i)] = i;
  Matrix sub;
  do {
    gather_combo(vectors, combo, sub);
    if (numerical_rank(sub, rel_tol) < k) return combo;
  } while (next_combination(combo, n));
  return std::nullopt;
}

}  // namespace serial

namespace parallel {

Matrix weighted_frame_operator(const Matrix& vectors, const Vector& weights) {
  const Index d = vectors.rows();
  const Index n = vectors.cols();
  const Index blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<Matrix> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (Index b = 0; b < blocks; ++b) {
    const Index begin = b * kReductionBlock;
    const Index width = std::min(kReductionBlock, n - begin);
    const auto block = vectors.middleCols(begin, width);
    partial[static_cast<std::size_t>(b)] =
        block * weights.segment(begin, width).asDiagonal() * block.transpose();
  }
  Matrix s = Matrix::Zero(d, d);
  for (const Matrix& p : partial) s += p;
  return s;
}

Matrix frame_operator(const Matrix& vectors) {
  return weighted_frame_operator(vectors, Vector::Ones(vectors.cols()));
}

std::vector<std::uint8_t> subset_ranks(const Matrix& vectors, double rel_tol) {
  check_mask_size(vectors);
  const std::int64_t total = std::int64_t{1} << vectors.cols();
  std::vector<std::uint8_t> ranks(static_cast<std::size_t>(total), 0);
#pragma omp parallel
  {
    Matrix sub;
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t mask = 1; mask < total; ++mask) {
      gather_mask(vectors, static_cast<std::uint32_t>(mask), sub);
      ranks[static_cast<std::size_t>(mask)] =
          static_cast<std::uint8_t>(numerical_rank(sub, rel_tol));
    }
  }
  return ranks;
}

std::optional<std::vector<int>> first_dependent_subset(const Matrix& vectors,
                                                       int k, double rel_tol) {
  const int n = static_cast<int>(vectors.cols());
  if (k <= 0 || k > n) return std::nullopt;
  const std::uint64_t total = binomial(n, k);
  const std::int64_t chunks =
      static_cast<std::int64_t>((total + kSearchChunk - 1) / kSearchChunk);
  std::atomic<std::uint64_t> best{total};
#pragma omp parallel
  {
    Matrix sub;
    std::vector<int> combo(static_cast<std::size_t>(k));
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t chunk = 0; chunk < chunks; ++chunk) {
      const std::uint64_t begin = static_cast<std::uint64_t>(chunk) * kSearchChunk;
      if (begin >= best.load(std::memory_order_relaxed)) continue;
      const std::uint64_t end = std::min(total, begin + kSearchChunk);
      unrank_combination(begin, n, k, combo);
      for (std::uint64_t r = begin; r < end; ++r) {
        if (r >= best.load(std::memory_order_relaxed)) break;
        gather_combo(vectors, combo, sub);
        if (!columns_independent(sub, rel_tol)) {
          std::uint64_t seen = best.load();
          while (r < seen && !best.compare_exchange_weak(seen, r)) {
          }
          break;
        }
        next_combination(combo, n);
      }
    }
  }
  const std::uint64_t hit = best.load();
  if (hit == total) return std::nullopt;
  std::vector<int> combo(static_cast<std::size_t>(k));
  unrank_combination(hit, n, k, combo);
  return combo;
}

}  // namespace parallel
}  // namespace framescale::kernels
