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

// Data-parallel inner loops of the library.
//
// Each kernel exists twice. `serial::` is the straightforward reference kept
// for testing; `parallel::` is what the library calls. Parallel results are
// deterministic for a fixed input regardless of the OpenMP thread count:
// reductions use a fixed block decomposition and searches return the
// lexicographically first hit, never the first one a thread happened to see.

#ifndef FRAMESCALE_KERNELS_HPP_
#define FRAMESCALE_KERNELS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "framescale/linalg.hpp"

namespace framescale::kernels {

/// Columns of `vectors` are the frame vectors (d x n).
namespace serial {

Matrix frame_operator(const Matrix& vectors);
Matrix weighted_frame_operator(const Matrix& vectors, const Vector& weights);

// rank[mask] for every subset mask of the n columns; requires n <= 20.
std::vector<std::uint8_t> subset_ranks(const Matrix& vectors, double rel_tol);

// Lexicographically first size-k column subset with numerical rank < k.
std::optional<std::vector<int>> first_dependent_subset(const Matrix& vectors,
                                                       int k, double rel_tol);

}  // namespace serial

namespace parallel {

Matrix frame_operator(const Matrix& vectors);
Matrix weighted_frame_operator(const Matrix& vectors, const Vector& weights);
std::vector<std::uint8_t> subset_ranks(const Matrix& vectors, double rel_tol);
std::optional<std::vector<int>> first_dependent_subset(const Matrix& vectors,
                                                       int k, double rel_tol);

}  // namespace parallel

/// True iff the columns of `sub` have full column rank under the relative
/// singular-value test. Square inputs first try a cheap certificate,
/// sigma_min / sigma_max >= 1 / (|B|_F |B^-1|_F), and fall back to the SVD only
/// when the certificate is inconclusive.
bool columns_independent(const Matrix& sub, double rel_tol);

/// Lexicographic (un)ranking of k-subsets of {0..n-1}.
void unrank_combination(std::uint64_t rank, int n, int k, std::span<int> out);
bool next_combination(std::span<int> combo, int n);

int max_threads();

}  // namespace framescale::kernels

#endif  // FRAMESCALE_KERNELS_HPP_
