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

// Membership in the basis polytope of a vector configuration,
//
//   B(U) = { c : sum_i c_i = d, sum_{i in A} c_i <= dim span{u_i : i in A} },
//
// and in its shrunk copy (1 - alpha) B(U). Both are decided exactly by
// enumerating subsets, so every entry point refuses inputs past a size cap
// instead of approximating.

#ifndef FRAMESCALE_BASIS_POLYTOPE_HPP_
#define FRAMESCALE_BASIS_POLYTOPE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "framescale/frames.hpp"
#include "framescale/linalg.hpp"

namespace framescale {

inline constexpr int kMaxPolytopeVectors = 20;
inline constexpr std::uint64_t kDefaultSubsetCap = 1'000'000;
inline constexpr double kCoefficientSumTolerance = 1e-10;

/// Nonnegative weights c_1..c_n with sum d.
class CoefficientVector {
 public:
  /// Throws InvalidArgument on negative or non-finite entries, or when the
  /// entries do not sum to `dim` within kCoefficientSumTolerance.
  CoefficientVector(Vector entries, int dim);

  /// c_i = d / n.
  static CoefficientVector uniform(int n, int d);

  const Vector& entries() const { return entries_; }
  double operator[](Index i) const { return entries_(i); }
  Index size() const { return entries_.size(); }
  int dim() const { return dim_; }

  bool within_unit_box() const;

 private:
  Vector entries_;
  int dim_;
};

struct PolytopeMembership {
  bool in_polytope = false;
  // First violating subset in increasing bitmask order, 0-based indices.
  std::optional<std::vector<int>> violating_subset;
};

/// Numerical rank of span{u_i : i in mask} for every mask.
class SubsetRankTable {
 public:
  explicit SubsetRankTable(const Frame& frame);

  int rank(std::uint32_t mask) const { return ranks_[mask]; }
  int count() const { return count_; }
  std::uint32_t full_mask() const { return (1u << count_) - 1u; }

 private:
  int count_;
  std::vector<std::uint8_t> ranks_;
};

std::vector<int> mask_members(std::uint32_t mask);
double coefficient_mass(const CoefficientVector& c, std::uint32_t mask);

PolytopeMembership in_basis_polytope(const Frame& frame,
                                     const CoefficientVector& c);

/// Checks every nonempty proper subset S against (1 - alpha) rank(S) >= c(S),
/// after requiring that the vectors span R^d (otherwise B(U) is empty and the
/// directional condition fails vacuously). Needs 0 <= c_i <= 1 and
/// alpha in [0, 1).
PolytopeMembership in_shrunk_polytope(const Frame& frame,
                                      const CoefficientVector& c, double alpha);

bool all_d_subsets_independent(const Frame& frame,
                               std::uint64_t cap = kDefaultSubsetCap);

/// Lexicographically first linearly dependent d-subset, if any.
std::optional<std::vector<int>> find_dependent_d_subset(
    const Frame& frame, std::uint64_t cap = kDefaultSubsetCap);

/// max_{v in B(U)} direction^T v by the greedy rule: walk indices in order of
/// decreasing weight and credit each with its rank increment.
double basis_support(const SubsetRankTable& ranks, const Vector& direction);

/// Direct evaluation of (1 - alpha) max_{v in B(U)} u^T v >= u^T c for one
/// direction u.
bool directional_condition(const SubsetRankTable& ranks,
                           const CoefficientVector& c, double alpha,
                           const Vector& direction);

}  // namespace framescale

#endif  // FRAMESCALE_BASIS_POLYTOPE_HPP_
