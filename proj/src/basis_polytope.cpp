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

#include "framescale/basis_polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "framescale/error.hpp"
#include "framescale/kernels.hpp"

namespace framescale {
namespace {

double comparison_slack(double mass) { return 1e-10 * (1.0 + std::abs(mass)); }

void check_shapes(const Frame& frame, const CoefficientVector& c) {
  if (c.size() != frame.count()) {
    throw InvalidArgument("coefficient vector has " + std::to_string(c.size()) +
                          " entries for " + std::to_string(frame.count()) +
                          " vectors");
  }
  if (c.dim() != frame.dim()) {
    throw InvalidArgument("coefficients sum to " + std::to_string(c.dim()) +
                          " but vectors live in R^" +
                          std::to_string(frame.dim()));
  }
  if (frame.count() > kMaxPolytopeVectors) {
    throw SizeLimitExceeded("polytope membership is exact enumeration; n = " +
                            std::to_string(frame.count()) + " exceeds 20");
  }
}

}  // namespace

CoefficientVector::CoefficientVector(Vector entries, int dim)
    : entries_(std::move(entries)), dim_(dim) {
  if (entries_.size() < 1) throw InvalidArgument("empty coefficient vector");
  if (!entries_.allFinite() || entries_.minCoeff() < 0.0) {
    throw InvalidArgument("coefficients must be finite and nonnegative");
  }
  if (std::abs(entries_.sum() - dim) > kCoefficientSumTolerance) {
    throw InvalidArgument("coefficients sum to " + std::to_string(entries_.sum()) +
                          ", expected " + std::to_string(dim));
  }
}

CoefficientVector CoefficientVector::uniform(int n, int d) {
  return CoefficientVector(
      Vector::Constant(n, static_cast<double>(d) / static_cast<double>(n)), d);
}

bool CoefficientVector::within_unit_box() const {
  return entries_.maxCoeff() <= 1.0 + 1e-12;
}

SubsetRankTable::SubsetRankTable(const Frame& frame) : count_(frame.count()) {
  if (count_ > kMaxPolytopeVectors) {
    throw SizeLimitExceeded("subset rank table limited to 20 vectors");
  }
  ranks_ = kernels::parallel::subset_ranks(frame.matrix(), kRankTolerance);
}

std::vector<int> mask_members(std::uint32_t mask) {
  std::vector<int> members;
  for (int i = 0; mask != 0; ++i, mask >>= 1) {
    if (mask & 1u) members.push_back(i);
  }
  return members;
}

double coefficient_mass(const CoefficientVector& c, std::uint32_t mask) {
  double mass = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    if (mask & (1u << i)) mass += c[i];
  }
  return mass;
}

PolytopeMembership in_basis_polytope(const Frame& frame,
                                     const CoefficientVector& c) {
  check_shapes(frame, c);
  const SubsetRankTable ranks(frame);
  const std::uint32_t full = ranks.full_mask();
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const double mass = coefficient_mass(c, mask);
    if (ranks.rank(mask) < mass - comparison_slack(mass)) {
      return {false, mask_members(mask)};
    }
    if (mask == full) break;
  }
  return {true, std::nullopt};
}

PolytopeMembership in_shrunk_polytope(const Frame& frame,
                                      const CoefficientVector& c, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidArgument("alpha must lie in [0, 1)");
  }
  check_shapes(frame, c);
  if (!c.within_unit_box()) {
    throw InvalidArgument("shrunk polytope needs 0 <= c_i <= 1");
  }
  const SubsetRankTable ranks(frame);
  const std::uint32_t full = ranks.full_mask();
  if (ranks.rank(full) < frame.dim()) return {false, mask_members(full)};
  const double scale = 1.0 - alpha;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const double mass = coefficient_mass(c, mask);
    if (scale * ranks.rank(mask) < mass - comparison_slack(mass)) {
      return {false, mask_members(mask)};
    }
  }
  return {true, std::nullopt};
}

std::optional<std::vector<int>> find_dependent_d_subset(const Frame& frame,
                                                        std::uint64_t cap) {
  const int d = frame.dim();
  const int n = frame.count();
  if (n < d) {
    throw InvalidArgument("general position needs n >= d");
  }
  const std::uint64_t subsets = binomial(n, d);
  if (subsets > cap) {
    throw SizeLimitExceeded("C(" + std::to_string(n) + ", " + std::to_string(d) +
                            ") = " + std::to_string(subsets) +
                            " subsets exceeds the cap of " + std::to_string(cap));
  }
  return kernels::parallel::first_dependent_subset(frame.matrix(), d,
                                                   kRankTolerance);
}

bool all_d_subsets_independent(const Frame& frame, std::uint64_t cap) {
  return !find_dependent_d_subset(frame, cap).has_value();
}

double basis_support(const SubsetRankTable& ranks, const Vector& direction) {
  const int n = ranks.count();
  if (direction.size() != n) throw InvalidArgument("direction length mismatch");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return direction(a) > direction(b);
  });
  double value = 0.0;
  std::uint32_t prefix = 0;
  int previous_rank = 0;
  for (const int i : order) {
    prefix |= 1u << i;
    const int r = ranks.rank(prefix);
    value += direction(i) * (r - previous_rank);
    previous_rank = r;
  }
  return value;
}

bool directional_condition(const SubsetRankTable& ranks,
                           const CoefficientVector& c, double alpha,
                           const Vector& direction) {
  const double lhs = (1.0 - alpha) * basis_support(ranks, direction);
  const double rhs = direction.dot(c.entries());
  return lhs >= rhs - comparison_slack(rhs);
}

}  // namespace framescale
