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

// Prefix-order majorization on unsorted real sequences and the two transport
// quantities built on it. Note the order is positional: entries are never
// sorted, and entries may be negative.

#ifndef FRAMESCALE_MAJORIZATION_HPP_
#define FRAMESCALE_MAJORIZATION_HPP_

#include "framescale/linalg.hpp"

namespace framescale {

/// Default tolerance for majorizes(): 1e-10 * (1 + max(|x|_1, |y|_1)).
double majorization_tolerance(const Vector& x, const Vector& y);

/// x majorizes y: every prefix sum of x is at least the matching prefix
/// sum of y, and the totals agree. Comparisons allow `tol` of slack.
bool majorizes(const Vector& x, const Vector& y, double tol);
bool majorizes(const Vector& x, const Vector& y);

/// T(x, y) = sum_j j * (y_j - x_j), with j counted from 1. Defined for every
/// equal-length pair; it only has a transport meaning when x majorizes y.
double transport_distance(const Vector& x, const Vector& y);

/// sum_j |prefix_x(j) - prefix_y(j)|.
double wasserstein_prefix(const Vector& x, const Vector& y);

/// Largest prefix-sum shortfall max_j (prefix_y(j) - prefix_x(j)), clamped
/// at zero; zero exactly when every prefix of x dominates.
double prefix_shortfall(const Vector& x, const Vector& y);

}  // namespace framescale

#endif  // FRAMESCALE_MAJORIZATION_HPP_
