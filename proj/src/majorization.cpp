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

#include "framescale/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "framescale/error.hpp"

namespace framescale {
namespace {

void check_pair(const Vector& x, const Vector& y, const char* op) {
  if (x.size() != y.size()) {
    throw InvalidArgument(std::string(op) + ": length mismatch (" +
                          std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  if (x.size() < 1) throw InvalidArgument(std::string(op) + ": empty sequence");
  if (!x.allFinite() || !y.allFinite()) {
    throw InvalidArgument(std::string(op) + ": non-finite entry");
  }
}

}  // namespace

double majorization_tolerance(const Vector& x, const Vector& y) {
  return 1e-10 * (1.0 + std::max(x.lpNorm<1>(), y.lpNorm<1>()));
}

bool majorizes(const Vector& x, const Vector& y, double tol) {
  check_pair(x, y, "majorizes");
  double px = 0.0;
  double py = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    px += x(j);
    py += y(j);
    if (px < py - tol) return false;
  }
  return std::abs(px - py) <= tol;
}

bool majorizes(const Vector& x, const Vector& y) {
  return majorizes(x, y, majorization_tolerance(x, y));
}

double transport_distance(const Vector& x, const Vector& y) {
  check_pair(x, y, "transport_distance");
  double total = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    total += static_cast<double>(j + 1) * (y(j) - x(j));
  }
  return total;
}

double wasserstein_prefix(const Vector& x, const Vector& y) {
  check_pair(x, y, "wasserstein_prefix");
  double px = 0.0;
  double py = 0.0;
  double total = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    px += x(j);
    py += y(j);
    total += std::abs(px - py);
  }
  return total;
}

double prefix_shortfall(const Vector& x, const Vector& y) {
  check_pair(x, y, "prefix_shortfall");
  double px = 0.0;
  double py = 0.0;
  double worst = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    px += x(j);
    py += y(j);
    worst = std::max(worst, py - px);
  }
  return worst;
}

}  // namespace framescale
