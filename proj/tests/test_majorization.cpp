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

#include <doctest.h>

#include <random>

#include "framescale/error.hpp"
#include "framescale/majorization.hpp"
#include "oracles.hpp"

namespace fs = framescale;
using fs::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// x majorizes y by construction: y random, then mass moved forward in x.
std::pair<Vector, Vector> majorizing_pair(std::mt19937& gen) {
  std::uniform_int_distribution<int> size(1, 10);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int d = size(gen);
  Vector y(d);
  for (int j = 0; j < d; ++j) y(j) = normal(gen);
  Vector x = y;
  std::uniform_int_distribution<int> index(0, d - 1);
  for (int k = 0; k < 5; ++k) {
    int i = index(gen), j = index(gen);
    if (i > j) std::swap(i, j);
    const double m = unit(gen);
    x(i) += m;
    x(j) -= m;
  }
  return {x, y};
}

}  // namespace

TEST_CASE("majorizes examples") {
  CHECK(fs::majorizes(vec({3, 2, 1}), vec({2, 2, 2})));
  CHECK(fs::majorizes(vec({2, 2, 2}), vec({2, 2, 2})));
  CHECK_FALSE(fs::majorizes(vec({1, 2, 3}), vec({2, 2, 2})));
  // Totals must agree.
  CHECK_FALSE(fs::majorizes(vec({3, 2, 2}), vec({2, 2, 2})));
  // Positional: no sorting, so (1, 3) does not majorize (2, 2).
  CHECK_FALSE(fs::majorizes(vec({1, 3}), vec({2, 2})));
  CHECK(fs::majorizes(vec({-1, 1}), vec({-2, 2})));
}

TEST_CASE("majorizes rejects malformed input") {
  CHECK_THROWS_AS(fs::majorizes(vec({1, 2}), vec({1, 2, 3})), fs::InvalidArgument);
  CHECK_THROWS_AS(fs::majorizes(Vector(), Vector()), fs::InvalidArgument);
  CHECK_THROWS_AS(fs::transport_distance(vec({1, std::nan("")}), vec({1, 1})),
                  fs::InvalidArgument);
}

TEST_CASE("majorization tolerance scales with l1 mass") {
  const Vector x = vec({1e6, 0.0});
  CHECK(fs::majorization_tolerance(x, x) == doctest::Approx(1e-10 * (1 + 1e6)));
  CHECK(fs::majorizes(vec({1e6 - 1e-6, 1e-6}), vec({1e6, 0.0})));
  CHECK_FALSE(fs::majorizes(vec({1e6 - 1e-3, 1e-3}), vec({1e6, 0.0})));
}

TEST_CASE("transport examples") {
  CHECK(fs::transport_distance(vec({1, 2, 3}), vec({1, 2, 3})) == 0.0);
  CHECK(fs::transport_distance(vec({3, 2, 1}), vec({2, 2, 2})) == 2.0);
  CHECK(oracle::transport(vec({3, 2, 1}), vec({2, 2, 2})) == 2.0);
  CHECK(fs::wasserstein_prefix(vec({3, 2, 1}), vec({2, 2, 2})) == 2.0);
  CHECK(fs::wasserstein_prefix(vec({0, 1}), vec({1, 0})) == 1.0);
  CHECK(fs::prefix_shortfall(vec({0, 1}), vec({1, 0})) == 1.0);
  CHECK(fs::prefix_shortfall(vec({1, 0}), vec({0, 1})) == 0.0);
}

TEST_CASE("l1 can exceed T by up to a factor two") {
  // One unit moved one place: |x - y|_1 = 2 while T = W = 1.
  const Vector x = vec({1, 0});
  const Vector y = vec({0, 1});
  REQUIRE(fs::majorizes(x, y));
  CHECK((x - y).lpNorm<1>() == 2.0);
  CHECK(fs::transport_distance(x, y) == 1.0);
  CHECK((x - y).lpNorm<1>() <= 2.0 * fs::transport_distance(x, y));
}

TEST_CASE("random majorizing pairs: T = W, l1 <= 2T, linearity") {
  std::mt19937 gen(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const auto [x, y] = majorizing_pair(gen);
    const double tol = fs::majorization_tolerance(x, y);
    REQUIRE(oracle::majorizes(x, y, tol));
    CHECK(fs::majorizes(x, y));
    const double t = fs::transport_distance(x, y);
    CHECK(t == doctest::Approx(oracle::transport(x, y)).epsilon(1e-12).scale(1.0));
    CHECK(std::abs(t - fs::wasserstein_prefix(x, y)) <= 1e-10);
    CHECK((x - y).lpNorm<1>() <= 2.0 * t + 1e-10);
  }
  // Linearity holds for any family, majorizing or not.
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    Vector sx = Vector::Zero(6), sy = Vector::Zero(6);
    double parts = 0.0;
    for (int k = 0; k < 7; ++k) {
      Vector x(6), y(6);
      for (int j = 0; j < 6; ++j) {
        x(j) = normal(gen);
        y(j) = normal(gen);
      }
      sx += x;
      sy += y;
      parts += fs::transport_distance(x, y);
    }
    CHECK(std::abs(fs::transport_distance(sx, sy) - parts) <= 1e-10);
  }
}

TEST_CASE("diagonal rescaling with sorted weights majorizes") {
  std::mt19937 gen(99);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 1 + trial % 10;
    Vector u(d), lambda(d);
    for (int j = 0; j < d; ++j) {
      u(j) = normal(gen);
      lambda(j) = unit(gen);
    }
    std::sort(lambda.data(), lambda.data() + d, std::greater<>());
    const Vector w = u.norm() * lambda.cwiseProduct(u).normalized();
    const Vector x = u.array().square();
    const Vector y = w.array().square();
    CHECK(oracle::majorizes(y, x, 1e-10 * (1 + x.sum())));
    CHECK(fs::majorizes(y, x));
  }
}
