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

#include <algorithm>
#include <vector>

#include "framescale/kernels.hpp"
#include "framescale/linalg.hpp"
#include "oracles.hpp"

namespace fs = framescale;
namespace kernels = framescale::kernels;

TEST_CASE("frame operator: parallel blocks agree with the serial sum") {
  for (const int n : {1, 7, 63, 64, 65, 300}) {
    const fs::Matrix u = oracle::gaussian(5, n, 11u + static_cast<unsigned>(n));
    const fs::Matrix s = kernels::serial::frame_operator(u);
    const fs::Matrix p = kernels::parallel::frame_operator(u);
    CHECK((s - p).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + s.cwiseAbs().maxCoeff()));
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s - u * u.transpose()).cwiseAbs().maxCoeff() <= 1e-11 * n);
  }
}

TEST_CASE("weighted frame operator: serial and parallel agree") {
  const fs::Matrix u = oracle::gaussian(4, 150, 3);
  const fs::Vector w = oracle::gaussian(150, 1, 4).col(0).cwiseAbs();
  const fs::Matrix s = kernels::serial::weighted_frame_operator(u, w);
  const fs::Matrix p = kernels::parallel::weighted_frame_operator(u, w);
  const fs::Matrix oracle_m = u * w.asDiagonal() * u.transpose();
  CHECK((s - p).cwiseAbs().maxCoeff() <= 1e-12 * s.cwiseAbs().maxCoeff());
  CHECK((s - oracle_m).cwiseAbs().maxCoeff() <= 1e-12 * s.cwiseAbs().maxCoeff());
}

TEST_CASE("subset ranks match Gram-Schmidt on every subset") {
  fs::Matrix u = oracle::gaussian(3, 8, 21);
  u.col(5) = 2.0 * u.col(1);           // planted parallel pair
  u.col(7) = u.col(0) + u.col(2);      // planted dependent triple
  const auto serial = kernels::serial::subset_ranks(u, fs::kRankTolerance);
  const auto parallel = kernels::parallel::subset_ranks(u, fs::kRankTolerance);
  REQUIRE(serial.size() == 256);
  CHECK(serial == parallel);
  for (std::uint32_t mask = 0; mask < 256; ++mask) {
    std::vector<int> cols;
    for (int i = 0; i < 8; ++i) {
      if (mask & (1u << i)) cols.push_back(i);
    }
    CHECK(serial[mask] == oracle::gram_schmidt_rank(u, cols, 1e-9));
  }
}

TEST_CASE("first dependent subset is lexicographically first and thread-independent") {
  fs::Matrix u = oracle::gaussian(3, 12, 5);
  u.col(9) = u.col(4) - 0.5 * u.col(6);
  u.col(11) = 3.0 * u.col(10);
  const auto s = kernels::serial::first_dependent_subset(u, 3, fs::kRankTolerance);
  const auto p = kernels::parallel::first_dependent_subset(u, 3, fs::kRankTolerance);
  REQUIRE(s.has_value());
  REQUIRE(p.has_value());
  CHECK(*s == *p);
  CHECK(*s == std::vector<int>{0, 10, 11});

  const fs::Matrix generic = oracle::gaussian(3, 12, 6);
  CHECK_FALSE(kernels::serial::first_dependent_subset(generic, 3, fs::kRankTolerance));
  CHECK_FALSE(kernels::parallel::first_dependent_subset(generic, 3, fs::kRankTolerance));
}

TEST_CASE("combination unranking walks the lexicographic order") {
  const int n = 7, k = 3;
  std::vector<int> walk{0, 1, 2};
  std::vector<int> direct(k);
  std::uint64_t rank = 0;
  do {
    kernels::unrank_combination(rank, n, k, direct);
    CHECK(direct == walk);
    ++rank;
  } while (kernels::next_combination(walk, n));
  CHECK(rank == fs::binomial(n, k));
}

TEST_CASE("columns_independent certificate") {
  fs::Matrix m = fs::Matrix::Identity(4, 4);
  CHECK(kernels::columns_independent(m, fs::kRankTolerance));
  m.col(3) = m.col(0) + 1e-14 * m.col(3);
  CHECK_FALSE(kernels::columns_independent(m, fs::kRankTolerance));
  m.col(3) = m.col(0) + 1e-3 * fs::Vector::Unit(4, 3);
  CHECK(kernels::columns_independent(m, fs::kRankTolerance));
}

TEST_CASE("binomial saturates") {
  CHECK(fs::binomial(5, 2) == 10);
  CHECK(fs::binomial(32, 8) == 10518300);
  CHECK(fs::binomial(3, 5) == 0);
  CHECK(fs::binomial(200, 100) == UINT64_MAX);
}
