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

// Seed splitting. Every random draw in the library comes from an engine keyed
// by (root seed, stream name, counter), so any stage can be replayed in
// isolation and adding a new consumer never shifts the draws of another.

#ifndef FRAMESCALE_RNG_HPP_
#define FRAMESCALE_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

#include "framescale/linalg.hpp"

namespace framescale {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view stream,
                          std::uint64_t counter = 0);

using Engine = std::mt19937_64;

Engine make_engine(std::uint64_t seed, std::string_view stream,
                   std::uint64_t counter = 0);

Matrix gaussian_matrix(Engine& engine, Index rows, Index cols);

}  // namespace framescale

#endif  // FRAMESCALE_RNG_HPP_
