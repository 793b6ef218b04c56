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

#ifndef FRAMESCALE_FRAMES_HPP_
#define FRAMESCALE_FRAMES_HPP_

#include <cstdint>
#include <vector>

#include "framescale/linalg.hpp"

namespace framescale {

// Tolerance below which a frame counts as an exact equal norm Parseval frame.
inline constexpr double kEnpfTolerance = 1e-12;

/// An ordered sequence of n vectors in R^d, stored as the columns of a d x n
/// matrix. Immutable after construction; order is significant.
class Frame {
 public:
  /// Throws InvalidArgument on an empty matrix or non-finite entries.
  explicit Frame(Matrix vectors);

  static Frame from_rows(const std::vector<std::vector<double>>& rows);

  int dim() const { return static_cast<int>(vectors_.rows()); }
  int count() const { return static_cast<int>(vectors_.cols()); }

  auto vector(Index i) const { return vectors_.col(i); }
  const Matrix& matrix() const { return vectors_; }

  std::vector<std::vector<double>> to_rows() const;

  bool operator==(const Frame& other) const;

 private:
  Matrix vectors_;
};

struct FrameMetrics {
  double eps_op = 0.0;    // operator deviation of the frame operator from I
  double eps_norm = 0.0;  // worst relative deviation of |v_i|^2 from d/n
  double eps = 0.0;       // max of the two
};

/// S = sum_i v_i v_i^T.
Matrix frame_operator(const Frame& frame);

/// Smallest eps with (1-eps)I <= S <= (1+eps)I and
/// (1-eps)d/n <= |v_i|^2 <= (1+eps)d/n. A rank-deficient frame reports
/// eps_op >= 1 rather than failing.
FrameMetrics frame_metrics(const Frame& frame);

/// sum_i |v_i - w_i|^2. Throws InvalidArgument on a shape mismatch.
double dist_sq(const Frame& v, const Frame& w);

/// An exact equal norm Parseval frame: a real harmonic frame under a
/// seed-dependent rotation, re-verified against kEnpfTolerance before return.
/// Throws InvalidArgument when n < d.
Frame generate_enpf(int d, int n, std::uint64_t seed);

/// Adds a scaled Gaussian perturbation to an exact ENPF so that the measured
/// eps lands in [eps_target / 4, eps_target].
Frame perturb_frame(const Frame& frame, double eps_target, std::uint64_t seed);

/// Rescales every vector to squared norm `target_sq_norm`, keeping directions.
/// Throws InvalidArgument on a zero vector.
Frame renormalize(const Frame& frame, double target_sq_norm);

}  // namespace framescale

#endif  // FRAMESCALE_FRAMES_HPP_
