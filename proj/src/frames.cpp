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

#include "framescale/frames.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "framescale/error.hpp"
#include "framescale/kernels.hpp"
#include "framescale/rng.hpp"

namespace framescale {

Frame::Frame(Matrix vectors) : vectors_(std::move(vectors)) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1) {
    throw InvalidArgument("frame needs d >= 1 and n >= 1");
  }
  if (!vectors_.allFinite()) {
    throw InvalidArgument("frame vectors must have finite entries");
  }
}

Frame Frame::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw InvalidArgument("frame needs at least one vector");
  const std::size_t d = rows.front().size();
  Matrix m(static_cast<Index>(d), static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) {
      throw InvalidArgument("vector " + std::to_string(i) + " has length " +
                            std::to_string(rows[i].size()) + ", expected " +
                            std::to_string(d));
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Index>(j), static_cast<Index>(i)) = rows[i][j];
    }
  }
  return Frame(std::move(m));
}

std::vector<std::vector<double>> Frame::to_rows() const {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(count()));
  for (Index i = 0; i < vectors_.cols(); ++i) {
    rows[static_cast<std::size_t>(i)] = to_std(vectors_.col(i));
  }
  return rows;
}

bool Frame::operator==(const Frame& other) const {
  return vectors_.rows() == other.vectors_.rows() &&
         vectors_.cols() == other.vectors_.cols() && vectors_ == other.vectors_;
}

Matrix frame_operator(const Frame& frame) {
  return kernels::parallel::frame_operator(frame.matrix());
}

FrameMetrics frame_metrics(const Frame& frame) {
  const Matrix s = frame_operator(frame);
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  const Vector& lambda = eig.eigenvalues();
  FrameMetrics m;
  m.eps_op = std::max({0.0, 1.0 - lambda.minCoeff(), lambda.maxCoeff() - 1.0});
  const double per_vector =
      static_cast<double>(frame.dim()) / static_cast<double>(frame.count());
  const Vector sq_norms = frame.matrix().colwise().squaredNorm().transpose();
  m.eps_norm = (sq_norms.array() / per_vector - 1.0).abs().maxCoeff();
  m.eps = std::max(m.eps_op, m.eps_norm);
  return m;
}

double dist_sq(const Frame& v, const Frame& w) {
  if (v.dim() != w.dim() || v.count() != w.count()) {
    throw InvalidArgument("dist_sq: frames differ in shape (" +
                          std::to_string(v.dim()) + "x" +
                          std::to_string(v.count()) + " vs " +
                          std::to_string(w.dim()) + "x" +
                          std::to_string(w.count()) + ")");
  }
  return (v.matrix() - w.matrix()).squaredNorm();
}

namespace {

// Rows of a real harmonic frame: a constant row, cos/sin pairs at distinct
// frequencies below n/2, and the alternating row when needed for d = n even.
// Every row is a unit vector in R^n, rows are mutually orthogonal, and each
// column carries squared norm d/n.
Matrix harmonic_rows(int d, int n) {
  const double nn = static_cast<double>(n);
  const bool odd = d % 2 == 1;
  const int max_pairs = (n - 1) / 2;
  int pairs = d / 2;
  bool constant_row = odd;
  bool alternating_row = false;
  if (!odd && pairs > max_pairs) {
    // Only reachable for d == n even.
    pairs -= 1;
    constant_row = true;
    alternating_row = true;
  }
  Matrix h(d, n);
  Index row = 0;
  if (constant_row) {
    h.row(row++).setConstant(1.0 / std::sqrt(nn));
  }
  const double pair_scale = std::sqrt(2.0 / nn);
  for (int j = 1; j <= pairs; ++j) {
    for (int k = 0; k < n; ++k) {
      const double angle = 2.0 * std::numbers::pi * j * k / nn;
      h(row, k) = pair_scale * std::cos(angle);
      h(row + 1, k) = pair_scale * std::sin(angle);
    }
    row += 2;
  }
  if (alternating_row) {
    for (int k = 0; k < n; ++k) {
      h(row, k) = (k % 2 == 0 ? 1.0 : -1.0) / std::sqrt(nn);
    }
    ++row;
  }
  return h;
}

Matrix random_orthogonal(int d, Engine& engine) {
  const Matrix g = gaussian_matrix(engine, d, d);
  const Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace

Frame generate_enpf(int d, int n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw InvalidArgument("generate_enpf: need d, n >= 1");
  if (n < d) {
    throw InvalidArgument("generate_enpf: n < d admits no Parseval frame");
  }
  Engine engine = make_engine(seed, "generate_enpf");
  Frame frame(random_orthogonal(d, engine) * harmonic_rows(d, n));
  const FrameMetrics m = frame_metrics(frame);
  if (!(m.eps <= kEnpfTolerance)) {
    throw Error("generate_enpf: construction failed verification (eps = " +
                std::to_string(m.eps) + ")");
  }
  return frame;
}

Frame perturb_frame(const Frame& frame, double eps_target, std::uint64_t seed) {
  if (!(eps_target > 0.0) || !std::isfinite(eps_target)) {
    throw InvalidArgument("perturb_frame: eps_target must be positive");
  }
  if (!(frame_metrics(frame).eps <= kEnpfTolerance)) {
    throw InvalidArgument("perturb_frame: input is not an equal norm Parseval frame");
  }
  const int d = frame.dim();
  const int n = frame.count();
  Engine engine = make_engine(seed, "perturb_frame");
  // Columns of the noise have expected squared norm d/n, like the frame.
  const Matrix noise = gaussian_matrix(engine, d, n) / std::sqrt(static_cast<double>(n));

  const double floor = eps_target / 4.0;
  const auto measure = [&](double scale) {
    return frame_metrics(Frame(frame.matrix() + scale * noise)).eps;
  };
  const auto in_band = [&](double e) { return e >= floor && e <= eps_target; };

  double lo = 0.0;
  double hi = eps_target;
  double e_hi = measure(hi);
  for (int i = 0; i < 200 && e_hi <= eps_target; ++i) {
    if (in_band(e_hi)) return Frame(frame.matrix() + hi * noise);
    lo = hi;
    hi *= 2.0;
    e_hi = measure(hi);
  }
  // eps is continuous in the scale, so bisection on [lo, hi] reaches the band.
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double e = measure(mid);
    if (in_band(e)) return Frame(frame.matrix() + mid * noise);
    if (e > eps_target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  throw Error("perturb_frame: could not reach the target eps band");
}

Frame renormalize(const Frame& frame, double target_sq_norm) {
  if (!(target_sq_norm > 0.0) || !std::isfinite(target_sq_norm)) {
    throw InvalidArgument("renormalize: target squared norm must be positive");
  }
  Matrix out = frame.matrix();
  const double target = std::sqrt(target_sq_norm);
  for (Index i = 0; i < out.cols(); ++i) {
    const double norm = out.col(i).norm();
    if (!(norm > 0.0)) {
      throw InvalidArgument("renormalize: vector " + std::to_string(i) +
                            " is zero");
    }
    out.col(i) *= target / norm;
  }
  return Frame(std::move(out));
}

}  // namespace framescale
