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

// Radial isotropic position.
//
// A linear map A places u_1..u_n in radial isotropic position with respect
// to c when sum_i c_i w_i w_i^T = I for w_i = A u_i / |A u_i|. We find A by
// minimizing the convex potential
//
//   f(t) = log det M(t) - sum_i c_i t_i,   M(t) = sum_i c_i e^{t_i} u_i u_i^T,
//
// whose stationary points satisfy e^{t_i} u_i^T M^{-1} u_i = 1; then
// A = M(t)^{-1/2} does the job. f is invariant under t -> t + s*1 (because
// sum c_i = d), so iterates are kept on the gauge sum_i t_i = 0. f is
// bounded below exactly when c lies in the basis polytope; otherwise t runs
// off to infinity along a subset whose coefficient mass exceeds its rank.

#ifndef FRAMESCALE_BARTHE_SOLVER_HPP_
#define FRAMESCALE_BARTHE_SOLVER_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "framescale/basis_polytope.hpp"
#include "framescale/frames.hpp"
#include "framescale/linalg.hpp"

namespace framescale {

struct ScalingSolution {
  Vector t;              // dual variables, sum zero
  Matrix transform;      // A = M(t)^{-1/2}
  Matrix residual;       // J = sum_i c_i w_i w_i^T - I
  double residual_inf = 0.0;
  double stationarity_inf = 0.0;  // max_i |e^{t_i} |A u_i|^2 - 1| over c_i > 0
  int iterations = 0;
  bool converged = false;
};

struct DiagonalScaling {
  Vector lambdas;   // singular values, nonincreasing
  Matrix rotation;  // D with A = C diag(lambdas) D^T
};

struct RadialIsotropyCheck {
  Matrix residual;
  double residual_inf = 0.0;
  bool within = false;
};

struct SolverOptions {
  int max_iter = 200;
  std::optional<Vector> initial_t;
};

/// M(t) = sum_i c_i e^{t_i} u_i u_i^T.
Matrix weighted_operator(const Frame& u, const CoefficientVector& c,
                         const Vector& t);

/// f(t); +infinity when M(t) is singular.
double barthe_objective(const Frame& u, const CoefficientVector& c,
                        const Vector& t);

/// g_i = c_i (e^{t_i} u_i^T M^{-1} u_i - 1). Throws SingularMatrixError.
Vector barthe_gradient(const Frame& u, const CoefficientVector& c,
                       const Vector& t);

/// H = diag(p) - P o P with P_ij = sqrt(c_i c_j e^{t_i + t_j}) u_i^T M^{-1} u_j
/// and p = diag(P). Throws SingularMatrixError.
Matrix barthe_hessian(const Frame& u, const CoefficientVector& c,
                      const Vector& t);

/// Damped Newton on f with Armijo backtracking and a gradient-descent
/// fallback when the Hessian is numerically singular. Converged means
/// |J|_inf <= delta and the stationarity residual is at most 10 * delta.
///
/// Throws NonConvergenceError when t leaves the box |t|_inf <=
/// divergence_bound(n, d) or max_iter steps pass without convergence; the
/// error carries a blocking subset when one is identified. Throws
/// SingularMatrixError if M(0) is singular (the vectors do not span).
ScalingSolution solve_radial_isotropic(const Frame& u,
                                       const CoefficientVector& c,
                                       double delta, int max_iter = 200);
ScalingSolution solve_radial_isotropic(const Frame& u,
                                       const CoefficientVector& c,
                                       double delta,
                                       const SolverOptions& options);

/// J = sum_i c_i w_i w_i^T - I for w_i = A u_i / |A u_i|, recomputed from
/// scratch. Throws InvalidArgument if some A u_i vanishes.
RadialIsotropyCheck verify_radial_isotropic(const Frame& u,
                                            const CoefficientVector& c,
                                            const Matrix& a, double delta);

/// e^{t_i} |A u_i|^2 - 1 for every i.
Vector stationarity_residual(const Frame& u, const Vector& t, const Matrix& a);

/// With A = C S D^T, returns (diag S sorted, D) and the frame D^T U, on which
/// diag(S) acts exactly as the symmetric D S D^T acts on U.
std::pair<DiagonalScaling, Frame> diagonalize_transform(const Matrix& a,
                                                        const Frame& u);

/// 50 + 10 log(n d).
double divergence_bound(int n, int d);

/// Subset whose coefficient mass exceeds its rank, looked for first among
/// the leading sets when indices are ordered by decreasing t, then (for
/// n <= 20) by exhaustive search. Empty when none is found.
std::vector<int> diagnose_blocking_subset(const Frame& u,
                                          const CoefficientVector& c,
                                          const Vector& t);

}  // namespace framescale

#endif  // FRAMESCALE_BARTHE_SOLVER_HPP_
