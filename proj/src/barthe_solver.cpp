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

#include "framescale/barthe_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "framescale/error.hpp"
#include "framescale/kernels.hpp"
#include "framescale/log.hpp"

namespace framescale {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;
// Newton decrement below which the full step is taken without a line search;
// there f changes by less than its own rounding error.
constexpr double kFullStepDecrement = 1e-8;
constexpr double kHessianConditionFloor = 1e-12;

void check_inputs(const Frame& u, const CoefficientVector& c, const Vector& t) {
  if (c.size() != u.count() || t.size() != u.count()) {
    throw InvalidArgument("barthe: frame, coefficients and t differ in length");
  }
  if (c.dim() != u.dim()) {
    throw InvalidArgument("barthe: coefficients must sum to the dimension");
  }
  if (!t.allFinite()) throw InvalidArgument("barthe: t must be finite");
}

// Everything the objective, gradient and Hessian share at one point t.
struct Evaluation {
  bool nonsingular = false;
  Vector weights;  // c_i e^{t_i}
  Matrix m;        // M(t)
  Matrix whitened; // L^{-1} U, with M = L L^T
  double log_det = kInf;
};

Evaluation evaluate(const Frame& u, const CoefficientVector& c, const Vector& t) {
  Evaluation e;
  e.weights = c.entries().array() * t.array().exp();
  e.m = kernels::parallel::weighted_frame_operator(u.matrix(), e.weights);
  const Eigen::LLT<Matrix> llt(e.m);
  if (llt.info() != Eigen::Success) return e;
  const Matrix l = llt.matrixL();
  const Vector diag = l.diagonal();
  if (!(diag.minCoeff() > 0.0) || !diag.allFinite()) return e;
  e.nonsingular = true;
  e.log_det = 2.0 * diag.array().log().sum();
  e.whitened = llt.matrixL().solve(u.matrix());
  return e;
}

double objective_at(const Evaluation& e, const CoefficientVector& c,
                    const Vector& t) {
  if (!e.nonsingular) return kInf;
  return e.log_det - c.entries().dot(t);
}

// p_i = c_i e^{t_i} u_i^T M^{-1} u_i.
Vector leverage(const Evaluation& e) {
  return e.weights.array() * e.whitened.colwise().squaredNorm().transpose().array();
}

Vector gradient_at(const Evaluation& e, const CoefficientVector& c) {
  return leverage(e) - c.entries();
}

Matrix hessian_at(const Evaluation& e) {
  const Vector root = e.weights.array().sqrt();
  const Matrix b = e.whitened * root.asDiagonal();
  const Matrix p = b.transpose() * b;
  Matrix h = -p.cwiseProduct(p);
  h.diagonal() += p.diagonal();
  return h;
}

void gauge_fix(Vector& t) {
  t.array() -= t.mean();
}

std::vector<double> unit_direction(const Vector& t) {
  const double norm = t.norm();
  if (!(norm > 0.0)) return to_std(t);
  return to_std(t / norm);
}

[[noreturn]] void fail(const std::string& why, const Frame& u,
                       const CoefficientVector& c, const Vector& t,
                       int iterations) {
  std::vector<int> blocking = diagnose_blocking_subset(u, c, t);
  std::string message = "radial isotropic solver: " + why;
  if (!blocking.empty()) {
    message += "; blocking subset {";
    for (std::size_t k = 0; k < blocking.size(); ++k) {
      if (k) message += ",";
      message += std::to_string(blocking[k]);
    }
    message += "} has more coefficient mass than rank";
  }
  throw NonConvergenceError(message, iterations, std::move(blocking),
                            unit_direction(t));
}

}  // namespace

Matrix weighted_operator(const Frame& u, const CoefficientVector& c,
                         const Vector& t) {
  check_inputs(u, c, t);
  return evaluate(u, c, t).m;
}

double barthe_objective(const Frame& u, const CoefficientVector& c,
                        const Vector& t) {
  check_inputs(u, c, t);
  return objective_at(evaluate(u, c, t), c, t);
}

Vector barthe_gradient(const Frame& u, const CoefficientVector& c,
                       const Vector& t) {
  check_inputs(u, c, t);
  const Evaluation e = evaluate(u, c, t);
  if (!e.nonsingular) throw SingularMatrixError("barthe_gradient: M(t) is singular");
  return gradient_at(e, c);
}

Matrix barthe_hessian(const Frame& u, const CoefficientVector& c,
                      const Vector& t) {
  check_inputs(u, c, t);
  const Evaluation e = evaluate(u, c, t);
  if (!e.nonsingular) throw SingularMatrixError("barthe_hessian: M(t) is singular");
  return hessian_at(e);
}

Vector stationarity_residual(const Frame& u, const Vector& t, const Matrix& a) {
  const Matrix image = a * u.matrix();
  return (t.array().exp() * image.colwise().squaredNorm().transpose().array()) - 1.0;
}

RadialIsotropyCheck verify_radial_isotropic(const Frame& u,
                                            const CoefficientVector& c,
                                            const Matrix& a, double delta) {
  if (a.rows() != u.dim() || a.cols() != u.dim()) {
    throw InvalidArgument("verify_radial_isotropic: transform must be d x d");
  }
  if (c.size() != u.count()) {
    throw InvalidArgument("verify_radial_isotropic: coefficient length mismatch");
  }
  Matrix image = a * u.matrix();
  for (Index i = 0; i < image.cols(); ++i) {
    const double norm = image.col(i).norm();
    if (!(norm > 0.0)) {
      throw InvalidArgument("verify_radial_isotropic: A u_" + std::to_string(i) +
                            " is zero");
    }
    image.col(i) /= norm;
  }
  RadialIsotropyCheck check;
  check.residual =
      kernels::parallel::weighted_frame_operator(image, c.entries()) -
      Matrix::Identity(u.dim(), u.dim());
  check.residual_inf = max_abs(check.residual);
  check.within = check.residual_inf <= delta;
  return check;
}

double divergence_bound(int n, int d) {
  return 50.0 + 10.0 * std::log(static_cast<double>(n) * static_cast<double>(d));
}

std::vector<int> diagnose_blocking_subset(const Frame& u,
                                          const CoefficientVector& c,
                                          const Vector& t) {
  const int n = u.count();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return t(a) > t(b); });
  std::vector<int> prefix;
  double mass = 0.0;
  for (int k = 0; k + 1 < n; ++k) {
    prefix.push_back(order[static_cast<std::size_t>(k)]);
    mass += c[order[static_cast<std::size_t>(k)]];
    std::vector<int> sorted = prefix;
    std::sort(sorted.begin(), sorted.end());
    const int rank = numerical_rank(select_columns(u.matrix(), sorted));
    if (rank < mass - 1e-10 * (1.0 + mass)) return sorted;
  }
  if (n <= kMaxPolytopeVectors) {
    const PolytopeMembership membership = in_basis_polytope(u, c);
    if (membership.violating_subset) return *membership.violating_subset;
  }
  return {};
}

ScalingSolution solve_radial_isotropic(const Frame& u,
                                       const CoefficientVector& c,
                                       double delta, int max_iter) {
  SolverOptions options;
  options.max_iter = max_iter;
  return solve_radial_isotropic(u, c, delta, options);
}

ScalingSolution solve_radial_isotropic(const Frame& u,
                                       const CoefficientVector& c,
                                       double delta,
                                       const SolverOptions& options) {
  if (!(delta > 0.0)) throw InvalidArgument("solver: delta must be positive");
  if (options.max_iter < 0) throw InvalidArgument("solver: max_iter must be >= 0");
  const int n = u.count();
  const int d = u.dim();
  Vector t = options.initial_t.value_or(Vector::Zero(n));
  check_inputs(u, c, t);
  gauge_fix(t);

  // Indices with c_i = 0 do not enter M(t); their t_i are left alone.
  std::vector<Index> active;
  for (Index i = 0; i < n; ++i) {
    if (c[i] > 0.0) active.push_back(i);
  }
  const Index na = static_cast<Index>(active.size());
  const double bound = divergence_bound(n, d);

  Evaluation current = evaluate(u, c, t);
  if (!current.nonsingular) {
    throw SingularMatrixError("solver: weighted frame operator is singular; "
                              "the vectors do not span R^d");
  }
  double gd_step = 1.0;

  for (int iter = 0;; ++iter) {
    const Matrix a = inverse_sqrt_spd(current.m);
    const RadialIsotropyCheck check = verify_radial_isotropic(u, c, a, delta);
    const Vector stationarity = stationarity_residual(u, t, a);
    double stationarity_inf = 0.0;
    for (const Index i : active) {
      stationarity_inf = std::max(stationarity_inf, std::abs(stationarity(i)));
    }
    log::debug("solver iter ", iter, " residual ", check.residual_inf,
               " stationarity ", stationarity_inf);
    if (check.residual_inf <= delta && stationarity_inf <= 10.0 * delta) {
      ScalingSolution solution;
      solution.t = t;
      solution.transform = a;
      solution.residual = check.residual;
      solution.residual_inf = check.residual_inf;
      solution.stationarity_inf = stationarity_inf;
      solution.iterations = iter;
      solution.converged = true;
      return solution;
    }
    if (iter >= options.max_iter) {
      fail("no convergence within " + std::to_string(options.max_iter) +
               " iterations (residual " + std::to_string(check.residual_inf) + ")",
           u, c, t, iter);
    }

    const Vector g_full = gradient_at(current, c);
    const Matrix h_full = hessian_at(current);
    Vector g(na);
    Matrix h(na, na);
    for (Index p = 0; p < na; ++p) {
      g(p) = g_full(active[static_cast<std::size_t>(p)]);
      for (Index q = 0; q < na; ++q) {
        h(p, q) = h_full(active[static_cast<std::size_t>(p)],
                         active[static_cast<std::size_t>(q)]);
      }
    }
    // H annihilates the all-ones vector on the active set; lifting that
    // direction leaves the Newton step unchanged because g is orthogonal to it.
    h.array() += 1.0 / static_cast<double>(na);

    Vector step;
    bool newton = false;
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    if (eig.info() == Eigen::Success) {
      const Vector& lambda = eig.eigenvalues();
      if (lambda.minCoeff() > kHessianConditionFloor * lambda.maxCoeff()) {
        step = -(eig.eigenvectors() *
                 (eig.eigenvectors().transpose() * g).cwiseQuotient(lambda));
        newton = true;
      }
    }
    double slope = newton ? g.dot(step) : 0.0;
    if (!newton || !(slope < 0.0)) {
      step = -g;
      slope = -g.squaredNorm();
      newton = false;
    }

    Vector full_step = Vector::Zero(n);
    for (Index p = 0; p < na; ++p) full_step(active[static_cast<std::size_t>(p)]) = step(p);

    const double f0 = objective_at(current, c, t);
    double scale = newton ? 1.0 : gd_step;
    bool accepted = false;
    Vector t_next;
    Evaluation next;
    if (newton && -slope < kFullStepDecrement) {
      t_next = t + full_step;
      next = evaluate(u, c, t_next);
      accepted = next.nonsingular;
    }
    for (int k = 0; !accepted && k < kMaxHalvings; ++k, scale *= 0.5) {
      t_next = t + scale * full_step;
      next = evaluate(u, c, t_next);
      if (objective_at(next, c, t_next) <= f0 + kArmijo * scale * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      fail("line search stalled (residual " + std::to_string(check.residual_inf) +
               ")",
           u, c, t, iter);
    }
    if (!newton) gd_step = 2.0 * scale;

    t = t_next;
    gauge_fix(t);
    if (t.lpNorm<Eigen::Infinity>() > bound) {
      fail("dual variables diverged past |t|_inf = " + std::to_string(bound), u,
           c, t, iter + 1);
    }
    // Re-evaluate on the gauge-fixed point so M(t) matches t exactly.
    current = evaluate(u, c, t);
    if (!current.nonsingular) {
      fail("weighted frame operator became singular", u, c, t, iter + 1);
    }
  }
}

std::pair<DiagonalScaling, Frame> diagonalize_transform(const Matrix& a,
                                                        const Frame& u) {
  if (a.rows() != u.dim() || a.cols() != u.dim()) {
    throw InvalidArgument("diagonalize_transform: transform must be d x d");
  }
  const Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  if (!(sigma(sigma.size() - 1) > 0.0)) {
    throw SingularMatrixError("diagonalize_transform: transform is singular");
  }
  DiagonalScaling scaling{sigma, svd.matrixV()};
  Frame rotated(scaling.rotation.transpose() * u.matrix());
  return {std::move(scaling), std::move(rotated)};
}

}  // namespace framescale
