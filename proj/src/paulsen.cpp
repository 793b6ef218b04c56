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

#include "framescale/paulsen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "framescale/error.hpp"
#include "framescale/kernels.hpp"
#include "framescale/log.hpp"
#include "framescale/majorization.hpp"
#include "framescale/rng.hpp"

namespace framescale {
namespace {

// Exhaustive when affordable, sampled past the cap (if allowed).
struct PositionVerdict {
  bool independent = false;
  bool exhaustive = true;
};

PositionVerdict check_general_position(const Frame& u,
                                       const GeneralPositionOptions& options,
                                       std::uint64_t seed, int attempt) {
  const int d = u.dim();
  const int n = u.count();
  if (binomial(n, d) <= options.exhaustive_cap) {
    return {!kernels::parallel::first_dependent_subset(u.matrix(), d,
                                                       kRankTolerance)
                 .has_value(),
            true};
  }
  if (options.sampled_subsets == 0) {
    throw SizeLimitExceeded("general position check: C(" + std::to_string(n) +
                            ", " + std::to_string(d) + ") exceeds the cap");
  }
  Engine engine = make_engine(seed, "general_position_sample",
                              static_cast<std::uint64_t>(attempt));
  std::vector<int> pool(static_cast<std::size_t>(n));
  Matrix sub(d, d);
  for (std::uint64_t s = 0; s < options.sampled_subsets; ++s) {
    std::iota(pool.begin(), pool.end(), 0);
    for (int k = 0; k < d; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(pool[static_cast<std::size_t>(k)],
                pool[static_cast<std::size_t>(pick(engine))]);
      sub.col(k) = u.matrix().col(pool[static_cast<std::size_t>(k)]);
    }
    if (!kernels::columns_independent(sub, kRankTolerance)) return {false, false};
  }
  return {true, false};
}

// eta_i uniform in the ball of radius eta_max.
Matrix sample_perturbation(int d, int n, double eta_max, std::uint64_t seed,
                           int attempt) {
  Engine engine = make_engine(seed, "perturb_to_general_position",
                              static_cast<std::uint64_t>(attempt));
  Matrix eta = gaussian_matrix(engine, d, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index i = 0; i < n; ++i) {
    const double radius = eta_max * std::pow(unit(engine), 1.0 / d);
    const double norm = eta.col(i).norm();
    eta.col(i) *= norm > 0.0 ? radius / norm : 0.0;
  }
  return eta;
}

void check_repair_input(const Frame& v, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw InvalidArgument("repair: delta must be positive");
  }
  if (v.count() <= v.dim()) {
    throw InvalidArgument("repair: need n > d (got d = " + std::to_string(v.dim()) +
                          ", n = " + std::to_string(v.count()) + ")");
  }
  for (Index i = 0; i < v.count(); ++i) {
    if (!(v.vector(i).norm() > 0.0)) {
      throw InvalidArgument("repair: vector " + std::to_string(i) + " is zero");
    }
  }
}

double checked_eps(const Frame& v) {
  const double eps = frame_metrics(v).eps;
  if (!(eps < 0.5)) {
    throw InvalidArgument("repair: input is only " + std::to_string(eps) +
                          "-nearly equal norm Parseval; need eps < 1/2");
  }
  return eps;
}

void finish_report(RepairReport& r) {
  const double d = r.input.dim();
  r.dist_sq_vw = dist_sq(r.input, r.output);
  r.dist_sq_vu = dist_sq(r.input, r.perturbed);
  r.dist_sq_uw = dist_sq(r.perturbed, r.output);
  r.bound = 20.0 * r.eps * d * d;
  r.perturbed_metrics = frame_metrics(r.perturbed);
  r.output_metrics = frame_metrics(r.output);
  r.certified = r.dist_sq_vw <= r.bound && r.output_metrics.eps <= r.delta &&
                r.scaling.converged;
}

InequalityCheck inequality(std::string id, std::string statement, double lhs,
                           double rhs, double tolerance) {
  InequalityCheck c{std::move(id), std::move(statement), lhs, rhs, rhs - lhs,
                    tolerance, false};
  c.holds = c.slack >= -tolerance;
  return c;
}

InequalityCheck equality(std::string id, std::string statement, double lhs,
                         double rhs, double tolerance) {
  InequalityCheck c{std::move(id), std::move(statement), lhs, rhs,
                    -std::abs(lhs - rhs), tolerance, false};
  c.holds = c.slack >= -tolerance;
  return c;
}

}  // namespace

PerturbationBudget budget_from_eta(double eta_max, int d, int n) {
  PerturbationBudget b;
  b.eta_max = eta_max;
  b.gamma = eta_max * eta_max + 2.0 * eta_max;
  b.gamma_prime = static_cast<double>(n) / static_cast<double>(d) * b.gamma;
  return b;
}

PerturbationBudget default_budget(double eps, int d, int n) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw InvalidArgument("default_budget: eps must lie in [0, 1)");
  }
  const double ratio = static_cast<double>(d) / static_cast<double>(n);
  // 1 - sqrt(1 - eps) and sqrt(1 + x) - 1, written without cancellation.
  const double shrink = eps / (1.0 + std::sqrt(1.0 - eps));
  const double gamma_cap = shrink * eps * ratio;
  const double eta_for_gamma = gamma_cap / (std::sqrt(1.0 + gamma_cap) + 1.0);
  const double eta = std::min({eps / (2.0 * n), eta_for_gamma, 1e-8 * std::sqrt(ratio)});
  return budget_from_eta(eta, d, n);
}

double solver_tolerance(double delta, double eps, int d) {
  const double dd = static_cast<double>(d);
  return std::max(delta * eps / (dd * dd * dd), std::min(1e-12, delta / dd));
}

Frame perturb_to_general_position(const Frame& u0,
                                  const PerturbationBudget& budget,
                                  std::uint64_t seed) {
  return perturb_to_general_position(u0, budget, seed, GeneralPositionOptions{})
      .frame;
}

PerturbationOutcome perturb_to_general_position(
    const Frame& u0, const PerturbationBudget& budget, std::uint64_t seed,
    const GeneralPositionOptions& options) {
  if (!(budget.eta_max >= 0.0) || !std::isfinite(budget.eta_max)) {
    throw InvalidArgument("perturbation budget must be finite and nonnegative");
  }
  const int d = u0.dim();
  const int n = u0.count();
  if (n < d) throw InvalidArgument("general position needs n >= d");
  const bool exhaustive = binomial(n, d) <= options.exhaustive_cap;
  // Without an exhaustive check, only a random perturbation (generic with
  // probability one) is accepted; the unperturbed input may sit on a
  // dependency that sampling misses.
  const int first = (exhaustive || budget.eta_max == 0.0) ? 0 : 1;
  const int last = budget.eta_max > 0.0 ? options.max_attempts : 0;
  for (int attempt = first; attempt <= last; ++attempt) {
    Matrix candidate = u0.matrix();
    if (attempt > 0) {
      candidate += sample_perturbation(d, n, budget.eta_max, seed, attempt);
    }
    Frame frame(std::move(candidate));
    const PositionVerdict verdict =
        check_general_position(frame, options, seed, attempt);
    if (verdict.independent) {
      log::debug("general position reached after ", attempt, " attempt(s)");
      return {std::move(frame), attempt, verdict.exhaustive};
    }
  }
  throw Error("perturb_to_general_position: no attempt reached general "
              "position; eta_max = " + std::to_string(budget.eta_max) +
              " is at the level of numerical noise");
}

Frame scaled_output(const Frame& u, const Matrix& a) {
  Matrix w = a * u.matrix();
  const double target = std::sqrt(static_cast<double>(u.dim()) / u.count());
  for (Index i = 0; i < w.cols(); ++i) {
    const double norm = w.col(i).norm();
    if (!(norm > 0.0)) throw InvalidArgument("scaled_output: A u_i is zero");
    w.col(i) *= target / norm;
  }
  return Frame(std::move(w));
}

Frame helper_frame_wtilde(const Frame& u, const DiagonalScaling& scaling) {
  if (scaling.lambdas.size() != u.dim()) {
    throw InvalidArgument("helper_frame_wtilde: scaling dimension mismatch");
  }
  Matrix w = scaling.lambdas.asDiagonal() * u.matrix();
  for (Index i = 0; i < w.cols(); ++i) {
    const double norm = w.col(i).norm();
    if (!(norm > 0.0)) {
      throw InvalidArgument("helper_frame_wtilde: M u_" + std::to_string(i) +
                            " is zero");
    }
    w.col(i) *= u.vector(i).norm() / norm;
  }
  return Frame(std::move(w));
}

RepairReport repair(const Frame& v, double delta, std::uint64_t seed,
                    const RepairOptions& options) {
  check_repair_input(v, delta);
  const int d = v.dim();
  const int n = v.count();
  const double eps = checked_eps(v);
  const Frame normalized = renormalize(v, static_cast<double>(d) / n);
  const PerturbationBudget budget = default_budget(eps, d, n);
  PerturbationOutcome outcome =
      perturb_to_general_position(normalized, budget, seed, options.general_position);

  const CoefficientVector c = CoefficientVector::uniform(n, d);
  const double solver_delta = solver_tolerance(delta, eps, d);
  ScalingSolution scaling =
      solve_radial_isotropic(outcome.frame, c, solver_delta, options.max_iter);
  Frame w = scaled_output(outcome.frame, scaling.transform);

  RepairReport r(v, std::move(outcome.frame), std::move(w));
  r.eps = eps;
  r.delta = delta;
  r.solver_delta = solver_delta;
  r.seed = seed;
  r.budget = budget;
  r.perturbation_attempts = outcome.attempts;
  r.general_position_exhaustive = outcome.exhaustive;
  r.scaling = std::move(scaling);
  finish_report(r);
  log::info("repair d=", d, " n=", n, " eps=", eps, " dist^2=", r.dist_sq_vw,
            " bound=", r.bound, " iterations=", r.scaling.iterations,
            " certified=", r.certified);
  return r;
}

RepairReport recertify(const Frame& v, const Frame& u, const Frame& w,
                       double delta, std::uint64_t seed,
                       const RepairOptions& options) {
  check_repair_input(v, delta);
  if (u.dim() != v.dim() || u.count() != v.count() || w.dim() != v.dim() ||
      w.count() != v.count()) {
    throw InvalidArgument("recertify: frames differ in shape");
  }
  const int d = v.dim();
  const int n = v.count();
  const double eps = checked_eps(v);
  const CoefficientVector c = CoefficientVector::uniform(n, d);
  const double solver_delta = solver_tolerance(delta, eps, d);

  RepairReport r(v, u, w);
  r.eps = eps;
  r.delta = delta;
  r.solver_delta = solver_delta;
  r.seed = seed;
  r.budget = default_budget(eps, d, n);
  r.perturbation_attempts = -1;
  const PositionVerdict verdict =
      check_general_position(u, options.general_position, seed, 0);
  r.general_position_exhaustive = verdict.exhaustive && verdict.independent;
  r.scaling = solve_radial_isotropic(u, c, solver_delta, options.max_iter);
  finish_report(r);
  return r;
}

const InequalityCheck& AuditRecord::find(const std::string& id) const {
  for (const InequalityCheck& c : checks) {
    if (c.id == id) return c;
  }
  throw InvalidArgument("audit record has no check '" + id + "'");
}

AuditRecord audit_lemma_chain(const RepairReport& report) {
  const int d = report.input.dim();
  const int n = report.input.count();
  const double dd = static_cast<double>(d);
  const double eps = frame_metrics(report.input).eps;
  const double gp = report.budget.gamma_prime;
  const double solver_delta = report.solver_delta;
  // Floating-point allowance: all quantities below are sums of O(d) masses
  // weighted by indices up to d.
  const double tol = 1e-12 * dd * dd;

  auto [scaling, u_rot] = diagonalize_transform(report.scaling.transform,
                                                report.perturbed);
  const Frame w_rot(scaling.rotation.transpose() * report.output.matrix());
  const Frame w_tilde = helper_frame_wtilde(u_rot, scaling);

  AuditRecord audit;
  double worst_shortfall = 0.0;
  double major_tol = 0.0;
  double l1_sum = 0.0;
  double transport_sum = 0.0;
  Vector x_total = Vector::Zero(d);
  Vector y_total = Vector::Zero(d);
  for (Index i = 0; i < n; ++i) {
    const Vector x = u_rot.vector(i).array().square();
    const Vector y = w_tilde.vector(i).array().square();
    const double t = majorization_tolerance(y, x);
    major_tol = std::max(major_tol, t);
    if (!majorizes(y, x, t)) ++audit.majorization_failures;
    worst_shortfall = std::max(worst_shortfall, prefix_shortfall(y, x));
    l1_sum += (x - y).lpNorm<1>();
    transport_sum += transport_distance(y, x);
    x_total += x;
    y_total += y;
  }
  const double transport_total = transport_distance(y_total, x_total);
  const double dist_u_wt = dist_sq(u_rot, w_tilde);
  const double dist_wt_w = dist_sq(w_tilde, w_rot);
  const double dist_u_w = dist_sq(u_rot, w_rot);

  auto& out = audit.checks;
  out.push_back(inequality("a", "max_i prefix shortfall of y_i against x_i <= 0",
                           worst_shortfall, 0.0, major_tol));
  out.push_back(inequality("b1", "dist^2(U, W~) <= sum_i |x_i - y_i|_1",
                           dist_u_wt, l1_sum, tol));
  out.push_back(inequality("b2", "sum_i |x_i - y_i|_1 <= sum_i T(y_i, x_i)",
                           l1_sum, transport_sum, tol));
  // The step above is not valid in general (one unit moved one place has
  // l1 = 2, T = 1); every prefix gap bounds two l1 terms, giving the factor 2.
  out.push_back(inequality("b2x", "sum_i |x_i - y_i|_1 <= 2 sum_i T(y_i, x_i)",
                           l1_sum, 2.0 * transport_sum, tol));
  out.push_back(equality("c", "sum_i T(y_i, x_i) == T(sum_i y_i, sum_i x_i)",
                         transport_sum, transport_total, tol));
  out.push_back(inequality("d", "T(sum y, sum x) <= (4 eps + gamma' + d delta') d^2",
                           transport_total,
                           (4.0 * eps + gp + dd * solver_delta) * dd * dd, tol));
  out.push_back(inequality("e", "dist^2(W~, W) <= 2 gamma'", dist_wt_w,
                           2.0 * gp, tol));
  out.push_back(inequality("f1", "dist^2(U, W) <= 2 dist^2(U, W~) + 2 dist^2(W~, W)",
                           dist_u_w, 2.0 * dist_u_wt + 2.0 * dist_wt_w, tol));
  out.push_back(inequality("f2", "dist^2(U, W) <= 8 eps d^2 + 4 gamma' d^2",
                           dist_u_w, (8.0 * eps + 4.0 * gp) * dd * dd, tol));
  // What the factor-2 chain proves: 2 (2 T + 2 gamma') with sum_j j = d(d+1)/2.
  out.push_back(inequality("f2x", "dist^2(U, W) <= 2 (4 eps + gamma' + d delta') d (d+1) + 4 gamma'",
                           dist_u_w,
                           2.0 * (4.0 * eps + gp + dd * solver_delta) * dd * (dd + 1.0) +
                               4.0 * gp,
                           tol));
  out.push_back(inequality("f3", "dist^2(V, U) <= eps d", report.dist_sq_vu,
                           eps * dd, tol));
  out.push_back(inequality("f4", "dist^2(V, W) <= 2 dist^2(V, U) + 2 dist^2(U, W)",
                           report.dist_sq_vw,
                           2.0 * report.dist_sq_vu + 2.0 * report.dist_sq_uw, tol));
  out.push_back(inequality("f5", "dist^2(V, W) <= 20 eps d^2", report.dist_sq_vw,
                           20.0 * eps * dd * dd, tol));

  // Hypotheses the chain relies on.
  const Frame normalized = renormalize(report.input, dd / n);
  const double eta_seen =
      (report.perturbed.matrix() - normalized.matrix()).colwise().norm().maxCoeff();
  out.push_back(inequality("hyp-eta", "max_i |eta_i| <= eta_max", eta_seen,
                           report.budget.eta_max, 1e-15));
  out.push_back(inequality("hyp-gamma", "gamma' <= eps", gp, eps, 1e-15));
  out.push_back(inequality("hyp-u", "U is 4 eps-nearly equal norm Parseval",
                           frame_metrics(report.perturbed).eps, 4.0 * eps, tol));
  const RadialIsotropyCheck iso = verify_radial_isotropic(
      report.perturbed, CoefficientVector::uniform(n, d),
      report.scaling.transform, solver_delta);
  out.push_back(inequality("hyp-iso", "|J|_inf <= delta'", iso.residual_inf,
                           solver_delta, 0.0));

  audit.all_hold = audit.majorization_failures == 0 &&
                   std::all_of(out.begin(), out.end(),
                               [](const InequalityCheck& c) { return c.holds; });
  audit.corrected_holds =
      audit.majorization_failures == 0 &&
      std::all_of(out.begin(), out.end(), [](const InequalityCheck& c) {
        return c.holds || c.id == "b2" || c.id == "f2";
      });
  return audit;
}

}  // namespace framescale
