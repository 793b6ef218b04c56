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

// Repair of an eps-nearly equal norm Parseval frame V into an equal norm
// Parseval frame W with dist^2(V, W) <= 20 eps d^2:
//
//   1. u_i = sqrt(d/n) v_i / |v_i| + eta_i, with eta small enough that the
//      squared-distance budget is unaffected and every d of the u_i are
//      linearly independent;
//   2. A places U in radial isotropic position for c_i = d/n;
//   3. w_i = sqrt(d/n) A u_i / |A u_i|.
//
// audit_lemma_chain() re-derives each inequality of the distance bound on a
// finished report, in the basis where the transform is diagonal.

#ifndef FRAMESCALE_PAULSEN_HPP_
#define FRAMESCALE_PAULSEN_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "framescale/barthe_solver.hpp"
#include "framescale/basis_polytope.hpp"
#include "framescale/frames.hpp"

namespace framescale {

struct PerturbationBudget {
  double eta_max = 0.0;      // bound on every |eta_i|
  double gamma = 0.0;        // eta_max^2 + 2 eta_max
  double gamma_prime = 0.0;  // (n/d) gamma
};

PerturbationBudget budget_from_eta(double eta_max, int d, int n);

/// Largest eta_max meeting all pipeline conditions for this eps:
/// eta_max <= eps / (2n), gamma <= (1 - sqrt(1 - eps)) eps d / n, and a
/// 1e-8 sqrt(d/n) floor on the perturbation scale.
PerturbationBudget default_budget(double eps, int d, int n);

/// Target residual handed to the solver so that W comes out delta-nearly
/// equal norm Parseval: max(delta eps / d^3, min(1e-12, delta / d)).
double solver_tolerance(double delta, double eps, int d);

struct GeneralPositionOptions {
  // Exhaustive d-subset checks up to this many subsets.
  std::uint64_t exhaustive_cap = kDefaultSubsetCap;
  // Past the cap: check this many random d-subsets instead, or refuse with
  // SizeLimitExceeded when zero.
  std::uint64_t sampled_subsets = 0;
  int max_attempts = 16;
};

struct PerturbationOutcome {
  Frame frame;
  int attempts = 0;         // 0 means the unperturbed input was accepted
  bool exhaustive = true;   // false when only sampled subsets were checked
};

/// Exhaustively verified; throws SizeLimitExceeded past kDefaultSubsetCap and
/// Error when no attempt reaches general position.
Frame perturb_to_general_position(const Frame& u0,
                                  const PerturbationBudget& budget,
                                  std::uint64_t seed);
PerturbationOutcome perturb_to_general_position(
    const Frame& u0, const PerturbationBudget& budget, std::uint64_t seed,
    const GeneralPositionOptions& options);

struct RepairOptions {
  int max_iter = 200;
  GeneralPositionOptions general_position{100'000, 20'000, 16};
};

struct RepairReport {
  RepairReport(Frame v, Frame u, Frame w)
      : input(std::move(v)), perturbed(std::move(u)), output(std::move(w)) {}

  Frame input;      // V
  Frame perturbed;  // U
  Frame output;     // W
  double eps = 0.0;
  double delta = 0.0;
  double solver_delta = 0.0;
  std::uint64_t seed = 0;
  double dist_sq_vw = 0.0;
  double dist_sq_vu = 0.0;
  double dist_sq_uw = 0.0;
  double bound = 0.0;  // 20 eps d^2
  PerturbationBudget budget;
  int perturbation_attempts = 0;
  bool general_position_exhaustive = true;
  ScalingSolution scaling;
  FrameMetrics perturbed_metrics;
  FrameMetrics output_metrics;
  bool certified = false;
};

/// Throws InvalidArgument when n <= d, some v_i = 0, eps >= 1/2 or
/// delta <= 0, and NonConvergenceError when the solver fails.
RepairReport repair(const Frame& v, double delta, std::uint64_t seed,
                    const RepairOptions& options = {});

/// Rebuilds a report from the three frames alone: re-measures eps, recomputes
/// the budget and every distance, and re-solves for the transform on U. The
/// stored W is what gets certified.
RepairReport recertify(const Frame& v, const Frame& u, const Frame& w,
                       double delta, std::uint64_t seed,
                       const RepairOptions& options = {});

/// w_i = sqrt(d/n) A u_i / |A u_i|.
Frame scaled_output(const Frame& u, const Matrix& a);

/// w~_i = |u_i| M u_i / |M u_i| for M = diag(lambdas).
Frame helper_frame_wtilde(const Frame& u, const DiagonalScaling& scaling);

struct InequalityCheck {
  // "a" .. "f5" are the steps of the distance argument, "hyp-*" its
  // hypotheses. b2 (l1 <= T) does not hold in general and so f2 is not
  // implied by the chain; "b2x" and "f2x" are the corrected versions.
  std::string id;
  std::string statement;  // human-readable form of lhs <= rhs (or ==)
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;      // rhs - lhs, or -|lhs - rhs| for equalities
  double tolerance = 0.0;  // floating-point allowance on the slack
  bool holds = false;      // slack >= -tolerance
};

struct AuditRecord {
  std::vector<InequalityCheck> checks;
  int majorization_failures = 0;
  bool all_hold = false;        // every check, as stated
  bool corrected_holds = false; // every check with b2, f2 replaced by b2x, f2x

  const InequalityCheck& find(const std::string& id) const;
};

AuditRecord audit_lemma_chain(const RepairReport& report);

}  // namespace framescale

#endif  // FRAMESCALE_PAULSEN_HPP_
