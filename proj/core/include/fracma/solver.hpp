#pragma once

#include "fracma/barrier.hpp"
#include "fracma/config.hpp"
#include "fracma/detone.hpp"
#include "fracma/grid_function.hpp"
#include "fracma/rhs.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace fracma {

// Diagnostics of one continuation stage (one family floor, one fixed-point
// solve).
struct StageRecord {
  int stage = 0;          // k; stage k floors the family at 2^{-k}
  double epsilon = 0.0;   // actual family floor (min member lambda_min)
  int family_members = 0;
  int policy_updates = 0;  // Howard scans performed
  int sweeps = 0;          // damped Jacobi sweeps across all policies
  double residual = 0.0;   // sup over free nodes of |min_A L_A u - g(x, u)|
  // Against the warm start (the previous stage's solution): growing the
  // family can only lower the operator, so the solution should not rise.
  double stage_diff = 0.0;           // sup |u_k - u_{k-1}|
  double monotonicity_defect = 0.0;  // sup (u_k - u_{k-1})
};

// Solve-wide diagnostics.  The audit entries come from a verification pass
// that re-evaluates the operator with a denser, independently constructed
// family (sample_detone_family at verification_factor times the stage
// resolution) instead of the solver's own nested family.  All a-posteriori
// quantities are taken over the audit region |x| <= audit_radius
// (= audit_fraction * truncation radius): the truncated problem carries a
// collar layer u - phi ~ dist(x, boundary)^s whose kink is an artifact of
// the ball boundary and sharpens under grid refinement, so measurements
// that include it say nothing about the interior solution.
struct SolveReport {
  std::vector<StageRecord> stages;
  double final_residual = 0.0;     // last stage's residual (solver family)
  double verified_residual = 0.0;  // sup |D_s u - g(x, u)|, audit family

  double phi_lipschitz = 0.0;       // boundary datum, audit region
  double phi_semiconcavity = 0.0;
  double lipschitz = 0.0;           // solution, audit region
  double semiconcavity = 0.0;

  double min_interior_excess = 0.0;  // min over audit nodes of u - phi
  double eta0 = 0.0;       // min over audit nodes of (1 - s) D_s u (audit)
  double theta_max = 0.0;  // degeneracy threshold from the measured constants
  double barrier_tau = 0.0;
  double barrier_M = 0.0;
  double audit_radius = 0.0;

  std::vector<std::int64_t> audit_nodes;   // flat indices, |x| <= audit_radius
  std::vector<double> node_residuals;      // audit residual per audit node
  std::vector<double> node_argmin_lambda;  // lambda_min of the audit argmin
};

// Nested stage families used by the continuation: stage k consists of the
// identity plus detone_from_param over a fixed rotation net crossed with a
// log-eigenvalue lattice of step ln(2) / eigen_per_stage, truncated at
// lambda_min >= 2^{-k}.  Stage k's members are a bit-identical prefix of
// stage k+1's, so the infimum over them can only fall as k grows (this is
// what makes the continuation monotone) and per-member frozen data can be
// reused across stages.  n = 2 crosses `rotations` angles on [0, pi/2) with
// the eigenvalue line; n = 3 crosses a per-axis ZYZ net (rotations angles
// per axis) with the triangular log-spectrum lattice.
template <int N>
MatrixFamily<N> stage_family(int stage, int rotations, int eigen_per_stage);

// One monotone-scheme stage: find u = phi + o with o = 0 outside the ball
// |x| < truncation_radius (and outside the grid box) and
//   min over fam of L_A u (x) = g(x, u(x))   at every free node,
// by Howard policy iteration (scan for the minimizing member, then damped
// Jacobi sweeps with the frozen policy, repeat).  Iterates are clamped to
// the ordered bracket 0 <= o <= M w1 from the barrier; at a genuine fixed
// point neither clamp binds, so a binding clamp surfaces as residual.
// warm_start (same box) seeds the offsets; record (optional) receives the
// stage diagnostics.  Throws std::runtime_error when the residual does not
// reach config.tol_fp within config.max_policy_updates scans.
template <int N>
GridFunction<N> solve_truncated(std::shared_ptr<const ScalarField<N>> phi,
                                const RightHandSide<N>& rhs,
                                const MatrixFamily<N>& fam,
                                double truncation_radius,
                                const Barrier<N>& barrier,
                                const SolverConfig& config,
                                const GridFunction<N>* warm_start = nullptr,
                                StageRecord* record = nullptr);

// Full continuation for the global problem D_s u = u - phi with u - phi -> 0
// at infinity: build the boundary datum from the config, measure its
// constants, build the barrier, then run stages k = 1..config.stages on a
// fixed truncation ball (config.truncation_radius, or the box-inscribed ball
// when 0), warm-starting each stage from the previous one and reusing the
// frozen per-member data across stages.  Stops early once successive stages
// differ by at most config.tol_fp in sup norm (the continuation has
// saturated at this resolution).  Finishes with the audit pass that fills
// the verified_* entries of the report.
template <int N>
std::pair<GridFunction<N>, SolveReport> solve(const SolverConfig& config);

}  // namespace fracma
