#include "fracma/solver.hpp"

#include "fracma/checks.hpp"
#include "fracma/ma_operator.hpp"
#include "fracma/parallel.hpp"
#include "fracma/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fracma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// --- nested stage families --------------------------------------------------
// Appends the members whose floor sits between stage-1 and stage.  The log
// step ln(2)/q is one shared double, so a member generated at stage k is
// bit-identical to the same member generated at any later stage: prefixes
// really are prefixes and frozen per-member data stays valid.

void append_stage_members(MatrixFamily<2>& fam, int stage, int rotations,
                          int q) {
  const double step = std::numbers::ln2 / q;
  for (int j = (stage - 1) * q + 1; j <= stage * q; ++j) {
    for (int sign = 0; sign < 2; ++sign) {
      const double t = (sign == 0 ? 1.0 : -1.0) * (j * step);
      for (int i = 0; i < rotations; ++i) {
        DetOneParam<2> p;
        p.alpha = i * (std::numbers::pi / 2.0) / rotations;
        p.t = t;
        fam.params.push_back(p);
        fam.members.push_back(detone_from_param(p));
      }
    }
  }
  fam.floor_theta = std::exp(-(stage * q) * step);
}

void append_stage_members(MatrixFamily<3>& fam, int stage, int rotations,
                          int q) {
  const double step = std::numbers::ln2 / q;
  const double astep = (std::numbers::pi / 2.0) / rotations;
  // Log-spectra (a, b, -a-b) step with min component -ring * step; stage k
  // admits rings up to k * q.
  for (int ring = (stage - 1) * q + 1; ring <= stage * q; ++ring) {
    for (int a = -ring; a <= 2 * ring; ++a) {
      for (int b = -ring; b <= 2 * ring; ++b) {
        if (std::max({-a, -b, a + b}) != ring) continue;
        for (int iz = 0; iz < rotations; ++iz) {
          for (int iy = 0; iy < rotations; ++iy) {
            for (int ic = 0; ic < rotations; ++ic) {
              DetOneParam<3> p;
              p.l1 = a * step;
              p.l2 = b * step;
              p.za = iz * astep;
              p.yb = iy * astep;
              p.zc = ic * astep;
              fam.params.push_back(p);
              fam.members.push_back(detone_from_param(p));
            }
          }
        }
      }
    }
  }
  fam.floor_theta = std::exp(-(stage * q) * step);
}

template <int N>
MatrixFamily<N> identity_family() {
  MatrixFamily<N> fam;
  fam.floor_theta = 1.0;
  fam.members.push_back(DetOneMatrix<N>::identity());
  fam.params.push_back(DetOneParam<N>{});
  return fam;
}

// --- per-solve workspace ------------------------------------------------------
// Free nodes (strictly inside the truncation ball), their data, and the
// frozen per-(node, member) evaluation split, stored column-major
// [member * F + node] and grown by whole columns as the family grows.

template <int N>
struct Workspace {
  GridBox<N> box;
  double s = 0.0;
  QuadratureScheme quad;

  std::vector<std::int64_t> free_nodes;  // flat indices
  std::vector<Vec<N>> coord;
  std::vector<double> phi_at;  // base field at the node
  std::vector<double> cap;     // barrier ceiling M w1 at the node

  std::vector<double> base;  // frozen base_value
  std::vector<double> mass;  // frozen total kernel mass
  std::vector<double> diag;  // mass - self_mass: Newton denominator
  int columns = 0;

  std::int64_t count() const {
    return static_cast<std::int64_t>(free_nodes.size());
  }
};

template <int N>
Workspace<N> make_workspace(const GridFunction<N>& u, double truncation_radius,
                            const Barrier<N>& barrier, double s,
                            const QuadratureScheme& quad) {
  Workspace<N> ws;
  ws.box = u.box();
  ws.s = s;
  ws.quad = quad;
  for (std::int64_t flat = 0; flat < ws.box.node_count(); ++flat) {
    const Vec<N> x = ws.box.coord(flat);
    if (x.norm() < truncation_radius * (1.0 - 1e-12)) {
      ws.free_nodes.push_back(flat);
      ws.coord.push_back(x);
    }
  }
  const std::int64_t F = ws.count();
  ws.phi_at.resize(F);
  ws.cap.resize(F);
  const ScalarField<N>& base = u.base();
  parallel_for(F, [&](std::int64_t f) {
    ws.phi_at[f] = base.value(ws.coord[f]);
    ws.cap[f] = barrier.M * barrier.w1->value(ws.coord[f]);
  });
  return ws;
}

template <int N>
void extend_columns(Workspace<N>& ws, const MatrixFamily<N>& fam,
                    const GridFunction<N>& u) {
  const int old_cols = ws.columns;
  const int new_cols = static_cast<int>(fam.members.size());
  if (new_cols <= old_cols) return;
  const std::int64_t F = ws.count();
  ws.base.resize(std::size_t(new_cols) * F);
  ws.mass.resize(std::size_t(new_cols) * F);
  ws.diag.resize(std::size_t(new_cols) * F);
  parallel_for(std::int64_t(new_cols - old_cols) * F, [&](std::int64_t idx) {
    const int c = old_cols + static_cast<int>(idx / F);
    const std::int64_t f = idx % F;
    const FrozenLA frozen =
        freeze_LA(u, ws.coord[f], fam.members[c].matrix(), ws.s, ws.quad);
    const std::size_t slot = std::size_t(c) * F + f;
    ws.base[slot] = frozen.base_value;
    ws.mass[slot] = frozen.mass;
    ws.diag[slot] = frozen.mass - frozen.self_mass;
  });
  ws.columns = new_cols;
}

// --- one stage: Howard policy iteration + damped Jacobi ----------------------

struct StageOutcome {
  int policy_updates = 0;
  int sweeps = 0;
  double residual = 0.0;
};

template <int N>
StageOutcome run_stage(Workspace<N>& ws, const MatrixFamily<N>& fam,
                       const RightHandSide<N>& rhs, const SolverConfig& config,
                       int stage_label, GridFunction<N>& u) {
  const std::int64_t F = ws.count();
  const int C = static_cast<int>(fam.members.size());
  const double inner_tol = 0.25 * config.tol_fp;
  StageOutcome out;

  std::vector<int> policy(F, 0);
  std::vector<int> scanned(F, 0);
  std::vector<double> next(F, 0.0);
  std::vector<double> local_res(F, 0.0);

  const auto eval_column = [&](std::int64_t f, int c) {
    const std::size_t slot = std::size_t(c) * F + f;
    const FrozenLA frozen{ws.base[slot], ws.mass[slot], 0.0};
    return eval_LA_frozen(u, ws.coord[f], fam.members[c].matrix(), ws.s,
                          ws.quad, frozen);
  };
  const auto node_residual = [&](std::int64_t f, double value) {
    return value - rhs(ws.coord[f], ws.phi_at[f] + u.offsets()[ws.free_nodes[f]]);
  };

  for (int round = 0;; ++round) {
    // Bellman scan: true minimum over the whole family, so the residual it
    // yields is the honest discrete-equation residual.
    parallel_for(F, [&](std::int64_t f) {
      int best_c = 0;
      double best = eval_column(f, 0);
      for (int c = 1; c < C; ++c) {
        const double v = eval_column(f, c);
        if (v < best) {
          best = v;
          best_c = c;
        }
      }
      scanned[f] = best_c;
      local_res[f] = node_residual(f, best);
    });
    ++out.policy_updates;
    double res = 0.0;
    for (std::int64_t f = 0; f < F; ++f) res = std::max(res, std::abs(local_res[f]));
    out.residual = res;
    if (res <= config.tol_fp) return out;
    if (round + 1 >= config.max_policy_updates) {
      std::ostringstream msg;
      msg << "fixed-point solve";
      if (stage_label > 0) msg << " (stage " << stage_label << ")";
      msg << " did not converge: residual " << res << " > " << config.tol_fp
          << " after " << out.policy_updates << " policy updates and "
          << out.sweeps << " sweeps";
      throw std::runtime_error(msg.str());
    }
    policy.swap(scanned);

    // Damped Jacobi with the frozen policy: one Newton step on the exact
    // diagonal per node, clamped into the barrier bracket [0, M w1].
    for (int sweep = 0; sweep < config.max_sweeps; ++sweep) {
      parallel_for(F, [&](std::int64_t f) {
        const int c = policy[f];
        const double r = node_residual(f, eval_column(f, c));
        const double denom =
            std::max(ws.diag[std::size_t(c) * F + f], 0.0) + rhs.monotonicity;
        const double o = u.offsets()[ws.free_nodes[f]];
        next[f] = std::clamp(o + config.damping * r / denom, 0.0, ws.cap[f]);
        local_res[f] = std::abs(r);
      });
      ++out.sweeps;
      double sres = 0.0;
      for (std::int64_t f = 0; f < F; ++f) {
        sres = std::max(sres, local_res[f]);
        u.offsets()[ws.free_nodes[f]] = next[f];
      }
      if (sres <= inner_tol) break;
    }
  }
}

template <int N>
void fill_stage_record(const Workspace<N>& ws, const MatrixFamily<N>& fam,
                       const StageOutcome& out,
                       const std::vector<double>& before,
                       const GridFunction<N>& u, StageRecord* record) {
  if (!record) return;
  record->epsilon = fam.floor_theta;
  record->family_members = static_cast<int>(fam.members.size());
  record->policy_updates = out.policy_updates;
  record->sweeps = out.sweeps;
  record->residual = out.residual;
  double diff = 0.0;
  double defect = -std::numeric_limits<double>::infinity();
  for (std::int64_t f = 0; f < ws.count(); ++f) {
    const double d = u.offsets()[ws.free_nodes[f]] - before[ws.free_nodes[f]];
    diff = std::max(diff, std::abs(d));
    defect = std::max(defect, d);
  }
  record->stage_diff = diff;
  record->monotonicity_defect = defect;
}

}  // namespace

template <int N>
MatrixFamily<N> stage_family(int stage, int rotations, int eigen_per_stage) {
  require(stage >= 1, "stage_family: stage must be >= 1");
  require(rotations >= 1, "stage_family: rotations must be >= 1");
  require(eigen_per_stage >= 1, "stage_family: eigen_per_stage must be >= 1");
  MatrixFamily<N> fam = identity_family<N>();
  for (int k = 1; k <= stage; ++k) {
    append_stage_members(fam, k, rotations, eigen_per_stage);
  }
  return fam;
}

template <int N>
GridFunction<N> solve_truncated(std::shared_ptr<const ScalarField<N>> phi,
                                const RightHandSide<N>& rhs,
                                const MatrixFamily<N>& fam,
                                double truncation_radius,
                                const Barrier<N>& barrier,
                                const SolverConfig& config,
                                const GridFunction<N>* warm_start,
                                StageRecord* record) {
  config.validate();
  require(phi != nullptr, "solve_truncated: boundary datum must be set");
  require(!fam.members.empty(), "solve_truncated: family must be non-empty");
  require(rhs.monotonicity > 0.0 && bool(rhs.evaluator),
          "solve_truncated: rhs must be strictly monotone and evaluable");
  require(barrier.w1 != nullptr, "solve_truncated: barrier must be built");
  require(std::isfinite(truncation_radius) && truncation_radius > 0.0 &&
              truncation_radius <= config.box_radius * (1.0 + 1e-12),
          "solve_truncated: truncation radius must lie in (0, box_radius]");

  const GridBox<N> box{config.box_radius, config.nodes_per_side};
  std::vector<double> offsets(box.node_count(), 0.0);
  if (warm_start != nullptr) {
    require(warm_start->box().nodes_per_side == box.nodes_per_side &&
                warm_start->box().radius == box.radius,
            "solve_truncated: warm start grid does not match the config grid");
    offsets = warm_start->offsets();
  }
  GridFunction<N> u(box, std::move(phi), std::move(offsets), 0.0);

  Workspace<N> ws =
      make_workspace(u, truncation_radius, barrier, config.s, config.quad);
  require(!ws.free_nodes.empty(),
          "solve_truncated: truncation ball contains no grid nodes");

  // u = phi outside the ball; inside, start within the ordered bracket.
  std::vector<char> is_free(box.node_count(), 0);
  for (const std::int64_t flat : ws.free_nodes) is_free[flat] = 1;
  for (std::int64_t flat = 0; flat < box.node_count(); ++flat) {
    if (!is_free[flat]) u.offsets()[flat] = 0.0;
  }
  for (std::int64_t f = 0; f < ws.count(); ++f) {
    double& o = u.offsets()[ws.free_nodes[f]];
    o = std::clamp(o, 0.0, ws.cap[f]);
  }

  const std::vector<double> before = u.offsets();
  extend_columns(ws, fam, u);
  const StageOutcome out =
      run_stage(ws, fam, rhs, config, record ? record->stage : 0, u);
  fill_stage_record(ws, fam, out, before, u, record);
  return u;
}

template <int N>
std::pair<GridFunction<N>, SolveReport> solve(const SolverConfig& config) {
  config.validate();
  require(config.dimension == N,
          "solve: config dimension does not match the instantiation");

  Mat<N> Q = Mat<N>::Zero();
  for (int d = 0; d < N; ++d) Q(d, d) = config.cone_eigenvalues[d];
  std::shared_ptr<const ScalarField<N>> phi =
      make_boundary_datum<N>(Q, config.bump_amplitude, config.bump_decay);
  const GridBox<N> box{config.box_radius, config.nodes_per_side};

  const double truncation = config.truncation_radius > 0.0
                                ? config.truncation_radius
                                : config.box_radius;
  require(truncation <= config.box_radius * (1.0 + 1e-12),
          "solve: truncation radius must not exceed the box radius");
  const double audit_radius = config.audit_fraction * truncation;

  SolveReport report;
  report.audit_radius = audit_radius;
  report.phi_lipschitz = measure_field_lipschitz(*phi, box, 2, audit_radius);
  report.phi_semiconcavity =
      measure_field_semiconcavity(*phi, box, 2, audit_radius);
  const RightHandSide<N> rhs = RightHandSide<N>::model_problem(
      phi, report.phi_lipschitz, report.phi_semiconcavity);

  const double tau_cap =
      std::min(2.0 * config.s - 1.0, N - 2.0 * config.s);
  const double tau =
      config.barrier_tau > 0.0 ? config.barrier_tau : 0.5 * tau_cap;
  const Barrier<N> barrier = build_barrier<N>(phi, config.s, tau, config.quad);
  report.barrier_tau = tau;
  report.barrier_M = barrier.M;

  GridFunction<N> u(box, phi, std::vector<double>(box.node_count(), 0.0), 0.0);
  Workspace<N> ws =
      make_workspace(u, truncation, barrier, config.s, config.quad);
  require(!ws.free_nodes.empty(), "solve: truncation ball contains no nodes");

  MatrixFamily<N> fam = identity_family<N>();
  int last_stage = 0;
  for (int k = 1; k <= config.stages; ++k) {
    append_stage_members(fam, k, config.family_rotations,
                         config.family_eigen_per_stage);
    extend_columns(ws, fam, u);
    const std::vector<double> before = u.offsets();
    const StageOutcome out = run_stage(ws, fam, rhs, config, k, u);
    StageRecord rec;
    rec.stage = k;
    fill_stage_record(ws, fam, out, before, u, &rec);
    report.stages.push_back(rec);
    last_stage = k;
    // Successive stages agree to the fixed-point tolerance: the
    // continuation has saturated at this grid resolution.
    if (rec.stage_diff <= config.tol_fp) break;
  }
  report.final_residual = report.stages.back().residual;

  // Audit pass over the region |x| <= audit_radius: denser family built by
  // the independent sampler, evaluated through the direct operator path.
  const MatrixFamily<N> audit = sample_detone_family<N>(
      fam.floor_theta, config.verification_factor * config.family_rotations,
      config.verification_factor * last_stage * config.family_eigen_per_stage);
  std::vector<std::int64_t> core;  // ordinals into the free-node arrays
  for (std::int64_t f = 0; f < ws.count(); ++f) {
    if (ws.coord[f].norm() <= audit_radius * (1.0 + 1e-12)) core.push_back(f);
  }
  require(!core.empty(), "solve: audit region contains no nodes");
  const std::int64_t A = std::int64_t(core.size());
  report.audit_nodes.resize(A);
  report.node_residuals.resize(A);
  report.node_argmin_lambda.resize(A);
  std::vector<double> scaled(A);
  parallel_for(A, [&](std::int64_t i) {
    const std::int64_t f = core[i];
    const OperatorResult<N> r =
        eval_Ds(u, ws.coord[f], audit, config.s, config.quad);
    report.audit_nodes[i] = ws.free_nodes[f];
    report.node_residuals[i] =
        r.value - rhs(ws.coord[f], ws.phi_at[f] + u.offsets()[ws.free_nodes[f]]);
    report.node_argmin_lambda[i] = r.argmin_lambda_min;
    scaled[i] = (1.0 - config.s) * r.value;
  });
  report.verified_residual = 0.0;
  report.eta0 = std::numeric_limits<double>::infinity();
  report.min_interior_excess = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < A; ++i) {
    report.verified_residual =
        std::max(report.verified_residual, std::abs(report.node_residuals[i]));
    report.eta0 = std::min(report.eta0, scaled[i]);
    report.min_interior_excess =
        std::min(report.min_interior_excess, u.offsets()[report.audit_nodes[i]]);
  }
  report.lipschitz = measure_grid_lipschitz(u, 2, audit_radius);
  report.semiconcavity = measure_grid_semiconcavity(u, 2, audit_radius);
  if (report.eta0 > 0.0 && report.lipschitz > 0.0 &&
      report.semiconcavity > 0.0) {
    report.theta_max = degeneracy_threshold(
        report.lipschitz, report.semiconcavity, config.s, N, report.eta0);
  }
  return {std::move(u), std::move(report)};
}

template MatrixFamily<2> stage_family<2>(int, int, int);
template MatrixFamily<3> stage_family<3>(int, int, int);
template GridFunction<2> solve_truncated<2>(
    std::shared_ptr<const ScalarField<2>>, const RightHandSide<2>&,
    const MatrixFamily<2>&, double, const Barrier<2>&, const SolverConfig&,
    const GridFunction<2>*, StageRecord*);
template GridFunction<3> solve_truncated<3>(
    std::shared_ptr<const ScalarField<3>>, const RightHandSide<3>&,
    const MatrixFamily<3>&, double, const Barrier<3>&, const SolverConfig&,
    const GridFunction<3>*, StageRecord*);
template std::pair<GridFunction<2>, SolveReport> solve<2>(const SolverConfig&);
template std::pair<GridFunction<3>, SolveReport> solve<3>(const SolverConfig&);

}  // namespace fracma
