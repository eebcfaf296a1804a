#include "fracma/checks.hpp"

#include "fracma/ma_operator.hpp"
#include "fracma/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fracma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// All nonzero integer displacements with max-norm <= window, one per +/-
// pair (second quotients are symmetric and first quotients scan every node
// anyway, so orientation does not matter).
template <int N>
std::vector<std::array<int, N>> displacements(int window) {
  require(window >= 1, "regularity window must be >= 1");
  std::vector<std::array<int, N>> out;
  std::array<int, N> d{};
  d.fill(-window);
  for (;;) {
    bool zero = true;
    bool positive_lead = false;
    for (int c = 0; c < N; ++c) {
      if (d[c] != 0) {
        positive_lead = d[c] > 0;
        zero = false;
        break;
      }
    }
    if (!zero && positive_lead) out.push_back(d);
    int c = N - 1;
    for (; c >= 0; --c) {
      if (++d[c] <= window) break;
      d[c] = -window;
    }
    if (c < 0) break;
  }
  return out;
}

template <int N>
std::vector<double> node_values(const GridFunction<N>& u) {
  const std::int64_t count = u.box().node_count();
  std::vector<double> val(count);
  parallel_for(count, [&](std::int64_t i) { val[i] = u.node_value(i); });
  return val;
}

template <int N>
std::vector<double> node_values(const ScalarField<N>& f, const GridBox<N>& box) {
  box.validate();
  std::vector<double> val(box.node_count());
  parallel_for(box.node_count(),
               [&](std::int64_t i) { val[i] = f.value(box.coord(i)); });
  return val;
}

// Nodes eligible for quotient measurements; every node a quotient touches
// must be flagged, so collar kinks near the truncation sphere never leak
// into interior constants.
template <int N>
std::vector<char> inside_mask(const GridBox<N>& box, double within_radius) {
  std::vector<char> in(box.node_count(), 1);
  if (!std::isfinite(within_radius)) return in;
  require(within_radius > 0.0, "measurement radius must be positive");
  const double cap = within_radius * (1.0 + 1e-12);
  for (std::int64_t flat = 0; flat < box.node_count(); ++flat) {
    in[flat] = box.coord(flat).norm() <= cap;
  }
  return in;
}

template <int N>
double sup_first_quotient(const GridBox<N>& box, const std::vector<double>& val,
                          int window, double within_radius) {
  const auto disp = displacements<N>(window);
  const auto in = inside_mask(box, within_radius);
  const double h = box.spacing();
  const int m = box.nodes_per_side;
  double sup = 0.0;
  for (std::int64_t flat = 0; flat < box.node_count(); ++flat) {
    if (!in[flat]) continue;
    const auto idx = box.unflatten(flat);
    for (const auto& d : disp) {
      std::array<int, N> j{};
      bool ok = true;
      double len2 = 0.0;
      for (int c = 0; c < N; ++c) {
        j[c] = idx[c] + d[c];
        ok = ok && j[c] >= 0 && j[c] < m;
        len2 += double(d[c]) * d[c];
      }
      if (!ok || !in[box.flatten(j)]) continue;
      const double q =
          std::abs(val[box.flatten(j)] - val[flat]) / (h * std::sqrt(len2));
      sup = std::max(sup, q);
    }
  }
  return sup;
}

template <int N>
double sup_second_quotient(const GridBox<N>& box, const std::vector<double>& val,
                           int window, double within_radius) {
  const auto disp = displacements<N>(window);
  const auto in = inside_mask(box, within_radius);
  const double h = box.spacing();
  const int m = box.nodes_per_side;
  double sup = -std::numeric_limits<double>::infinity();
  for (std::int64_t flat = 0; flat < box.node_count(); ++flat) {
    if (!in[flat]) continue;
    const auto idx = box.unflatten(flat);
    for (const auto& d : disp) {
      std::array<int, N> jp{};
      std::array<int, N> jm{};
      bool ok = true;
      double len2 = 0.0;
      for (int c = 0; c < N; ++c) {
        jp[c] = idx[c] + d[c];
        jm[c] = idx[c] - d[c];
        ok = ok && jp[c] >= 0 && jp[c] < m && jm[c] >= 0 && jm[c] < m;
        len2 += double(d[c]) * d[c];
      }
      if (!ok || !in[box.flatten(jp)] || !in[box.flatten(jm)]) continue;
      const double delta =
          val[box.flatten(jp)] + val[box.flatten(jm)] - 2.0 * val[flat];
      sup = std::max(sup, delta / (h * h * len2));
    }
  }
  return std::isfinite(sup) ? sup : 0.0;
}

}  // namespace

template <int N>
double measure_grid_lipschitz(const GridFunction<N>& u, int window,
                              double within_radius) {
  return sup_first_quotient(u.box(), node_values(u), window, within_radius);
}

template <int N>
double measure_grid_semiconcavity(const GridFunction<N>& u, int window,
                                  double within_radius) {
  return sup_second_quotient(u.box(), node_values(u), window, within_radius);
}

template <int N>
double measure_field_lipschitz(const ScalarField<N>& f, const GridBox<N>& box,
                               int window, double within_radius) {
  return sup_first_quotient(box, node_values(f, box), window, within_radius);
}

template <int N>
double measure_field_semiconcavity(const ScalarField<N>& f,
                                   const GridBox<N>& box, int window,
                                   double within_radius) {
  return sup_second_quotient(box, node_values(f, box), window, within_radius);
}

template <int N>
ComparisonReport check_comparison(const GridFunction<N>& u,
                                  const GridFunction<N>& v,
                                  const RightHandSide<N>& rhs,
                                  const MatrixFamily<N>& fam, double s,
                                  const QuadratureScheme& quad, double slack,
                                  int contract_samples) {
  require(slack >= 0.0, "comparison slack must be >= 0");
  require(contract_samples >= 1, "need at least one contract sample");
  require(u.box().nodes_per_side == v.box().nodes_per_side &&
              u.box().radius == v.box().radius,
          "comparison requires matching grids");
  ComparisonReport rep;
  rep.slack = slack;

  const std::vector<double> uv = node_values(u);
  const std::vector<double> vv = node_values(v);
  rep.worst_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < uv.size(); ++i) {
    const double gap = uv[i] - vv[i];
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (gap > slack) ++rep.violations;
  }
  rep.ordered = rep.violations == 0;

  // Premise audit on a deterministic interior sample.
  const GridBox<N>& box = u.box();
  std::vector<std::int64_t> interior;
  for (std::int64_t flat = 0; flat < box.node_count(); ++flat) {
    const auto idx = box.unflatten(flat);
    bool inner = true;
    for (int c = 0; c < N; ++c) {
      inner = inner && idx[c] > 0 && idx[c] < box.nodes_per_side - 1;
    }
    if (inner) interior.push_back(flat);
  }
  if (interior.empty()) return rep;
  const std::size_t samples =
      std::min<std::size_t>(std::size_t(contract_samples), interior.size());
  std::vector<double> sub(samples);
  std::vector<double> super(samples);
  parallel_for(std::int64_t(samples), [&](std::int64_t k) {
    const std::int64_t flat = interior[k * interior.size() / samples];
    const Vec<N> x = box.coord(flat);
    sub[k] = rhs(x, uv[flat]) - eval_Ds(u, x, fam, s, quad).value;
    super[k] = eval_Ds(v, x, fam, s, quad).value - rhs(x, vv[flat]);
  });
  rep.sub_defect = *std::max_element(sub.begin(), sub.end());
  rep.super_defect = *std::max_element(super.begin(), super.end());
  rep.in_contract = rep.sub_defect <= slack && rep.super_defect <= slack;
  return rep;
}

template <int N>
RegularityReport check_regularity(const GridFunction<N>& u,
                                  const RightHandSide<N>& rhs,
                                  const ScalarField<N>& phi, int window,
                                  double slack_nodes, double within_radius) {
  require(rhs.monotonicity > 0.0, "rhs monotonicity must be positive");
  RegularityReport rep;
  rep.measured_lipschitz = measure_grid_lipschitz(u, window, within_radius);
  rep.measured_semiconcavity =
      measure_grid_semiconcavity(u, window, within_radius);
  rep.phi_lipschitz =
      measure_field_lipschitz(phi, u.box(), window, within_radius);
  rep.phi_semiconcavity =
      measure_field_semiconcavity(phi, u.box(), window, within_radius);
  if (rhs.kind == RightHandSide<N>::Kind::model) {
    // g = t - phi(x): the solution inherits both constants from phi.
    rep.lipschitz_bound = rep.phi_lipschitz;
    rep.semiconcavity_bound = rep.phi_semiconcavity;
  } else {
    const double lg_mu = rhs.lipschitz / rhs.monotonicity;
    rep.lipschitz_bound = std::max(lg_mu, rep.phi_lipschitz);
    rep.semiconcavity_bound =
        rhs.semiconvexity / rhs.monotonicity *
        (1.0 + std::max(lg_mu * lg_mu,
                        rep.phi_lipschitz * rep.phi_lipschitz));
  }
  rep.slack = slack_nodes * u.box().spacing();
  rep.lipschitz_ok = rep.measured_lipschitz <= rep.lipschitz_bound + rep.slack;
  rep.semiconcavity_ok =
      rep.measured_semiconcavity <= rep.semiconcavity_bound + rep.slack;
  return rep;
}

template <int N>
PositivityReport check_positivity(const GridFunction<N>& u,
                                  double interior_radius, double s,
                                  const QuadratureScheme& quad,
                                  int directions) {
  require(interior_radius > 0.0, "interior radius must be positive");
  require(directions >= 4, "need at least 4 witness directions");
  PositivityReport rep;
  const GridBox<N>& box = u.box();
  rep.min_excess = std::numeric_limits<double>::infinity();
  for (std::int64_t flat = 0; flat < box.node_count(); ++flat) {
    if (box.coord(flat).norm() >= interior_radius * (1.0 - 1e-12)) continue;
    ++rep.interior_nodes;
    const double excess = u.offsets()[flat];
    if (excess < rep.min_excess) {
      rep.min_excess = excess;
      rep.argmin_node = flat;
    }
  }
  if (rep.argmin_node < 0) {
    rep.min_excess = 0.0;
    return rep;
  }
  rep.positive = rep.min_excess > 0.0;

  std::vector<Vec<N>> dirs;
  if constexpr (N == 2) {
    for (int k = 0; k < directions; ++k) {
      const double a = k * std::numbers::pi / directions;
      dirs.push_back(Vec<2>(std::cos(a), std::sin(a)));
    }
  } else {
    for (int d = 0; d < 3; ++d) dirs.push_back(Vec<3>::Unit(d));
    const double q = 1.0 / std::numbers::sqrt2;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        for (double sb : {+1.0, -1.0}) {
          Vec<3> v = Vec<3>::Zero();
          v[a] = q;
          v[b] = sb * q;
          dirs.push_back(v);
        }
      }
    }
    const double c = 1.0 / std::sqrt(3.0);
    for (double sy : {+1.0, -1.0}) {
      for (double sz : {+1.0, -1.0}) {
        dirs.push_back(Vec<3>(c, sy * c, sz * c));
      }
    }
  }
  const Vec<N> x = box.coord(rep.argmin_node);
  std::vector<double> line(dirs.size());
  parallel_for(std::int64_t(dirs.size()), [&](std::int64_t k) {
    line[k] = eval_frac_lap_1d(u, x, dirs[k], s, quad);
  });
  rep.min_line_value = *std::min_element(line.begin(), line.end());
  rep.witness_free = rep.min_line_value > 0.0;
  return rep;
}

template double measure_grid_lipschitz<2>(const GridFunction<2>&, int, double);
template double measure_grid_lipschitz<3>(const GridFunction<3>&, int, double);
template double measure_grid_semiconcavity<2>(const GridFunction<2>&, int,
                                              double);
template double measure_grid_semiconcavity<3>(const GridFunction<3>&, int,
                                              double);
template double measure_field_lipschitz<2>(const ScalarField<2>&,
                                           const GridBox<2>&, int, double);
template double measure_field_lipschitz<3>(const ScalarField<3>&,
                                           const GridBox<3>&, int, double);
template double measure_field_semiconcavity<2>(const ScalarField<2>&,
                                               const GridBox<2>&, int, double);
template double measure_field_semiconcavity<3>(const ScalarField<3>&,
                                               const GridBox<3>&, int, double);
template ComparisonReport check_comparison<2>(const GridFunction<2>&,
                                              const GridFunction<2>&,
                                              const RightHandSide<2>&,
                                              const MatrixFamily<2>&, double,
                                              const QuadratureScheme&, double,
                                              int);
template ComparisonReport check_comparison<3>(const GridFunction<3>&,
                                              const GridFunction<3>&,
                                              const RightHandSide<3>&,
                                              const MatrixFamily<3>&, double,
                                              const QuadratureScheme&, double,
                                              int);
template RegularityReport check_regularity<2>(const GridFunction<2>&,
                                              const RightHandSide<2>&,
                                              const ScalarField<2>&, int,
                                              double, double);
template RegularityReport check_regularity<3>(const GridFunction<3>&,
                                              const RightHandSide<3>&,
                                              const ScalarField<3>&, int,
                                              double, double);
template PositivityReport check_positivity<2>(const GridFunction<2>&, double,
                                              double, const QuadratureScheme&,
                                              int);
template PositivityReport check_positivity<3>(const GridFunction<3>&, double,
                                              double, const QuadratureScheme&,
                                              int);

}  // namespace fracma
