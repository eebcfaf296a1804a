#pragma once

#include "fracma/detone.hpp"
#include "fracma/grid_function.hpp"
#include "fracma/quadrature.hpp"
#include "fracma/rhs.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace fracma {

// Discrete regularity seminorms over grid nodes: sup of first-order quotients
// |u(x) - u(y)| / |x - y| and of second quotients delta(u, x, e) / |e|^2,
// with e ranging over all integer displacement vectors of max-norm <= window
// whose probes stay on the grid.  When within_radius is finite a quotient
// counts only if every node it touches satisfies |x| <= within_radius
// (solver output carries a truncation collar whose kink is an artifact of
// the ball boundary, not a property of the solution).  The field variants
// sample f onto the box nodes first so that measured constants of u and of
// its boundary datum are comparable like for like.
inline constexpr double kWholeGrid = std::numeric_limits<double>::infinity();

template <int N>
double measure_grid_lipschitz(const GridFunction<N>& u, int window = 2,
                              double within_radius = kWholeGrid);
template <int N>
double measure_grid_semiconcavity(const GridFunction<N>& u, int window = 2,
                                  double within_radius = kWholeGrid);
template <int N>
double measure_field_lipschitz(const ScalarField<N>& f, const GridBox<N>& box,
                               int window = 2,
                               double within_radius = kWholeGrid);
template <int N>
double measure_field_semiconcavity(const ScalarField<N>& f,
                                   const GridBox<N>& box, int window = 2,
                                   double within_radius = kWholeGrid);

// Comparison-principle audit for D_s w = g(x, w): verifies u <= v + slack at
// every node and classifies the premises by sampling the equation at
// contract_samples interior nodes (u must be a discrete subsolution,
// D_s u >= g(x, u) - slack; v a discrete supersolution, D_s v <= g(x, v) +
// slack).  A pair that breaks a premise is reported out-of-contract rather
// than as a comparison failure.
struct ComparisonReport {
  bool ordered = false;           // u <= v + slack nodewise
  double worst_gap = 0.0;         // max over nodes of u - v
  std::int64_t violations = 0;    // nodes with u - v > slack
  bool in_contract = false;       // both premises hold on the samples
  double sub_defect = 0.0;        // max of g(x, u) - D_s u over samples
  double super_defect = 0.0;      // max of D_s v - g(x, v) over samples
  double slack = 0.0;
};

template <int N>
ComparisonReport check_comparison(const GridFunction<N>& u,
                                  const GridFunction<N>& v,
                                  const RightHandSide<N>& rhs,
                                  const MatrixFamily<N>& fam, double s,
                                  const QuadratureScheme& quad, double slack,
                                  int contract_samples = 24);

// Lipschitz and semiconcavity of a solution against the a-priori bounds:
// for the model right-hand side both constants are inherited from phi
// unchanged; in general Lip <= max{Lip(g)/mu, Lip(phi)} and
// SC <= (C_g/mu)(1 + max{(Lip(g)/mu)^2, Lip(phi)^2}).  The phi constants
// are measured on the same grid and window, and the comparison carries
// slack_nodes * h of discretization slack.
struct RegularityReport {
  double measured_lipschitz = 0.0;
  double lipschitz_bound = 0.0;
  double measured_semiconcavity = 0.0;
  double semiconcavity_bound = 0.0;
  double phi_lipschitz = 0.0;
  double phi_semiconcavity = 0.0;
  double slack = 0.0;
  bool lipschitz_ok = false;
  bool semiconcavity_ok = false;
};

template <int N>
RegularityReport check_regularity(const GridFunction<N>& u,
                                  const RightHandSide<N>& rhs,
                                  const ScalarField<N>& phi, int window = 2,
                                  double slack_nodes = 5.0,
                                  double within_radius = kWholeGrid);

// Strict separation u > phi inside the truncation ball, plus the
// contradiction witness of the positivity proof: at the node minimizing
// u - phi every sampled direction must keep a strictly positive line
// fractional Laplacian (a non-positive one is exactly how a contact point
// would certify itself).
struct PositivityReport {
  double min_excess = 0.0;          // min over interior nodes of u - phi
  std::int64_t argmin_node = -1;    // flat index of the minimizer
  bool positive = false;            // min_excess > 0
  double min_line_value = 0.0;      // min over directions at the minimizer
  bool witness_free = false;        // min_line_value > 0
  std::int64_t interior_nodes = 0;
};

template <int N>
PositivityReport check_positivity(const GridFunction<N>& u,
                                  double interior_radius, double s,
                                  const QuadratureScheme& quad,
                                  int directions = 16);

}  // namespace fracma
