#pragma once

#include "fracma/field.hpp"
#include "fracma/geometry.hpp"
#include "fracma/grid_function.hpp"

#include <array>
#include <vector>

namespace fracma {

// Discretization of the singular integrals.  All radii live in the t
// parametrization L_A u(x) = (det A / 2) Sum_e w_e Int delta(u, x, t A e)
// t^{-1-2s} dt, with knots and zone boundaries independent of A and of the
// field (this is what makes eval_LA(u, x, A) and the precomposed isotropic
// evaluation agree to roundoff):
//   [0, inner_radius]              closed-form Taylor proxy (one probe pair),
//   [inner_radius, switch_radius]  log-radial Gauss panels on field values,
//   [switch_radius, closure_radius] same panels on the far model's
//                                  cone + affine part (the decaying
//                                  perturbation is only error-estimated),
//   [closure_radius, infinity)     exact power-law closure of cone + affine.
struct QuadratureScheme {
  double inner_radius = 0.05;
  double switch_radius = 24.0;
  double closure_radius = 400.0;
  int radial_per_decade = 4;  // 4-point Gauss-Legendre panels per decade of t
  int angular = 16;           // directions per half circle (n=2); polar count (n=3)

  void validate() const;
  // Oracle helper: divide inner_radius and multiply node counts by factor,
  // keeping the analytic-zone boundaries fixed so only resolution changes.
  QuadratureScheme refined(int factor) const;
};

// Optional per-call diagnostics.
struct LAReport {
  double diag_mass = 0.0;      // coefficient of -u(x) in the discrete form
  double tail_estimate = 0.0;  // bound on terms the analytic zones omit
  double inner_estimate = 0.0; // measured deviation of the inner Taylor proxy
};

// L_A u(x) = 1/2 Int delta(u, x, y) / |A^{-1} y|^{n+2s} dy for symmetric
// positive definite A (det A = 1 not required; the substitution y = A z
// contributes the det A factor).
template <int N>
double eval_LA(const ScalarField<N>& f, const Vec<N>& x, const Mat<N>& A,
               double s, const QuadratureScheme& quad,
               LAReport* report = nullptr);

// Line fractional Laplacian along a unit direction e:
//   Int_0^inf delta(u, x, t e) t^{-1-2s} dt
// (one half of the symmetric form, equal to the one-sided principal value).
template <int N>
double eval_frac_lap_1d(const ScalarField<N>& f, const Vec<N>& x,
                        const Vec<N>& e, double s,
                        const QuadratureScheme& quad,
                        LAReport* report = nullptr);

// Split evaluation for fixed-point sweeps on a grid iterate: everything
// that does not depend on the node offsets (base-field values, analytic
// zones, kernel mass) is frozen once per (x, A); re-evaluation is then
// linear in the interpolated offsets.
//
// self_mass is the coefficient with which the pair walk couples back to the
// offset of the grid node nearest to x (probes x +- y landing in cells
// adjacent to that node interpolate part of its own offset).  When x is a
// node, mass - self_mass is the exact diagonal -d eval_LA / d offset(x) of
// the discrete operator, the right Newton denominator for pointwise
// relaxation; the raw mass overestimates it badly once the inner radius is
// small against the spacing.
struct FrozenLA {
  double base_value = 0.0;  // eval_LA of the base field (zero offsets)
  double mass = 0.0;        // total kernel mass = coefficient of -u(x)
  double self_mass = 0.0;   // pair-walk coupling onto the center node
};

template <int N>
FrozenLA freeze_LA(const GridFunction<N>& g, const Vec<N>& x, const Mat<N>& A,
                   double s, const QuadratureScheme& quad);

template <int N>
double eval_LA_frozen(const GridFunction<N>& g, const Vec<N>& x,
                      const Mat<N>& A, double s, const QuadratureScheme& quad,
                      const FrozenLA& frozen);

// Integral over the unit sphere of (Sum_j eps_j^2 x_j^2)^{-(k+2s)/2},
// k = eps.size() in {2, 3}.  direct = angular product quadrature;
// identity = the Gamma-prefactored one-dimensional reduction.
enum class SphereKernelMethod { direct, identity };
double sphere_kernel_integral(const std::vector<double>& eps, double s,
                              SphereKernelMethod method);

// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
std::vector<std::array<double, 2>> gauss_legendre(int m);

}  // namespace fracma
