#pragma once

#include "fracma/geometry.hpp"

#include <vector>

namespace fracma {

// One radially symmetric decaying term of a far-field closure.
//   smooth_bump: a r^2 (1 + r^2)^{-(eps+2)/2}  -> a r^{-eps} at infinity,
//                exactly 0 with zero gradient at the origin;
//   power_law:   a r^{-eps}, singular at 0 — only valid in models that are
//                evaluated away from the origin (barrier tails).
struct RadialTerm {
  enum class Kind { smooth_bump, power_law };
  Kind kind = Kind::smooth_bump;
  double amplitude = 0.0;  // a; may be negative for correction terms
  double exponent = 1.0;   // eps > 0, the decay rate at infinity

  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;
};

// Analytic model of a function outside a bounded computational box:
//
//   F(x) = c + g.x + sqrt((x-x_c)^T Q (x-x_c)) + eta(|x|),
//
// with eta a sum of RadialTerms.  Q is symmetric positive semidefinite
// (zero for affine or pure-decay models); the cone center x_c is zero
// except for models obtained by precomposing another model with an affine
// map.  The two-argument constructor builds the hypothesis-class model
// Gamma + one smooth bump, which vanishes to second order at the origin.
template <int N>
class FarFieldModel {
 public:
  // Gamma + a r^2 (1+r^2)^{-(eps+2)/2}; pass bump_amplitude = 0 for pure cone.
  FarFieldModel(const Mat<N>& cone_Q, double bump_amplitude, double bump_decay);
  // General model; affine part defaults to zero.
  FarFieldModel(const Mat<N>& cone_Q, std::vector<RadialTerm> terms,
                double affine_const = 0.0,
                const Vec<N>& affine_grad = Vec<N>::Zero(),
                const Vec<N>& cone_center = Vec<N>::Zero());
  static FarFieldModel affine(double value, const Vec<N>& gradient);

  double eval(const Vec<N>& x) const;
  // sqrt(v^T Q v); positively 1-homogeneous — the asymptotic slope along v.
  double cone(const Vec<N>& v) const;
  // sqrt((p-x_c)^T Q (p-x_c)), the cone evaluated at an absolute position.
  double cone_at(const Vec<N>& p) const { return cone(p - cone_center_); }
  double perturbation(double r) const;
  double affine_part(const Vec<N>& x) const;

  const Mat<N>& cone_matrix() const { return Q_; }
  const std::vector<RadialTerm>& terms() const { return terms_; }
  double affine_const() const { return affine_const_; }
  const Vec<N>& affine_grad() const { return affine_grad_; }
  const Vec<N>& cone_center() const { return cone_center_; }

  // Smallest decay rate among the terms; 0 when there are none.
  double decay_rate() const { return decay_rate_; }
  // Measured constants valid for r >= 1:
  //   |eta| <= amplitude_bound r^{-eps},
  //   |eta'| <= gradient_bound r^{-1-eps},
  //   max(|eta''|, |eta'|/r) <= hessian_bound r^{-2-eps}.
  double amplitude_bound() const { return amp_[0]; }
  double gradient_bound() const { return amp_[1]; }
  double hessian_bound() const { return amp_[2]; }

  double cone_lambda_min() const { return cone_lambda_min_; }
  double cone_lambda_max() const { return cone_lambda_max_; }

  // sup |grad F| over the model's domain of use (r >= 1 for singular terms).
  double lipschitz_bound() const;

 private:
  void finalize();

  Mat<N> Q_;
  std::vector<RadialTerm> terms_;
  double affine_const_ = 0.0;
  Vec<N> affine_grad_ = Vec<N>::Zero();
  Vec<N> cone_center_ = Vec<N>::Zero();
  double decay_rate_ = 0.0;
  double amp_[3] = {0.0, 0.0, 0.0};
  double cone_lambda_min_ = 0.0;
  double cone_lambda_max_ = 0.0;
};

}  // namespace fracma
