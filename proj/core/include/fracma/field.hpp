#pragma once

#include "fracma/far_field.hpp"
#include "fracma/geometry.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace fracma {

// A scalar function on R^N that the nonlocal quadrature can integrate:
// pointwise values everywhere plus an analytic model of the behaviour at
// infinity (used to close truncated integrals and to bound the remainder).
template <int N>
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(const Vec<N>& x) const = 0;
  virtual const FarFieldModel<N>& far_model() const = 0;
  // Box of valid evaluation centers for grid-backed fields (quadrature
  // rejects centers outside it); null for fields defined everywhere.
  virtual const GridBox<N>* domain_box() const { return nullptr; }
};

// u(x+y) + u(x-y) - 2 u(x).
template <int N>
double second_increment(const ScalarField<N>& f, const Vec<N>& x,
                        const Vec<N>& y);

// Field whose values coincide with its far-field model everywhere.  Covers
// affine functions, cones Gamma(x) = sqrt(x^T Q x), and the boundary-datum
// class Gamma + smooth bump.
template <int N>
class AnalyticField final : public ScalarField<N> {
 public:
  explicit AnalyticField(FarFieldModel<N> model) : model_(std::move(model)) {}

  double value(const Vec<N>& x) const override { return model_.eval(x); }
  const FarFieldModel<N>& far_model() const override { return model_; }

 private:
  FarFieldModel<N> model_;
};

// Smooth global solution profile sqrt(1 + x^T M x), M symmetric positive
// definite.  Its Hessian at the origin is M; at infinity it approaches the
// cone of M with an O(1/r) radial defect.
template <int N>
class SolitonField final : public ScalarField<N> {
 public:
  explicit SolitonField(const Mat<N>& hessian_at_origin);

  double value(const Vec<N>& x) const override;
  const FarFieldModel<N>& far_model() const override { return model_; }
  const Mat<N>& hessian_at_origin() const { return M_; }

 private:
  Mat<N> M_;
  FarFieldModel<N> model_;
};

// View of another field precomposed with an affine map:
// value(x) = f(shift + B x).  Exact at the value level; the far-field model
// maps the cone (recentered at -B^{-1} shift) and affine parts exactly and
// bounds the radial defect by sigma_min(B)-scaled terms.
template <int N>
class TransformedField final : public ScalarField<N> {
 public:
  TransformedField(std::shared_ptr<const ScalarField<N>> inner, const Mat<N>& B,
                   const Vec<N>& shift = Vec<N>::Zero());

  double value(const Vec<N>& x) const override;
  const FarFieldModel<N>& far_model() const override { return model_; }

 private:
  std::shared_ptr<const ScalarField<N>> inner_;
  Mat<N> B_;
  Vec<N> shift_;
  FarFieldModel<N> model_;
};

// sum_i c_i f_i.  At most one summand may carry a nonzero cone (cones do not
// superpose inside the square root), and its coefficient must be positive.
template <int N>
class LinearCombinationField final : public ScalarField<N> {
 public:
  using Term = std::pair<double, std::shared_ptr<const ScalarField<N>>>;
  explicit LinearCombinationField(std::vector<Term> terms);

  double value(const Vec<N>& x) const override;
  const FarFieldModel<N>& far_model() const override { return model_; }

 private:
  std::vector<Term> terms_;
  FarFieldModel<N> model_;
};

template <int N>
std::shared_ptr<const ScalarField<N>> make_affine_field(double value,
                                                        const Vec<N>& gradient);
template <int N>
std::shared_ptr<const ScalarField<N>> make_cone_field(const Mat<N>& Q);
// Boundary datum Gamma + bump: the hypothesis class of the global problem.
template <int N>
std::shared_ptr<const ScalarField<N>> make_boundary_datum(
    const Mat<N>& Q, double bump_amplitude, double bump_decay);

}  // namespace fracma
