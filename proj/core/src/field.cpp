#include "fracma/field.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace fracma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

template <int N>
FarFieldModel<N> soliton_model(const Mat<N>& M) {
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(M);
  const double lmin = es.eigenvalues().minCoeff();
  require(lmin > 0.0, "soliton matrix must be positive definite");
  // sqrt(1 + Gamma^2) - Gamma = 1 / (sqrt(1 + Gamma^2) + Gamma) <= 1/(2 Gamma)
  // with Gamma >= sqrt(lmin) r, so the radial defect is O(1/r).
  std::vector<RadialTerm> defect{
      {RadialTerm::Kind::power_law, 0.5 / std::sqrt(lmin), 1.0}};
  return FarFieldModel<N>(M, std::move(defect));
}

template <int N>
FarFieldModel<N> transformed_model(const FarFieldModel<N>& inner,
                                   const Mat<N>& B, const Vec<N>& shift) {
  Eigen::JacobiSVD<Mat<N>> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sigma_min = svd.singularValues().minCoeff();
  require(sigma_min > 1e-14 * svd.singularValues().maxCoeff() &&
              sigma_min > 0.0,
          "field transform must be invertible");
  std::vector<RadialTerm> terms = inner.terms();
  for (RadialTerm& t : terms) {
    // |eta(|shift + Bx|)| <= a (sigma_min |x| - |shift|)^{-eps}; absorb the
    // shift into a doubled amplitude, valid once sigma_min|x| >= 2|shift|.
    t.amplitude *= std::pow(sigma_min, -t.exponent) *
                   std::pow(2.0, t.exponent > 0.0 ? t.exponent : 0.0);
  }
  const Mat<N> Qp = B.transpose() * inner.cone_matrix() * B;
  const Vec<N> gp = B.transpose() * inner.affine_grad();
  // Gamma(shift + Bx - c0) = Gamma'(x - x_c) with B x_c = c0 - shift.
  const Vec<N> xc = svd.solve(inner.cone_center() - shift);
  return FarFieldModel<N>(Qp, std::move(terms),
                          inner.affine_const() + inner.affine_grad().dot(shift),
                          gp, xc);
}

template <int N>
FarFieldModel<N> combined_model(
    const std::vector<typename LinearCombinationField<N>::Term>& terms) {
  Mat<N> Q = Mat<N>::Zero();
  Vec<N> grad = Vec<N>::Zero();
  double cnst = 0.0;
  std::vector<RadialTerm> radial;
  bool have_cone = false;
  for (const auto& [coef, field] : terms) {
    require(field != nullptr, "linear combination term must be non-null");
    const FarFieldModel<N>& m = field->far_model();
    if (m.cone_lambda_max() > 0.0) {
      require(!have_cone,
              "linear combination supports at most one cone summand");
      require(coef > 0.0,
              "cone summand must enter with a positive coefficient");
      have_cone = true;
      Q = coef * coef * m.cone_matrix();  // c sqrt(x^T Q x) = sqrt(x^T c^2 Q x)
    }
    cnst += coef * m.affine_const();
    grad += coef * m.affine_grad();
    for (RadialTerm t : m.terms()) {
      t.amplitude *= coef;
      radial.push_back(t);
    }
  }
  return FarFieldModel<N>(Q, std::move(radial), cnst, grad);
}

}  // namespace

template <int N>
double second_increment(const ScalarField<N>& f, const Vec<N>& x,
                        const Vec<N>& y) {
  return f.value(x + y) + f.value(x - y) - 2.0 * f.value(x);
}

template <int N>
SolitonField<N>::SolitonField(const Mat<N>& hessian_at_origin)
    : M_(0.5 * (hessian_at_origin + hessian_at_origin.transpose())),
      model_(soliton_model<N>(M_)) {}

template <int N>
double SolitonField<N>::value(const Vec<N>& x) const {
  return std::sqrt(1.0 + x.dot(M_ * x));
}

template <int N>
TransformedField<N>::TransformedField(
    std::shared_ptr<const ScalarField<N>> inner, const Mat<N>& B,
    const Vec<N>& shift)
    : inner_(std::move(inner)),
      B_(B),
      shift_(shift),
      model_(transformed_model<N>(inner_->far_model(), B, shift)) {}

template <int N>
double TransformedField<N>::value(const Vec<N>& x) const {
  return inner_->value(shift_ + B_ * x);
}

template <int N>
LinearCombinationField<N>::LinearCombinationField(std::vector<Term> terms)
    : terms_(std::move(terms)), model_(combined_model<N>(terms_)) {}

template <int N>
double LinearCombinationField<N>::value(const Vec<N>& x) const {
  double v = 0.0;
  for (const auto& [coef, field] : terms_) v += coef * field->value(x);
  return v;
}

template <int N>
std::shared_ptr<const ScalarField<N>> make_affine_field(
    double value, const Vec<N>& gradient) {
  return std::make_shared<AnalyticField<N>>(
      FarFieldModel<N>::affine(value, gradient));
}

template <int N>
std::shared_ptr<const ScalarField<N>> make_cone_field(const Mat<N>& Q) {
  return std::make_shared<AnalyticField<N>>(FarFieldModel<N>(Q, 0.0, 1.0));
}

template <int N>
std::shared_ptr<const ScalarField<N>> make_boundary_datum(const Mat<N>& Q,
                                                          double bump_amplitude,
                                                          double bump_decay) {
  FarFieldModel<N> model(Q, bump_amplitude, bump_decay);
  require(model.cone_lambda_min() > 0.0,
          "boundary datum cone must be positive definite");
  require(bump_decay > 0.0 && bump_decay < double(N),
          "boundary datum bump decay must lie in (0, n)");
  return std::make_shared<AnalyticField<N>>(std::move(model));
}

template double second_increment<2>(const ScalarField<2>&, const Vec<2>&,
                                    const Vec<2>&);
template double second_increment<3>(const ScalarField<3>&, const Vec<3>&,
                                    const Vec<3>&);
template class SolitonField<2>;
template class SolitonField<3>;
template class TransformedField<2>;
template class TransformedField<3>;
template class LinearCombinationField<2>;
template class LinearCombinationField<3>;

template std::shared_ptr<const ScalarField<2>> make_affine_field<2>(
    double, const Vec<2>&);
template std::shared_ptr<const ScalarField<3>> make_affine_field<3>(
    double, const Vec<3>&);
template std::shared_ptr<const ScalarField<2>> make_cone_field<2>(const Mat<2>&);
template std::shared_ptr<const ScalarField<3>> make_cone_field<3>(const Mat<3>&);
template std::shared_ptr<const ScalarField<2>> make_boundary_datum<2>(
    const Mat<2>&, double, double);
template std::shared_ptr<const ScalarField<3>> make_boundary_datum<3>(
    const Mat<3>&, double, double);

}  // namespace fracma
