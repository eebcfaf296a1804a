#include "fracma/far_field.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fracma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double RadialTerm::value(double r) const {
  if (kind == Kind::smooth_bump) {
    const double r2 = r * r;
    return amplitude * r2 * std::pow(1.0 + r2, -0.5 * (exponent + 2.0));
  }
  return amplitude * std::pow(r, -exponent);
}

double RadialTerm::derivative(double r) const {
  if (kind == Kind::smooth_bump) {
    const double r2 = r * r;
    const double q = 0.5 * (exponent + 2.0);
    // d/dr [a r^2 (1+r^2)^{-q}] = 2 a r (1+r^2)^{-q-1} (1 + (1-q) r^2)
    return 2.0 * amplitude * r * std::pow(1.0 + r2, -q - 1.0) *
           (1.0 + (1.0 - q) * r2);
  }
  return -amplitude * exponent * std::pow(r, -exponent - 1.0);
}

double RadialTerm::second_derivative(double r) const {
  if (kind == Kind::smooth_bump) {
    const double r2 = r * r;
    const double q = 0.5 * (exponent + 2.0);
    const double u = 1.0 + r2;
    return amplitude * (2.0 * std::pow(u, -q) -
                        10.0 * q * r2 * std::pow(u, -q - 1.0) +
                        4.0 * q * (q + 1.0) * r2 * r2 * std::pow(u, -q - 2.0));
  }
  return amplitude * exponent * (exponent + 1.0) * std::pow(r, -exponent - 2.0);
}

template <int N>
FarFieldModel<N>::FarFieldModel(const Mat<N>& cone_Q, double bump_amplitude,
                                double bump_decay)
    : Q_(cone_Q) {
  if (bump_amplitude != 0.0) {
    terms_.push_back({RadialTerm::Kind::smooth_bump, bump_amplitude, bump_decay});
  }
  finalize();
}

template <int N>
FarFieldModel<N>::FarFieldModel(const Mat<N>& cone_Q,
                                std::vector<RadialTerm> terms,
                                double affine_const, const Vec<N>& affine_grad,
                                const Vec<N>& cone_center)
    : Q_(cone_Q),
      terms_(std::move(terms)),
      affine_const_(affine_const),
      affine_grad_(affine_grad),
      cone_center_(cone_center) {
  if (!cone_center.allFinite()) {
    throw std::invalid_argument("far-field cone center must be finite");
  }
  finalize();
}

template <int N>
FarFieldModel<N> FarFieldModel<N>::affine(double value, const Vec<N>& gradient) {
  return FarFieldModel(Mat<N>::Zero(), {}, value, gradient);
}

template <int N>
void FarFieldModel<N>::finalize() {
  require((Q_ - Q_.transpose()).template lpNorm<Eigen::Infinity>() <=
              1e-12 * (1.0 + Q_.template lpNorm<Eigen::Infinity>()),
          "far-field cone matrix must be symmetric");
  Q_ = 0.5 * (Q_ + Q_.transpose());
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(Q_);
  cone_lambda_min_ = es.eigenvalues().minCoeff();
  cone_lambda_max_ = es.eigenvalues().maxCoeff();
  require(cone_lambda_min_ >= -1e-12 * std::max(1.0, cone_lambda_max_),
          "far-field cone matrix must be positive semidefinite");
  cone_lambda_min_ = std::max(cone_lambda_min_, 0.0);

  decay_rate_ = 0.0;
  for (const RadialTerm& t : terms_) {
    require(t.exponent > 0.0, "far-field term decay rate must be positive");
    decay_rate_ = decay_rate_ == 0.0 ? t.exponent
                                     : std::min(decay_rate_, t.exponent);
  }
  amp_[0] = amp_[1] = amp_[2] = 0.0;
  if (terms_.empty()) return;

  // Measure the bound constants on a log grid covering the regime where the
  // slowest term dominates; beyond the last sample every term decays at
  // least as fast as the profile it is compared against.
  const int per_decade = 64;
  const int decades = 8;
  for (int i = 0; i <= per_decade * decades; ++i) {
    const double r = std::pow(10.0, double(i) / per_decade);
    double v = 0.0, d1 = 0.0, d2 = 0.0;
    for (const RadialTerm& t : terms_) {
      v += t.value(r);
      d1 += t.derivative(r);
      d2 += t.second_derivative(r);
    }
    const double w = std::pow(r, decay_rate_);
    amp_[0] = std::max(amp_[0], std::abs(v) * w);
    amp_[1] = std::max(amp_[1], std::abs(d1) * w * r);
    amp_[2] = std::max(amp_[2],
                       std::max(std::abs(d2), std::abs(d1) / r) * w * r * r);
  }
}

template <int N>
double FarFieldModel<N>::eval(const Vec<N>& x) const {
  return affine_part(x) + cone_at(x) + perturbation(x.norm());
}

template <int N>
double FarFieldModel<N>::cone(const Vec<N>& v) const {
  const double q = v.dot(Q_ * v);
  return q <= 0.0 ? 0.0 : std::sqrt(q);
}

template <int N>
double FarFieldModel<N>::perturbation(double r) const {
  double v = 0.0;
  for (const RadialTerm& t : terms_) v += t.value(r);
  return v;
}

template <int N>
double FarFieldModel<N>::affine_part(const Vec<N>& x) const {
  return affine_const_ + affine_grad_.dot(x);
}

template <int N>
double FarFieldModel<N>::lipschitz_bound() const {
  bool singular = false;
  for (const RadialTerm& t : terms_) {
    singular = singular || t.kind == RadialTerm::Kind::power_law;
  }
  double sup_d1 = 0.0;
  const int per_decade = 64;
  const double r_lo = singular ? 1.0 : 1e-3;
  for (int i = 0; i <= per_decade * 8; ++i) {
    const double r = r_lo * std::pow(10.0, double(i) / per_decade);
    double d1 = 0.0;
    for (const RadialTerm& t : terms_) d1 += t.derivative(r);
    sup_d1 = std::max(sup_d1, std::abs(d1));
  }
  return std::sqrt(std::max(cone_lambda_max_, 0.0)) + affine_grad_.norm() +
         sup_d1;
}

template class FarFieldModel<2>;
template class FarFieldModel<3>;

}  // namespace fracma
