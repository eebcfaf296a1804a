#include "doctest.h"
#include "fracma/far_field.hpp"

#include <cmath>
#include <stdexcept>

using namespace fracma;

namespace {

double central_d1(const RadialTerm& t, double r, double h) {
  return (t.value(r + h) - t.value(r - h)) / (2.0 * h);
}

double central_d2(const RadialTerm& t, double r, double h) {
  return (t.value(r + h) - 2.0 * t.value(r) + t.value(r - h)) / (h * h);
}

}  // namespace

TEST_CASE("radial term derivatives match central differences") {
  const RadialTerm bump{RadialTerm::Kind::smooth_bump, 0.7, 1.3};
  const RadialTerm power{RadialTerm::Kind::power_law, 2.0, 0.6};
  for (double r : {0.3, 1.0, 2.7, 9.0}) {
    CAPTURE(r);
    const double h = 1e-5 * std::max(1.0, r);
    CHECK(bump.derivative(r) ==
          doctest::Approx(central_d1(bump, r, h)).epsilon(1e-7));
    CHECK(bump.second_derivative(r) ==
          doctest::Approx(central_d2(bump, r, h)).epsilon(1e-4));
    CHECK(power.derivative(r) ==
          doctest::Approx(central_d1(power, r, h)).epsilon(1e-7));
    CHECK(power.second_derivative(r) ==
          doctest::Approx(central_d2(power, r, h)).epsilon(1e-4));
  }
}

TEST_CASE("smooth bump vanishes to second order at the origin") {
  const RadialTerm bump{RadialTerm::Kind::smooth_bump, 1.0, 2.0};
  CHECK(bump.value(0.0) == 0.0);
  CHECK(bump.value(1e-8) == doctest::Approx(1e-16).epsilon(1e-6));
}

TEST_CASE("measured amplitude bounds cover the radial terms") {
  const double a = 0.8;
  const double eps = 0.9;
  const Mat<2> Q = Mat<2>::Identity();
  const FarFieldModel<2> model(
      Q, {RadialTerm{RadialTerm::Kind::power_law, a, eps}});
  // For a pure power law the measured sup of r^eps |eta(r)| over r >= 1 is
  // the amplitude itself.
  CHECK(model.decay_rate() == doctest::Approx(eps));
  CHECK(model.amplitude_bound() == doctest::Approx(a).epsilon(1e-9));
  // |eta'| = a eps r^{-1-eps}.
  CHECK(model.gradient_bound() == doctest::Approx(a * eps).epsilon(1e-9));

  const FarFieldModel<2> bumpy(Q, a, eps);
  for (double r : {1.0, 3.0, 30.0, 3000.0}) {
    CAPTURE(r);
    CHECK(std::abs(bumpy.perturbation(r)) <=
          bumpy.amplitude_bound() * std::pow(r, -eps) * (1.0 + 1e-12));
  }
}

TEST_CASE("far model eval decomposes into affine, cone, perturbation") {
  Mat<2> Q;
  Q << 2.0, 0.3, 0.3, 1.0;
  Vec<2> g(0.4, -0.1);
  const FarFieldModel<2> model(Q, {RadialTerm{RadialTerm::Kind::smooth_bump,
                                              0.2, 1.0}},
                               1.5, g);
  const Vec<2> x(3.0, -2.0);
  const double want = 1.5 + g.dot(x) + std::sqrt(x.dot(Q * x)) +
                      model.perturbation(x.norm());
  CHECK(model.eval(x) == doctest::Approx(want).epsilon(1e-14));
  CHECK(model.cone_lambda_max() >= model.cone_lambda_min());
  CHECK(model.cone_lambda_min() > 0.0);
}

TEST_CASE("cone centers shift where the cone is evaluated") {
  Mat<2> Q;
  Q << 1.0, 0.0, 0.0, 4.0;
  const Vec<2> center(1.0, -2.0);
  const FarFieldModel<2> model(Q, {}, 0.0, Vec<2>::Zero(), center);
  const Vec<2> p(4.0, 1.0);
  const Vec<2> d = p - center;
  CHECK(model.cone_at(p) == doctest::Approx(std::sqrt(d.dot(Q * d))));
  // The homogeneous form stays centered: cone(v) probes directions.
  CHECK(model.cone(Vec<2>(0.0, 1.0)) == doctest::Approx(2.0));
}

TEST_CASE("affine models carry no cone or perturbation") {
  const auto model = FarFieldModel<3>::affine(2.0, Vec<3>(1.0, 0.0, -1.0));
  CHECK(model.cone_lambda_max() == 0.0);
  CHECK(model.amplitude_bound() == 0.0);
  CHECK(model.eval(Vec<3>(1.0, 1.0, 1.0)) == doctest::Approx(2.0));
  CHECK(model.lipschitz_bound() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("invalid cone matrices are rejected") {
  Mat<2> skew;
  skew << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(FarFieldModel<2>(skew, 0.0, 1.0), std::invalid_argument);
  Mat<2> indefinite;
  indefinite << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(FarFieldModel<2>(indefinite, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      FarFieldModel<2>(Mat<2>::Identity(),
                       {RadialTerm{RadialTerm::Kind::power_law, 1.0, -0.2}}),
      std::invalid_argument);
}
