#include "doctest.h"
#include "fracma/field.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

using namespace fracma;

TEST_CASE("second increment of a quadratic recovers the pure second moment") {
  // For f(x) = x^T M x the affine parts cancel exactly:
  // delta(f, x, y) = 2 y^T M y independent of x.
  Mat<2> M;
  M << 1.0, 0.25, 0.25, 0.5;
  const auto soliton = std::make_shared<SolitonField<2>>(M);
  // Soliton is not quadratic, so use an affine field for the exact case.
  const auto affine = make_affine_field<2>(1.0, Vec<2>(2.0, -1.0));
  const Vec<2> x(0.3, 0.4);
  const Vec<2> y(0.2, -0.5);
  CHECK(second_increment(*affine, x, y) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(second_increment(*soliton, x, y) > 0.0);  // strictly convex
}

TEST_CASE("soliton field values and far model") {
  Mat<2> M;
  M << 4.0, 0.0, 0.0, 1.0;
  const SolitonField<2> f(M);
  const Vec<2> x(0.5, -1.5);
  CHECK(f.value(x) == doctest::Approx(std::sqrt(1.0 + x.dot(M * x))));
  CHECK(f.value(Vec<2>::Zero()) == doctest::Approx(1.0));
  const auto& far = f.far_model();
  CHECK(far.cone_matrix().isApprox(M, 1e-14));
  // sqrt(1 + q) - sqrt(q) <= 1/(2 sqrt(q)) <= amplitude r^{-1} bound.
  const Vec<2> big(100.0, 35.0);
  CHECK(std::abs(f.value(big) - far.affine_part(big) - far.cone_at(big)) <=
        far.amplitude_bound() / big.norm() * (1.0 + 1e-12));
}

TEST_CASE("transformed field composes values with the affine map") {
  Mat<2> M;
  M << 2.0, 0.5, 0.5, 1.0;
  const auto inner = std::make_shared<SolitonField<2>>(M);
  Mat<2> B;
  B << 1.2, 0.3, 0.3, 0.9;
  const Vec<2> shift(0.4, -0.7);
  const TransformedField<2> g(inner, B, shift);
  for (const Vec<2>& z : {Vec<2>(0.0, 0.0), Vec<2>(1.1, -2.2), Vec<2>(-3.0, 0.5)}) {
    CHECK(g.value(z) == doctest::Approx(inner->value(shift + B * z)).epsilon(1e-15));
  }
}

TEST_CASE("transformed cone recenters so the far model tracks the inner cone") {
  Mat<2> Q;
  Q << 3.0, 1.0, 1.0, 2.0;
  const auto cone = make_cone_field<2>(Q);
  Mat<2> B;
  B << 0.8, -0.2, -0.2, 1.4;
  const Vec<2> shift(2.0, 1.0);
  const TransformedField<2> g(cone, B, shift);
  const auto& far = g.far_model();
  for (const Vec<2>& z : {Vec<2>(5.0, 1.0), Vec<2>(-4.0, 7.0)}) {
    const Vec<2> p = shift + B * z;
    CHECK(far.cone_at(z) + far.affine_part(z) ==
          doctest::Approx(std::sqrt(p.dot(Q * p))).epsilon(1e-12));
    CHECK(g.value(z) ==
          doctest::Approx(std::sqrt(p.dot(Q * p))).epsilon(1e-12));
  }
}

TEST_CASE("singular transforms are rejected") {
  Mat<2> singular;
  singular << 1.0, 2.0, 0.5, 1.0;
  const auto inner = make_cone_field<2>(Mat<2>::Identity());
  CHECK_THROWS_AS(TransformedField<2>(inner, singular), std::invalid_argument);
}

TEST_CASE("linear combinations sum values and enforce the cone rules") {
  const auto cone = make_cone_field<2>(Mat<2>::Identity());
  const auto affine = make_affine_field<2>(0.5, Vec<2>(1.0, 1.0));
  const LinearCombinationField<2> f({{2.0, cone}, {-1.0, affine}});
  const Vec<2> x(3.0, -4.0);
  CHECK(f.value(x) ==
        doctest::Approx(2.0 * x.norm() - (0.5 + x.sum())).epsilon(1e-14));
  // Combined cone scales inside the square root.
  CHECK(f.far_model().cone(Vec<2>(1.0, 0.0)) == doctest::Approx(2.0));

  // Two cones cannot superpose.
  CHECK_THROWS_AS(
      LinearCombinationField<2>({{1.0, cone}, {1.0, cone}}),
      std::invalid_argument);
  // A cone with a negative coefficient leaves the class.
  CHECK_THROWS_AS(LinearCombinationField<2>({{-1.0, cone}}),
                  std::invalid_argument);
}

TEST_CASE("boundary datum factory validates its inputs") {
  CHECK_THROWS_AS(make_boundary_datum<2>(Mat<2>::Zero(), 0.1, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_boundary_datum<2>(Mat<2>::Identity(), 0.1, 2.5),
                  std::invalid_argument);
  const auto phi = make_boundary_datum<2>(Mat<2>::Identity(), 0.1, 0.5);
  CHECK(phi->value(Vec<2>::Zero()) == doctest::Approx(0.0));
}

TEST_CASE("fields expose no domain box unless grid backed") {
  const auto cone = make_cone_field<3>(Mat<3>::Identity());
  CHECK(cone->domain_box() == nullptr);
}
