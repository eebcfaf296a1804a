#include "doctest.h"
#include "fracma/ma_operator.hpp"
#include "fracma/special.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

using namespace fracma;

namespace {

// Closed form of the soliton line integral at the origin (see
// test_quadrature.cpp): Int_0^inf 2 (sqrt(1 + t^2) - 1) t^{-1-2s} dt.
double soliton_line_exact(double s) {
  return oracles::spouge_gamma(1.0 - s) * oracles::spouge_gamma(s - 0.5) /
         (2.0 * s * oracles::spouge_gamma(0.5));
}

// Half the sphere integral of |A w|^{2s} for a 2x2 matrix, by oracle
// quadrature: for a radial profile, eval_LA(u, 0, A) factorizes as
// det(A) * (this) * (line integral of the unit-direction profile).
double half_sphere_power(const Mat<2>& A, double s) {
  const auto g = [&](const std::array<double, 3>& w) {
    const Vec<2> v = A * Vec<2>(w[0], w[1]);
    return std::pow(v.squaredNorm(), s);
  };
  return 0.5 * oracles::sphere_integral(2, g, 4096);
}

std::shared_ptr<SolitonField<2>> soliton(const Mat<2>& M) {
  return std::make_shared<SolitonField<2>>(M);
}

MatrixFamily<2> filtered_above(const MatrixFamily<2>& fam, double floor) {
  MatrixFamily<2> out;
  out.floor_theta = floor;
  for (std::size_t i = 0; i < fam.members.size(); ++i) {
    if (fam.members[i].lambda_min() >= floor * (1.0 - 1e-12)) {
      out.members.push_back(fam.members[i]);
      out.params.push_back(fam.params[i]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("eval_Ds annihilates affine fields over any family") {
  const auto f = make_affine_field<2>(1.5, Vec<2>(0.4, -0.9));
  const auto fam = sample_detone_family<2>(0.3, 6, 6);
  const QuadratureScheme quad;
  LAReport rep;
  const auto out = eval_Ds<2>(*f, Vec<2>(0.2, 0.7), fam, 0.75, quad, &rep);
  CHECK(out.value == doctest::Approx(0.0).epsilon(1e-12).scale(rep.diag_mass));
  CHECK(out.family_floor == 0.3);
  CHECK(out.argmin_lambda_min >= 0.3 * (1.0 - 1e-12));
}

TEST_CASE("singleton family reduces eval_Ds to the isotropic operator") {
  const auto f = soliton(Mat<2>::Identity());
  const QuadratureScheme quad;
  const Vec<2> x(0.3, -0.1);
  MatrixFamily<2> fam;
  fam.members.push_back(DetOneMatrix<2>::identity());
  fam.params.push_back({});
  const auto out = eval_Ds<2>(*f, x, fam, 0.8, quad);
  CHECK(out.value == eval_LA<2>(*f, x, Mat<2>::Identity(), 0.8, quad));
  CHECK(out.argmin_lambda_min == 1.0);
}

TEST_CASE("eval_Ds of the radial profile matches the factorized closed form") {
  const auto f = soliton(Mat<2>::Identity());
  const QuadratureScheme quad;
  const auto fam = sample_detone_family<2>(0.5, 8, 8);
  for (double s : {0.6, 0.8}) {
    CAPTURE(s);
    const auto out = eval_Ds<2>(*f, Vec<2>::Zero(), fam, s, quad);
    // Independent reference: min over the same members of the factorized
    // value det(A) * (1/2) Int |A w|^{2s} dsigma * line integral.
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : fam.members) {
      best = std::min(best, half_sphere_power(m.matrix(), s));
    }
    const double expected = best * soliton_line_exact(s);
    CHECK(out.value == doctest::Approx(expected).epsilon(3e-3));
    // Isotropy is optimal for a radial field, and the identity is a member.
    CHECK(out.argmin_lambda_min == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("eval_Ds in three dimensions matches the radial closed form") {
  const auto f = std::make_shared<SolitonField<3>>(Mat<3>::Identity());
  const QuadratureScheme quad;
  MatrixFamily<3> fam;
  fam.members.push_back(DetOneMatrix<3>::identity());
  fam.params.push_back({});
  for (double s : {0.6, 0.8}) {
    CAPTURE(s);
    // Radial profile at the origin: the angular factor is the full sphere
    // area, so the value is (omega_3 / 2) times the line integral.
    const auto out = eval_Ds<3>(*f, Vec<3>::Zero(), fam, s, quad);
    const double expected = 2.0 * std::numbers::pi * soliton_line_exact(s);
    CHECK(out.value == doctest::Approx(expected).epsilon(3e-3));
  }
}

TEST_CASE("enlarging or flooring the family moves eval_Ds the right way") {
  const auto f = soliton((Mat<2>() << 2.0, 0.3, 0.3, 0.8).finished());
  const QuadratureScheme quad;
  const Vec<2> x(0.25, -0.4);
  const double s = 0.75;
  const auto coarse = sample_detone_family<2>(0.25, 8, 8);
  const auto fine = sample_detone_family<2>(0.25, 16, 16);
  const double v_coarse = eval_Ds<2>(*f, x, coarse, s, quad).value;
  const double v_fine = eval_Ds<2>(*f, x, fine, s, quad).value;
  // The resolution-doubled grids nest member for member.
  CHECK(v_fine <= v_coarse);
  // The epsilon-ordering: raising the floor shrinks the family.
  const double v_floored =
      eval_Ds<2>(*f, x, filtered_above(fine, 0.6), s, quad).value;
  CHECK(v_floored >= v_fine);
}

TEST_CASE("convex fields give nonnegative eval_Ds") {
  const auto f = soliton((Mat<2>() << 1.6, -0.2, -0.2, 0.7).finished());
  const auto fam = sample_detone_family<2>(0.25, 8, 8);
  const QuadratureScheme quad;
  for (const Vec<2>& x :
       {Vec<2>(0.0, 0.0), Vec<2>(0.8, -0.3), Vec<2>(-1.2, 0.5)}) {
    const auto out = eval_Ds<2>(*f, x, fam, 0.7, quad);
    CHECK(out.value >= 0.0);
  }
}

TEST_CASE("pucci extremal operators bracket the floored infimum") {
  const auto f = soliton((Mat<2>() << 1.4, 0.5, 0.5, 1.1).finished());
  const QuadratureScheme quad;
  const Vec<2> x(0.4, 0.1);
  const double s = 0.75, theta = 0.5;
  const int res = 6;
  const double minus =
      pucci_extremal<2>(*f, x, theta, PucciSign::minus, s, quad, res);
  const double plus =
      pucci_extremal<2>(*f, x, theta, PucciSign::plus, s, quad, res);
  const auto fam = sample_detone_family<2>(theta, res);
  const double mid = eval_Ds<2>(*f, x, fam, s, quad).value;
  CHECK(minus <= mid);
  CHECK(mid <= plus);
  CHECK(minus < plus);
}

TEST_CASE("pucci extremal closed forms on the radial profile") {
  const auto f = soliton(Mat<2>::Identity());
  const QuadratureScheme quad;
  const double s = 0.75, theta = 0.5;
  // On a radial profile both the determinant factor and the angular factor
  // are monotone in the eigenvalues, so the box endpoints theta^{-1} I and
  // theta I are extremal: value(lambda I) = pi lambda^{2+2s} line.
  const double line = soliton_line_exact(s);
  const double plus =
      pucci_extremal<2>(*f, Vec<2>::Zero(), theta, PucciSign::plus, s, quad, 6);
  const double minus = pucci_extremal<2>(*f, Vec<2>::Zero(), theta,
                                         PucciSign::minus, s, quad, 6);
  const double pi = std::numbers::pi;
  CHECK(plus ==
        doctest::Approx(pi * std::pow(theta, -2.0 - 2.0 * s) * line)
            .epsilon(5e-3));
  CHECK(minus ==
        doctest::Approx(pi * std::pow(theta, 2.0 + 2.0 * s) * line)
            .epsilon(5e-3));
}

TEST_CASE("pucci extremal trivial cases") {
  const QuadratureScheme quad;
  const auto affine = make_affine_field<2>(-0.7, Vec<2>(1.2, 0.4));
  const Vec<2> x(0.1, -0.6);
  for (PucciSign sign : {PucciSign::minus, PucciSign::plus}) {
    CHECK(std::abs(pucci_extremal<2>(*affine, x, 0.4, sign, 0.8, quad, 4)) <=
          1e-10);
    // theta = 1 collapses the eigenvalue interval to the identity.
    const double collapsed =
        pucci_extremal<2>(*affine, x, 1.0, sign, 0.8, quad, 4);
    CHECK(collapsed == eval_LA<2>(*affine, x, Mat<2>::Identity(), 0.8, quad));
  }
  CHECK_THROWS_AS(
      pucci_extremal<2>(*affine, x, 0.0, PucciSign::plus, 0.8, quad, 4),
      std::invalid_argument);
  CHECK_THROWS_AS(
      pucci_extremal<2>(*affine, x, 1.5, PucciSign::plus, 0.8, quad, 4),
      std::invalid_argument);
}

TEST_CASE("degeneracy threshold composes the structural constants") {
  const double theta_max = degeneracy_threshold(1.0, 2.0, 0.75, 2, 0.1);
  CHECK(theta_max > 0.0);
  CHECK(std::isfinite(theta_max));
  const auto sc = structural_constants(2, 0.75, 1.0, 2.0, 0.1);
  CHECK(theta_max ==
        doctest::Approx(std::pow(sc.mu0 / (2.0 * sc.mu1), 1.0 / 1.5))
            .epsilon(1e-14));

  // Monotone decay to zero as the excess vanishes (mu0 ~ eta0^n).
  double prev = std::numeric_limits<double>::infinity();
  for (double eta0 : {1.0, 0.1, 0.01, 1e-4, 1e-6}) {
    const double t = degeneracy_threshold(1.0, 2.0, 0.75, 2, eta0);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(prev < 1e-6);

  // Remark-level stability of the s-sweep: (mu0/mu1) / (eta0 (2s-1))^n stays
  // bounded above and below across the whole range of s.
  for (int n : {2, 3}) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double s : {0.55, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99}) {
      const auto c = structural_constants(n, s, 1.3, 2.1, 0.4);
      const double ratio =
          (c.mu0 / c.mu1) / std::pow(0.4 * (2.0 * s - 1.0), n);
      CHECK(std::isfinite(ratio));
      CHECK(ratio > 0.0);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CAPTURE(n);
    CHECK(hi <= 50.0 * lo);
  }
}

TEST_CASE("ellipticity certificate on a strictly convex profile") {
  const auto f = soliton(Mat<2>::Identity());
  const QuadratureScheme quad;
  const std::vector<Vec<2>> region = {Vec<2>(0.0, 0.0), Vec<2>(0.3, 0.2),
                                      Vec<2>(-0.4, 0.1)};
  const auto dense = sample_detone_family<2>(0.05, 12, 12);
  const double s = 0.75;

  // First pass reads the measured threshold; the certificate itself is then
  // re-run at an admissible floor.
  const auto probe =
      ellipticity_certificate<2>(*f, region, dense, 0.9, s, quad, 1e-9);
  REQUIRE(probe.theta_max > 0.0);
  const double theta = std::min(0.5 * probe.theta_max, 0.9);
  const auto rep =
      ellipticity_certificate<2>(*f, region, dense, theta, s, quad, 1e-9);
  CHECK(rep.precondition_met);
  CHECK(rep.violations.empty());
  CHECK(rep.max_value_gap <= 1e-9);
  CHECK(rep.min_argmin_lambda >= theta);
  // The radial profile's minimizer is isotropic at the origin and stays well
  // inside the admissible spectrum on the whole region.
  CHECK(rep.min_argmin_lambda >= rep.theta_max);
  CHECK(rep.measured_excess > 0.0);
  CHECK(rep.measured_lipschitz >= 0.9);
  CHECK(rep.measured_semiconcavity ==
        doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("ellipticity certificate marks unattainable preconditions") {
  const auto f = make_affine_field<2>(0.3, Vec<2>(0.8, -0.2));
  const QuadratureScheme quad;
  const std::vector<Vec<2>> region = {Vec<2>(0.0, 0.0), Vec<2>(0.5, 0.5)};
  const auto dense = sample_detone_family<2>(0.1, 6, 6);
  const auto rep =
      ellipticity_certificate<2>(*f, region, dense, 0.3, 0.75, quad, 1e-9);
  CHECK_FALSE(rep.precondition_met);
  CHECK(rep.measured_excess <= 1e-12);
  // The comparison itself is still clean: both families see the same zero.
  CHECK(rep.violations.empty());
}

TEST_CASE("local limit recovers the determinant form, isotropic profile") {
  const auto f = soliton(Mat<2>::Identity());
  const QuadratureScheme quad;
  const auto fam = sample_detone_family<2>(0.25, 8, 8);
  const std::vector<double> s_list = {0.90, 0.95, 0.99};
  const auto out = local_limit<2>(*f, Vec<2>::Zero(), s_list, fam, quad);
  const double target = 0.5 * std::numbers::pi;  // (omega_2 / 4) det(I)^{1/2}
  CHECK(out.reference == doctest::Approx(target).epsilon(1e-5));
  CHECK(out.trace_reference == doctest::Approx(out.reference).epsilon(1e-10));
  CHECK(out.extrapolated == doctest::Approx(target).epsilon(0.05));
  for (double v : out.scaled_values) CHECK(v > 0.0);
}

TEST_CASE("local limit recovers the determinant form, anisotropic profile") {
  Mat<2> M;
  M << 4.0, 0.0, 0.0, 1.0;
  const auto f = soliton(M);
  const QuadratureScheme quad;
  const auto fam = sample_detone_family<2>(0.25, 8, 16);
  const std::vector<double> s_list = {0.90, 0.95, 0.99};
  const auto out = local_limit<2>(*f, Vec<2>::Zero(), s_list, fam, quad);
  const double target = std::numbers::pi;  // (omega_2 / 4) det(diag(4,1))^{1/2}
  CHECK(out.reference == doctest::Approx(target).epsilon(1e-4));
  CHECK(out.trace_reference == doctest::Approx(out.reference).epsilon(1e-10));
  CHECK(out.extrapolated == doctest::Approx(target).epsilon(0.05));
}

TEST_CASE("local limit extrapolation improves as s approaches one") {
  const auto f = soliton(Mat<2>::Identity());
  const QuadratureScheme quad;
  const auto fam = sample_detone_family<2>(0.25, 8, 8);
  const double target = 0.5 * std::numbers::pi;
  const auto far_out =
      local_limit<2>(*f, Vec<2>::Zero(), {0.60, 0.70, 0.80}, fam, quad);
  const auto near_out =
      local_limit<2>(*f, Vec<2>::Zero(), {0.90, 0.95, 0.99}, fam, quad);
  CHECK(std::abs(near_out.extrapolated - target) <=
        std::abs(far_out.extrapolated - target));
}

TEST_CASE("local limit trivial and invalid inputs") {
  const QuadratureScheme quad;
  const auto fam = sample_detone_family<2>(0.5, 4, 4);
  const auto affine = make_affine_field<2>(2.0, Vec<2>(0.3, 0.4));
  const auto out =
      local_limit<2>(*affine, Vec<2>(0.1, 0.2), {0.8, 0.9}, fam, quad);
  CHECK(out.reference == 0.0);
  CHECK(out.trace_reference == 0.0);
  CHECK(std::abs(out.extrapolated) <= 1e-10);

  CHECK_THROWS_AS(
      local_limit<2>(*affine, Vec<2>::Zero(), {0.9, 0.8}, fam, quad),
      std::invalid_argument);
  CHECK_THROWS_AS(local_limit<2>(*affine, Vec<2>::Zero(), {0.9}, fam, quad),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      local_limit<2>(*affine, Vec<2>::Zero(), {0.4, 0.9}, fam, quad),
      std::invalid_argument);
}
