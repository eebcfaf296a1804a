#include "doctest.h"
#include "fracma/detone.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace fracma;

namespace {

template <int N>
Mat<N> random_spd(oracles::XorShift& rng, double spread) {
  Mat<N> G;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) G(i, j) = rng.uniform(-1.0, 1.0);
  }
  const Mat<N> sym = 0.5 * (G + G.transpose());
  Eigen::SelfAdjointEigenSolver<Mat<N>> eig(sym);
  Vec<N> lam;
  for (int i = 0; i < N; ++i) lam[i] = std::exp(rng.uniform(-spread, spread));
  return eig.eigenvectors() * lam.asDiagonal() *
         eig.eigenvectors().transpose();
}

template <int N>
std::vector<double> flat(const Mat<N>& B) {
  std::vector<double> out(N * N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) out[std::size_t(i) * N + j] = B(i, j);
  }
  return out;
}

}  // namespace

TEST_CASE("det-one matrices normalize their eigenvalues") {
  const double c = std::cos(0.3), s = std::sin(0.3);
  Mat<2> P;
  P << c, -s, s, c;
  const auto A = DetOneMatrix<2>::from_eigensystem(P, Vec<2>(4.0, 1.0));
  CHECK(A.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(A.lambda_max() / A.lambda_min() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK((A.matrix() - A.matrix().transpose()).norm() < 1e-14);
}

TEST_CASE("from_spd reproduces a det-one matrix exactly") {
  oracles::XorShift rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Mat<3> S = random_spd<3>(rng, 1.0);
    S /= std::pow(S.determinant(), 1.0 / 3.0);
    const auto A = DetOneMatrix<3>::from_spd(S);
    CHECK(A.matrix().isApprox(S, 1e-10));
  }
}

TEST_CASE("polar decomposition splits into rotation times SPD") {
  oracles::XorShift rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    Mat<2> M;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) M(i, j) = rng.uniform(-2.0, 2.0);
    }
    if (std::abs(M.determinant()) < 1e-3) continue;
    const auto pd = polar_decompose<2>(M);
    CHECK((pd.orthogonal * pd.spd - M).norm() < 1e-12 * (1.0 + M.norm()));
    CHECK((pd.orthogonal.transpose() * pd.orthogonal - Mat<2>::Identity())
              .norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Mat<2>> eig(pd.spd);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("minimizing_matrix matches the closed form and the sampled infimum") {
  oracles::XorShift rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat<2> B = random_spd<2>(rng, 1.5);
    const auto tm = minimizing_matrix<2>(B);
    REQUIRE_FALSE(tm.degenerate);
    // Closed form: value n det(B)^{1/n}, attained at the stated minimizer.
    CHECK(tm.value ==
          doctest::Approx(2.0 * std::sqrt(B.determinant())).epsilon(1e-12));
    CHECK(quadratic_trace<2>(tm.minimizer.matrix(), B) ==
          doctest::Approx(tm.value).epsilon(1e-12));
    CHECK(tm.minimizer.matrix().determinant() ==
          doctest::Approx(1.0).epsilon(1e-10));
    // Independent sampled infimum brackets the value from above.
    const double sampled = oracles::sampled_trace_infimum(2, flat(B), 160);
    CHECK(sampled >= tm.value * (1.0 - 1e-9));
    CHECK(sampled <= tm.value * (1.0 + 2e-3));
  }
  const Mat<3> B3 = random_spd<3>(rng, 0.8);
  const auto tm3 = minimizing_matrix<3>(B3);
  CHECK(tm3.value ==
        doctest::Approx(3.0 * std::cbrt(B3.determinant())).epsilon(1e-12));
  const double sampled3 = oracles::sampled_trace_infimum(3, flat(B3), 24);
  CHECK(sampled3 >= tm3.value * (1.0 - 1e-9));
  CHECK(sampled3 <= tm3.value * (1.0 + 0.05));
}

TEST_CASE("singular arguments degenerate to an unattained zero infimum") {
  Mat<2> B;
  B << 1.0, 0.0, 0.0, 0.0;
  const auto tm = minimizing_matrix<2>(B);
  CHECK(tm.degenerate);
  CHECK(tm.value == 0.0);
  // The sampled infimum keeps decreasing as the family stretches: probe two
  // resolutions of the same sampled search.
  const double coarse = oracles::sampled_trace_infimum(2, flat(B), 40);
  const double fine = oracles::sampled_trace_infimum(2, flat(B), 160);
  CHECK(fine <= coarse * (1.0 + 1e-12));
  CHECK(fine > 0.0);
  Mat<2> indefinite;
  indefinite << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS(minimizing_matrix<2>(indefinite), std::invalid_argument);
}

TEST_CASE("inf_trace_sampled upper-bounds the closed form and converges") {
  oracles::XorShift rng(5);
  const Mat<2> B = random_spd<2>(rng, 1.2);
  const double exact = 2.0 * std::sqrt(B.determinant());
  const auto fam_coarse = sample_detone_family<2>(0.05, 16, 16);
  const auto fam_fine = sample_detone_family<2>(0.05, 128, 128);
  const double coarse = inf_trace_sampled<2>(B, fam_coarse);
  const double fine = inf_trace_sampled<2>(B, fam_fine);
  CHECK(coarse >= exact * (1.0 - 1e-12));
  CHECK(fine >= exact * (1.0 - 1e-12));
  CHECK(fine <= coarse * (1.0 + 1e-12));
  CHECK(fine <= exact * (1.0 + 1e-3));
}

TEST_CASE("detone families are det-one, identity-led, and theta-floored") {
  const double theta = 0.25;
  const auto fam2 = sample_detone_family<2>(theta, 8, 6);
  REQUIRE(!fam2.members.empty());
  CHECK(fam2.members[0].matrix().isApprox(Mat<2>::Identity(), 1e-14));
  bool extremal_seen = false;
  for (const auto& m : fam2.members) {
    CHECK(m.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.lambda_min() >= theta * (1.0 - 1e-10));
    CHECK(m.lambda_max() <= 1.0 / theta * (1.0 + 1e-10));
    if (std::abs(m.lambda_min() - theta) < 1e-10) extremal_seen = true;
  }
  CHECK(extremal_seen);

  const auto fam3 = sample_detone_family<3>(theta, 4, 5);
  bool pucci_axis = false;
  for (const auto& m : fam3.members) {
    CHECK(m.matrix().determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(m.lambda_min() >= theta * (1.0 - 1e-9));
    CHECK(m.lambda_max() <= std::pow(theta, -2.0) * (1.0 + 1e-9));
    // The Pucci-extremal spectrum (theta, theta^{-1/2}, theta^{-1/2}).
    if (std::abs(m.lambda_min() - theta) < 1e-9 &&
        std::abs(m.lambda_max() - 1.0 / std::sqrt(theta)) < 1e-9) {
      pucci_axis = true;
    }
  }
  CHECK(pucci_axis);

  const auto trivial = sample_detone_family<2>(1.0, 8, 6);
  CHECK(trivial.members.size() == 1);
  CHECK_THROWS_AS(sample_detone_family<2>(1.5, 8, 6), std::invalid_argument);
}

TEST_CASE("refine_detone_param descends the objective") {
  Mat<2> B;
  B << 3.0, 0.7, 0.7, 1.0;
  const auto objective = [&B](const DetOneMatrix<2>& A) {
    return quadratic_trace<2>(A.matrix(), B);
  };
  DetOneParam<2> start{0.0, 0.0};
  const double at_start = objective(detone_from_param<2>(start));
  const auto refined = refine_detone_param<2>(start, 0.05, objective, 40, 0.5);
  const double at_end = objective(detone_from_param<2>(refined));
  CHECK(at_end <= at_start + 1e-14);
  // The refined objective closes most of the gap to the true infimum.
  const double exact = 2.0 * std::sqrt(B.determinant());
  CHECK(at_end <= exact * (1.0 + 1e-6));
}
