#include "fracma/detone.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <numbers>
#include <array>
#include <cmath>
#include <stdexcept>

namespace fracma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

Eigen::Matrix2d rot2(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix2d R;
  R << c, -s, s, c;
  return R;
}

Eigen::Matrix3d rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d R;
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

Eigen::Matrix3d rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d R;
  R << c, 0, s, 0, 1, 0, -s, 0, c;
  return R;
}

}  // namespace

template <int N>
DetOneMatrix<N>::DetOneMatrix(const Mat<N>& P, const Vec<N>& lam)
    : P_(P), lam_(lam) {
  A_ = P_ * lam_.asDiagonal() * P_.transpose();
  A_ = 0.5 * (A_ + A_.transpose());
}

template <int N>
DetOneMatrix<N> DetOneMatrix<N>::from_eigensystem(const Mat<N>& P,
                                                  const Vec<N>& eigvals) {
  require((P * P.transpose() - Mat<N>::Identity())
                  .template lpNorm<Eigen::Infinity>() <= 1e-9,
          "det-one eigenvector matrix must be orthogonal");
  require(eigvals.minCoeff() > 0.0, "det-one eigenvalues must be positive");
  // Normalize in log space, then polish once so the eigenvalue product is 1
  // to within 1e-12 even for extreme spectra.
  Vec<N> lam = eigvals;
  for (int pass = 0; pass < 2; ++pass) {
    double log_det = 0.0;
    for (int i = 0; i < N; ++i) log_det += std::log(lam[i]);
    lam *= std::exp(-log_det / N);
  }
  double prod = 1.0;
  for (int i = 0; i < N; ++i) prod *= lam[i];
  require(std::abs(prod - 1.0) <= 1e-12, "det-one normalization failed");
  return DetOneMatrix(P, lam);
}

template <int N>
DetOneMatrix<N> DetOneMatrix<N>::from_spd(const Mat<N>& B) {
  require((B - B.transpose()).template lpNorm<Eigen::Infinity>() <=
              1e-12 * (1.0 + B.template lpNorm<Eigen::Infinity>()),
          "det-one source matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(0.5 * (B + B.transpose()));
  require(es.eigenvalues().minCoeff() > 0.0,
          "det-one source matrix must be positive definite");
  return from_eigensystem(es.eigenvectors(), es.eigenvalues());
}

template <int N>
DetOneMatrix<N> DetOneMatrix<N>::identity() {
  return DetOneMatrix(Mat<N>::Identity(), Vec<N>::Ones());
}

template <>
DetOneMatrix<2> detone_from_param<2>(const DetOneParam<2>& p) {
  Vec<2> lam(std::exp(p.t), std::exp(-p.t));
  return DetOneMatrix<2>::from_eigensystem(rot2(p.alpha), lam);
}

template <>
DetOneMatrix<3> detone_from_param<3>(const DetOneParam<3>& p) {
  const Eigen::Matrix3d R = rot_z(p.za) * rot_y(p.yb) * rot_z(p.zc);
  Vec<3> lam(std::exp(p.l1), std::exp(p.l2), std::exp(-p.l1 - p.l2));
  return DetOneMatrix<3>::from_eigensystem(R, lam);
}

template <>
MatrixFamily<2> sample_detone_family<2>(double theta, int rotation_res,
                                        int eig_res) {
  require(theta > 0.0 && theta <= 1.0, "family floor must lie in (0, 1]");
  require(rotation_res >= 1 && eig_res >= 1, "family resolution must be >= 1");
  MatrixFamily<2> fam;
  fam.floor_theta = theta;
  fam.members.push_back(DetOneMatrix<2>::identity());
  fam.params.push_back({});
  if (theta == 1.0) return fam;

  const double T = std::log(1.0 / theta);
  for (int i = 0; i < rotation_res; ++i) {
    const double alpha = (i * (std::numbers::pi / 2.0)) / rotation_res;
    for (int j = -eig_res; j <= eig_res; ++j) {
      if (j == 0) continue;  // identity, already present
      DetOneParam<2> p{alpha, j * T / eig_res};
      fam.params.push_back(p);
      fam.members.push_back(detone_from_param<2>(p));
    }
  }
  return fam;
}

template <>
MatrixFamily<3> sample_detone_family<3>(double theta, int rotation_res,
                                        int eig_res) {
  require(theta > 0.0 && theta <= 1.0, "family floor must lie in (0, 1]");
  require(rotation_res >= 1 && eig_res >= 1, "family resolution must be >= 1");
  MatrixFamily<3> fam;
  fam.floor_theta = theta;
  fam.members.push_back(DetOneMatrix<3>::identity());
  fam.params.push_back({});
  if (theta == 1.0) return fam;

  // Barycentric lattice on the simplex {l_i >= log(theta), sum l_i = 0} in
  // the (l1, l2) chart; vertices are the extremal spectra (theta, theta,
  // theta^{-2}) up to permutation.
  const double T = std::log(1.0 / theta);
  const double v[3][2] = {{-T, -T}, {-T, 2.0 * T}, {2.0 * T, -T}};
  std::vector<std::array<double, 2>> logs;
  const int r = eig_res;
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; j <= r - i; ++j) {
      const int k = r - i - j;
      const double l1 = (i * v[0][0] + j * v[1][0] + k * v[2][0]) / r;
      const double l2 = (i * v[0][1] + j * v[1][1] + k * v[2][1]) / r;
      if (l1 == 0.0 && l2 == 0.0) continue;
      logs.push_back({l1, l2});
    }
  }
  if (r % 2 == 1) {
    // Edge midpoints carry the other extremal spectrum (theta, theta^{-1/2},
    // theta^{-1/2}); present in the lattice only for even r.
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3;
      logs.push_back({0.5 * (v[a][0] + v[b][0]), 0.5 * (v[a][1] + v[b][1])});
    }
  }

  for (int ia = 0; ia < rotation_res; ++ia) {
    for (int ib = 0; ib < rotation_res; ++ib) {
      for (int ic = 0; ic < rotation_res; ++ic) {
        const double za = ia * std::numbers::pi / rotation_res;
        const double yb = ib * std::numbers::pi / rotation_res;
        const double zc = ic * std::numbers::pi / rotation_res;
        for (const auto& l : logs) {
          DetOneParam<3> p{l[0], l[1], za, yb, zc};
          fam.params.push_back(p);
          fam.members.push_back(detone_from_param<3>(p));
        }
      }
    }
  }
  return fam;
}

template <>
MatrixFamily<2> sample_detone_family<2>(double theta, int res) {
  return sample_detone_family<2>(theta, res, res);
}

template <>
MatrixFamily<3> sample_detone_family<3>(double theta, int res) {
  const int rot = std::max(1, (int)std::lround(std::cbrt((double)res)));
  const int eig = std::max(1, res / 8);
  return sample_detone_family<3>(theta, rot, eig);
}

template <int N>
PolarDecomposition<N> polar_decompose(const Mat<N>& M) {
  Eigen::JacobiSVD<Mat<N>> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sig = svd.singularValues();
  require(sig.minCoeff() > 1e-12 * std::max(1.0, sig.maxCoeff()),
          "polar decomposition requires an invertible matrix");
  PolarDecomposition<N> out;
  out.orthogonal = svd.matrixU() * svd.matrixV().transpose();
  out.spd = svd.matrixV() * sig.asDiagonal() * svd.matrixV().transpose();
  return out;
}

template <int N>
TraceMinimizer<N> minimizing_matrix(const Mat<N>& B) {
  require((B - B.transpose()).template lpNorm<Eigen::Infinity>() <=
              1e-12 * (1.0 + B.template lpNorm<Eigen::Infinity>()),
          "trace minimizer requires a symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Mat<N>> es(0.5 * (B + B.transpose()));
  Vec<N> lam = es.eigenvalues();
  require(lam.minCoeff() >= -1e-10,
          "trace minimizer requires positive semidefinite input");

  TraceMinimizer<N> out;
  if (lam.minCoeff() <= 1e-10) {
    // Singular direction: stretching A along it drives the trace to 0, so
    // the infimum is 0 and is not attained.
    out.degenerate = true;
    out.minimizer = DetOneMatrix<N>::identity();
    out.value = 0.0;
    return out;
  }
  double log_det = 0.0;
  for (int i = 0; i < N; ++i) log_det += std::log(lam[i]);
  Vec<N> a;
  for (int i = 0; i < N; ++i) {
    a[i] = std::exp(log_det / (2.0 * N) - 0.5 * std::log(lam[i]));
  }
  out.degenerate = false;
  out.minimizer = DetOneMatrix<N>::from_eigensystem(es.eigenvectors(), a);
  out.value = N * std::exp(log_det / N);
  return out;
}

template <int N>
double quadratic_trace(const Mat<N>& A, const Mat<N>& B) {
  return (A * A.transpose() * B).trace();
}

template <int N>
double inf_trace_sampled(const Mat<N>& B, const MatrixFamily<N>& fam) {
  require(!fam.members.empty(), "matrix family must be non-empty");
  double best = std::numeric_limits<double>::infinity();
  for (const DetOneMatrix<N>& A : fam.members) {
    best = std::min(best, quadratic_trace<N>(A.matrix(), B));
  }
  return best;
}

namespace {

template <int N>
constexpr int param_count() {
  return N == 2 ? 2 : 5;
}

template <int N>
std::array<double, param_count<N>()> param_to_array(const DetOneParam<N>& p);
template <int N>
DetOneParam<N> param_from_array(const std::array<double, param_count<N>()>& a);

template <>
std::array<double, 2> param_to_array<2>(const DetOneParam<2>& p) {
  return {p.alpha, p.t};
}
template <>
DetOneParam<2> param_from_array<2>(const std::array<double, 2>& a) {
  return {a[0], a[1]};
}
template <>
std::array<double, 5> param_to_array<3>(const DetOneParam<3>& p) {
  return {p.l1, p.l2, p.za, p.yb, p.zc};
}
template <>
DetOneParam<3> param_from_array<3>(const std::array<double, 5>& a) {
  return {a[0], a[1], a[2], a[3], a[4]};
}

// Project the log-eigenvalue coordinates back into the floor constraint set.
template <int N>
void clamp_param(std::array<double, param_count<N>()>& a, double T) {
  if constexpr (N == 2) {
    a[1] = std::clamp(a[1], -T, T);
  } else {
    a[0] = std::max(a[0], -T);
    a[1] = std::max(a[1], -T);
    const double excess = (a[0] + a[1]) - T;  // l3 >= -T means l1 + l2 <= T
    if (excess > 0.0) {
      a[0] -= 0.5 * excess;
      a[1] -= 0.5 * excess;
      a[0] = std::max(a[0], -T);
      a[1] = std::max(a[1], -T);
    }
  }
}

}  // namespace

template <int N>
DetOneParam<N> refine_detone_param(
    const DetOneParam<N>& start, double floor_theta,
    const std::function<double(const DetOneMatrix<N>&)>& objective, int rounds,
    double initial_step) {
  require(floor_theta > 0.0 && floor_theta <= 1.0,
          "family floor must lie in (0, 1]");
  constexpr int K = param_count<N>();
  const double T = std::log(1.0 / floor_theta);

  // Per-coordinate scales: rotations move on [0, pi), log-eigenvalues on
  // [-T, T].
  std::array<double, K> scale;
  if constexpr (N == 2) {
    scale = {std::numbers::pi / 2.0, std::max(T, 1e-30)};
  } else {
    const double lT = std::max(T, 1e-30);
    scale = {lT, lT, std::numbers::pi, std::numbers::pi, std::numbers::pi};
  }

  std::array<double, K> best = param_to_array<N>(start);
  clamp_param<N>(best, T);
  double best_val = objective(detone_from_param<N>(param_from_array<N>(best)));

  const auto value_at = [&](const std::array<double, K>& a) {
    return objective(detone_from_param<N>(param_from_array<N>(a)));
  };

  // Pattern search: along each coordinate keep taking steps while the
  // objective improves; halve the step only after a full pass with no
  // improvement anywhere.  `rounds` caps the number of passes.
  double step = initial_step;
  for (int round = 0; round < rounds; ++round) {
    bool improved = false;
    for (int c = 0; c < K; ++c) {
      for (double dir : {+1.0, -1.0}) {
        for (;;) {
          std::array<double, K> cand = best;
          cand[c] += dir * step * scale[c];
          clamp_param<N>(cand, T);
          const double val = value_at(cand);
          if (!(val < best_val)) break;
          best_val = val;
          best = cand;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step * 0.5 <= 1e-12) break;
  }
  return param_from_array<N>(best);
}

template class DetOneMatrix<2>;
template class DetOneMatrix<3>;
template struct MatrixFamily<2>;
template struct MatrixFamily<3>;
template PolarDecomposition<2> polar_decompose<2>(const Mat<2>&);
template PolarDecomposition<3> polar_decompose<3>(const Mat<3>&);
template TraceMinimizer<2> minimizing_matrix<2>(const Mat<2>&);
template TraceMinimizer<3> minimizing_matrix<3>(const Mat<3>&);
template double quadratic_trace<2>(const Mat<2>&, const Mat<2>&);
template double quadratic_trace<3>(const Mat<3>&, const Mat<3>&);
template double inf_trace_sampled<2>(const Mat<2>&, const MatrixFamily<2>&);
template double inf_trace_sampled<3>(const Mat<3>&, const MatrixFamily<3>&);
template DetOneParam<2> refine_detone_param<2>(
    const DetOneParam<2>&, double,
    const std::function<double(const DetOneMatrix<2>&)>&, int, double);
template DetOneParam<3> refine_detone_param<3>(
    const DetOneParam<3>&, double,
    const std::function<double(const DetOneMatrix<3>&)>&, int, double);

}  // namespace fracma
