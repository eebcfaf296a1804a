#pragma once

#include "fracma/geometry.hpp"

#include <functional>
#include <vector>

namespace fracma {

// Symmetric positive definite matrix with determinant one, stored by
// eigen-decomposition A = P diag(lambda) P^t.
template <int N>
class DetOneMatrix {
 public:
  DetOneMatrix() : DetOneMatrix(identity()) {}

  // Normalizes the eigenvalues to det = 1; P must be orthogonal and the
  // eigenvalues strictly positive.
  static DetOneMatrix from_eigensystem(const Mat<N>& P, const Vec<N>& eigvals);
  // Eigendecomposes a symmetric positive definite matrix and normalizes.
  static DetOneMatrix from_spd(const Mat<N>& B);
  static DetOneMatrix identity();

  const Mat<N>& eigvecs() const { return P_; }
  const Vec<N>& eigvals() const { return lam_; }
  const Mat<N>& matrix() const { return A_; }
  double lambda_min() const { return lam_.minCoeff(); }
  double lambda_max() const { return lam_.maxCoeff(); }

 private:
  DetOneMatrix(const Mat<N>& P, const Vec<N>& lam);

  Mat<N> P_;
  Vec<N> lam_;
  Mat<N> A_;  // cached P diag(lam) P^t
};

// Coordinates on the det-one manifold used for sampling and local descent.
// n = 2: A = R(alpha) diag(e^t, e^{-t}) R(alpha)^t, alpha in [0, pi/2)
//        (A(alpha, -t) = A(alpha + pi/2, t), so this covers everything).
// n = 3: log-eigenvalues (l1, l2, -l1-l2) conjugated by the ZYZ rotation
//        Rz(za) Ry(yb) Rz(zc).
template <int N>
struct DetOneParam;

template <>
struct DetOneParam<2> {
  double alpha = 0.0;
  double t = 0.0;
};

template <>
struct DetOneParam<3> {
  double l1 = 0.0;
  double l2 = 0.0;
  double za = 0.0;
  double yb = 0.0;
  double zc = 0.0;
};

template <int N>
DetOneMatrix<N> detone_from_param(const DetOneParam<N>& p);

// Finite subset of {A SPD : det A = 1, lambda_min(A) >= floor_theta} used to
// evaluate infima.  Always contains the identity; params is aligned with
// members and carries the manifold coordinates for local refinement.
template <int N>
struct MatrixFamily {
  double floor_theta = 1.0;
  std::vector<DetOneMatrix<N>> members;
  std::vector<DetOneParam<N>> params;
};

// Geometric eigenvalue grid over the constraint simplex (log-space lattice,
// endpoints = the extremal spectra {theta, .., theta^{1-n}}) crossed with a
// rotation net: uniform angles on [0, pi/2) for n = 2 (rotation_res angles,
// 2 eig_res + 1 log-eigenvalue steps), a ZYZ axis-angle grid for n = 3
// (rotation_res angles per axis, barycentric lattice with eig_res rows).
// theta = 1 collapses to {identity}.
template <int N>
MatrixFamily<N> sample_detone_family(double theta, int rotation_res,
                                     int eig_res);
// One-knob version: n = 2 uses (res, res); n = 3 uses cbrt(res) rotations
// per axis and res/8 lattice rows, keeping member count ~ res-cubed.
template <int N>
MatrixFamily<N> sample_detone_family(double theta, int res);

// Polar decomposition M = O * S with O orthogonal and S symmetric positive
// definite (unique for invertible M).
template <int N>
struct PolarDecomposition {
  Mat<N> orthogonal;
  Mat<N> spd;
};
template <int N>
PolarDecomposition<N> polar_decompose(const Mat<N>& M);

// Closed-form solution of inf{trace(A A^t B) : A SPD, det A = 1} (value
// n det(B)^{1/n}).  For singular positive semidefinite B the infimum is 0
// and is not attained: degenerate is set and minimizer is unset (identity).
template <int N>
struct TraceMinimizer {
  bool degenerate = false;
  DetOneMatrix<N> minimizer;
  double value = 0.0;
};
template <int N>
TraceMinimizer<N> minimizing_matrix(const Mat<N>& B);

template <int N>
double quadratic_trace(const Mat<N>& A, const Mat<N>& B);  // trace(A A^t B)

// min over family members of trace(A A^t B).
template <int N>
double inf_trace_sampled(const Mat<N>& B, const MatrixFamily<N>& fam);

// Pattern search on the manifold coordinates (repeat improving steps per
// coordinate, halve the step after a stalled pass), keeping
// lambda_min >= floor_theta; returns the best parameters found.
template <int N>
DetOneParam<N> refine_detone_param(
    const DetOneParam<N>& start, double floor_theta,
    const std::function<double(const DetOneMatrix<N>&)>& objective, int rounds,
    double initial_step);

}  // namespace fracma
