#pragma once

#include "fracma/constants.hpp"
#include "fracma/detone.hpp"
#include "fracma/field.hpp"
#include "fracma/quadrature.hpp"

#include <vector>

namespace fracma {

// Family infimum at a point.  With a floor near zero the family approximates
// the full det-one class and value approximates D_s u(x); with a floor
// theta > 0 it is the uniformly elliptic truncation D_s^theta u(x).
template <int N>
struct OperatorResult {
  double value = 0.0;
  DetOneMatrix<N> argmin;
  double argmin_lambda_min = 1.0;
  double family_floor = 1.0;  // floor theta of the family scanned
};

// Minimum of eval_LA over the family members.  The discrete minimum is an
// upper bound for the continuum infimum; its resolution error is first order
// in the family spacing near the minimizer.  When report is given it receives
// the argmin evaluation's diagnostics (kernel mass, truncation estimates).
template <int N>
OperatorResult<N> eval_Ds(const ScalarField<N>& f, const Vec<N>& x,
                          const MatrixFamily<N>& fam, double s,
                          const QuadratureScheme& quad,
                          LAReport* report = nullptr);

// Extremal Pucci operators: max (plus) / min (minus) of eval_LA over a
// sampled set of SPD matrices with theta I <= A <= theta^{1-n} I and no
// determinant constraint (eigenvalue box across a rotation net).  The set
// contains sample_detone_family(theta, res), so minus / plus bracket
// eval_Ds over that family by construction.
enum class PucciSign { minus, plus };

template <int N>
double pucci_extremal(const ScalarField<N>& f, const Vec<N>& x, double theta,
                      PucciSign sign, double s, const QuadratureScheme& quad,
                      int res = 6);

// Largest admissible ellipticity floor
//   theta_max = (mu0 / (n mu1))^{(n-1)/(2s)}
// derived from the structural constants: for any theta < theta_max the
// truncation is exact, D_s = D_s^theta, wherever (1-s) D_s u >= eta0.
double degeneracy_threshold(double lipschitz, double cone_bound, double s,
                            int n, double excess);

// Pointwise audit of that exactness claim on a sampled region.  For every
// point the dense family's minimum is compared against the minimum over its
// floor-theta sub-family (members with lambda_min >= theta); a point is a
// violation when the two values differ by more than tol or no member within
// tol of the dense minimum keeps lambda_min >= theta (the argmin is only
// determined up to the resolution tolerance, so the most elliptic
// tie-achiever is the recorded one).  The Lipschitz constant is the far-field model's
// global bound raised by centered differences at spacing fd_spacing over the
// region; semiconcavity is measured by centered second differences; the
// excess eta0 is the regional minimum of (1-s) times the dense value.
// Report-only: when the
// measured constants cannot support the theorem's hypotheses (eta0 <= 0 or
// theta >= theta_max) the report is marked precondition-unmet instead of
// throwing.
template <int N>
struct EllipticityReport {
  bool precondition_met = false;
  double theta = 0.0;
  double theta_max = 0.0;        // from the measured constants; 0 if unmet
  double measured_lipschitz = 0.0;
  double measured_semiconcavity = 0.0;  // max second difference / h^2
  double measured_excess = 0.0;         // min over region of (1-s) value
  double max_value_gap = 0.0;      // max (floored - dense) over the region
  double min_argmin_lambda = 0.0;  // min over region of the argmin lambda_min
  std::vector<int> violations;     // indices into the region list
};

template <int N>
EllipticityReport<N> ellipticity_certificate(
    const ScalarField<N>& f, const std::vector<Vec<N>>& region,
    const MatrixFamily<N>& fam_dense, double theta, double s,
    const QuadratureScheme& quad, double tol, double fd_spacing = 1e-3);

// s -> 1 diagnostic at a classical point: evaluates (1 - s) eval_Ds for each
// s in s_list, fits the two-term model a + b (1 - s) by least squares, and
// reports a as the extrapolated local limit.  The reference is
// (omega_n / 4) det(H)^{1/n} with H the centered-difference Hessian at
// spacing fd_spacing; trace_reference evaluates the same quantity through
// the minimizing matrix, (omega_n / (4 n)) trace(A A^t H) at the closed-form
// argmin.  s_list must be strictly increasing inside (1/2, 1) with at least
// two entries.
template <int N>
struct LocalLimitResult {
  double extrapolated = 0.0;
  double reference = 0.0;
  double trace_reference = 0.0;
  std::vector<double> scaled_values;  // (1 - s) eval_Ds per s in s_list
};

template <int N>
LocalLimitResult<N> local_limit(const ScalarField<N>& f, const Vec<N>& x,
                                const std::vector<double>& s_list,
                                const MatrixFamily<N>& fam,
                                const QuadratureScheme& quad,
                                double fd_spacing = 1e-3);

}  // namespace fracma
