#include "fracma/ma_operator.hpp"

#include "fracma/parallel.hpp"
#include "fracma/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

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

Eigen::Matrix3d rot_zyz(double za, double yb, double zc) {
  const auto rz = [](double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d R;
    R << c, -s, 0, s, c, 0, 0, 0, 1;
    return R;
  };
  const double c = std::cos(yb), s = std::sin(yb);
  Eigen::Matrix3d Ry;
  Ry << c, 0, s, 0, 1, 0, -s, 0, c;
  return rz(za) * Ry * rz(zc);
}

// SPD matrices R diag(lambda) R^t with each eigenvalue on a log grid over
// [theta, theta^{1-n}] (both endpoints included), crossed with a rotation
// net; no determinant constraint.
template <int N>
std::vector<Mat<N>> eigenvalue_box(double theta, int res);

template <>
std::vector<Mat<2>> eigenvalue_box<2>(double theta, int res) {
  const double lo = std::log(theta);
  const double hi = -1.0 * lo;  // theta^{1-n}, n = 2
  const int m = res + 1;
  std::vector<double> lam(m);
  for (int j = 0; j < m; ++j) {
    lam[j] = std::exp(lo + (hi - lo) * j / (m - 1.0));
  }
  std::vector<Mat<2>> out;
  out.reserve(static_cast<std::size_t>(res) * m * m);
  for (int i = 0; i < res; ++i) {
    const Mat<2> R = rot2(i * (std::numbers::pi / 2.0) / res);
    for (int j = 0; j < m; ++j) {
      for (int k = 0; k < m; ++k) {
        const Vec<2> d(lam[j], lam[k]);
        out.push_back(R * d.asDiagonal() * R.transpose());
      }
    }
  }
  return out;
}

template <>
std::vector<Mat<3>> eigenvalue_box<3>(double theta, int res) {
  const double lo = std::log(theta);
  const double hi = -2.0 * lo;  // theta^{1-n}, n = 3
  const int m = res + 1;
  std::vector<double> lam(m);
  for (int j = 0; j < m; ++j) {
    lam[j] = std::exp(lo + (hi - lo) * j / (m - 1.0));
  }
  const int rot = std::max(1, static_cast<int>(std::lround(std::cbrt(res))));
  std::vector<Mat<3>> out;
  out.reserve(static_cast<std::size_t>(rot) * rot * rot * m * m * m);
  for (int ia = 0; ia < rot; ++ia) {
    for (int ib = 0; ib < rot; ++ib) {
      for (int ic = 0; ic < rot; ++ic) {
        const Mat<3> R = rot_zyz(ia * std::numbers::pi / rot,
                                 ib * std::numbers::pi / rot,
                                 ic * std::numbers::pi / rot);
        for (int j = 0; j < m; ++j) {
          for (int k = 0; k < m; ++k) {
            for (int l = 0; l < m; ++l) {
              const Vec<3> d(lam[j], lam[k], lam[l]);
              out.push_back(R * d.asDiagonal() * R.transpose());
            }
          }
        }
      }
    }
  }
  return out;
}

// Direction representatives (up to sign) for finite-difference probes.
template <int N>
std::vector<Vec<N>> probe_directions();

template <>
std::vector<Vec<2>> probe_directions<2>() {
  std::vector<Vec<2>> dirs;
  for (int k = 0; k < 8; ++k) {
    const double a = k * std::numbers::pi / 8.0;
    dirs.emplace_back(std::cos(a), std::sin(a));
  }
  return dirs;
}

template <>
std::vector<Vec<3>> probe_directions<3>() {
  std::vector<Vec<3>> dirs;
  for (int i = 0; i < 3; ++i) dirs.push_back(Vec<3>::Unit(i));
  const double r2 = std::numbers::sqrt2;
  dirs.emplace_back(Vec<3>(1, 1, 0) / r2);
  dirs.emplace_back(Vec<3>(1, -1, 0) / r2);
  dirs.emplace_back(Vec<3>(1, 0, 1) / r2);
  dirs.emplace_back(Vec<3>(1, 0, -1) / r2);
  dirs.emplace_back(Vec<3>(0, 1, 1) / r2);
  dirs.emplace_back(Vec<3>(0, 1, -1) / r2);
  const double r3 = std::numbers::sqrt3;
  dirs.emplace_back(Vec<3>(1, 1, 1) / r3);
  dirs.emplace_back(Vec<3>(1, 1, -1) / r3);
  dirs.emplace_back(Vec<3>(1, -1, 1) / r3);
  dirs.emplace_back(Vec<3>(1, -1, -1) / r3);
  return dirs;
}

}  // namespace

template <int N>
OperatorResult<N> eval_Ds(const ScalarField<N>& f, const Vec<N>& x,
                          const MatrixFamily<N>& fam, double s,
                          const QuadratureScheme& quad, LAReport* report) {
  require(!fam.members.empty(), "eval_Ds requires a non-empty matrix family");
  const std::int64_t count = static_cast<std::int64_t>(fam.members.size());
  std::vector<double> values(fam.members.size());
  parallel_for(count, [&](std::int64_t i) {
    values[i] = eval_LA<N>(f, x, fam.members[i].matrix(), s, quad);
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  if (report) {
    eval_LA<N>(f, x, fam.members[best].matrix(), s, quad, report);
  }
  OperatorResult<N> out;
  out.value = values[best];
  out.argmin = fam.members[best];
  out.argmin_lambda_min = fam.members[best].lambda_min();
  out.family_floor = fam.floor_theta;
  return out;
}

template <int N>
double pucci_extremal(const ScalarField<N>& f, const Vec<N>& x, double theta,
                      PucciSign sign, double s, const QuadratureScheme& quad,
                      int res) {
  require(theta > 0.0 && theta <= 1.0, "Pucci floor must lie in (0, 1]");
  require(res >= 1, "Pucci sampling resolution must be >= 1");
  if (theta == 1.0) {
    return eval_LA<N>(f, x, Mat<N>::Identity(), s, quad);
  }
  std::vector<Mat<N>> mats = eigenvalue_box<N>(theta, res);
  const MatrixFamily<N> fam = sample_detone_family<N>(theta, res);
  for (const DetOneMatrix<N>& m : fam.members) mats.push_back(m.matrix());

  std::vector<double> values(mats.size());
  parallel_for(static_cast<std::int64_t>(mats.size()), [&](std::int64_t i) {
    values[i] = eval_LA<N>(f, x, mats[i], s, quad);
  });
  if (sign == PucciSign::minus) {
    return *std::min_element(values.begin(), values.end());
  }
  return *std::max_element(values.begin(), values.end());
}

double degeneracy_threshold(double lipschitz, double cone_bound, double s,
                            int n, double excess) {
  const StructuralConstants sc =
      structural_constants(n, s, lipschitz, cone_bound, excess);
  return std::pow(sc.mu0 / (n * sc.mu1), (n - 1.0) / (2.0 * s));
}

template <int N>
EllipticityReport<N> ellipticity_certificate(
    const ScalarField<N>& f, const std::vector<Vec<N>>& region,
    const MatrixFamily<N>& fam_dense, double theta, double s,
    const QuadratureScheme& quad, double tol, double fd_spacing) {
  require(!region.empty(), "ellipticity certificate requires sample points");
  require(!fam_dense.members.empty(),
          "ellipticity certificate requires a non-empty family");
  require(theta > 0.0 && theta <= 1.0, "ellipticity floor must lie in (0, 1]");
  require(tol >= 0.0 && std::isfinite(tol), "tolerance must be finite");
  require(fd_spacing > 0.0, "difference spacing must be positive");

  EllipticityReport<N> rep;
  rep.theta = theta;
  rep.min_argmin_lambda = std::numeric_limits<double>::infinity();
  rep.measured_excess = std::numeric_limits<double>::infinity();
  // The theorem's L is a global Lipschitz constant; the far-field model
  // carries a bound for it, which the sampled differences can only raise.
  rep.measured_lipschitz = f.far_model().lipschitz_bound();

  const double floor_slack = theta * (1.0 - 1e-12);
  const auto dirs = probe_directions<N>();
  const double h = fd_spacing;
  const std::int64_t count = static_cast<std::int64_t>(fam_dense.members.size());
  std::vector<double> values(fam_dense.members.size());
  for (std::size_t i = 0; i < region.size(); ++i) {
    const Vec<N>& x = region[i];
    parallel_for(count, [&](std::int64_t m) {
      values[m] = eval_LA<N>(f, x, fam_dense.members[m].matrix(), s, quad);
    });
    // Dense minimum, the minimum over the floor-theta sub-family, and the
    // most elliptic member achieving the dense minimum within tol (the
    // argmin is only determined up to the resolution tolerance).
    double vmin = std::numeric_limits<double>::infinity();
    double vfloor = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < values.size(); ++m) {
      vmin = std::min(vmin, values[m]);
      if (fam_dense.members[m].lambda_min() >= floor_slack) {
        vfloor = std::min(vfloor, values[m]);
      }
    }
    double lam_at_min = 0.0;
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (values[m] <= vmin + tol) {
        lam_at_min = std::max(lam_at_min, fam_dense.members[m].lambda_min());
      }
    }
    const double gap = vfloor - vmin;  // >= 0: the sub-family is a subset
    rep.max_value_gap = std::max(rep.max_value_gap, gap);
    rep.min_argmin_lambda = std::min(rep.min_argmin_lambda, lam_at_min);
    rep.measured_excess = std::min(rep.measured_excess, (1.0 - s) * vmin);
    if (gap > tol || lam_at_min < floor_slack) {
      rep.violations.push_back(static_cast<int>(i));
    }
    const double u0 = f.value(x);
    for (const Vec<N>& e : dirs) {
      const double up = f.value(x + h * e);
      const double um = f.value(x - h * e);
      rep.measured_lipschitz =
          std::max(rep.measured_lipschitz, std::abs(up - um) / (2.0 * h));
      rep.measured_semiconcavity =
          std::max(rep.measured_semiconcavity, (up + um - 2.0 * u0) / (h * h));
    }
  }

  if (rep.measured_excess > 0.0 && rep.measured_lipschitz > 0.0 &&
      rep.measured_semiconcavity > 0.0) {
    rep.theta_max =
        degeneracy_threshold(rep.measured_lipschitz,
                             rep.measured_semiconcavity, s, N,
                             rep.measured_excess);
    rep.precondition_met = theta < rep.theta_max;
  }
  return rep;
}

template <int N>
LocalLimitResult<N> local_limit(const ScalarField<N>& f, const Vec<N>& x,
                                const std::vector<double>& s_list,
                                const MatrixFamily<N>& fam,
                                const QuadratureScheme& quad,
                                double fd_spacing) {
  require(s_list.size() >= 2, "local limit needs at least two orders s");
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    require(s_list[i] > 0.5 && s_list[i] < 1.0,
            "local limit orders must lie in (1/2, 1)");
    require(i == 0 || s_list[i] > s_list[i - 1],
            "local limit orders must be strictly increasing");
  }
  require(fd_spacing > 0.0, "difference spacing must be positive");

  LocalLimitResult<N> out;
  out.scaled_values.resize(s_list.size());
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    out.scaled_values[i] =
        (1.0 - s_list[i]) * eval_Ds<N>(f, x, fam, s_list[i], quad).value;
  }

  // Least-squares fit y = a + b z with z = 1 - s; a is the s -> 1 value.
  double sz = 0.0, szz = 0.0, sy = 0.0, szy = 0.0;
  const double m = static_cast<double>(s_list.size());
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    const double z = 1.0 - s_list[i];
    const double y = out.scaled_values[i];
    sz += z;
    szz += z * z;
    sy += y;
    szy += z * y;
  }
  const double denom = m * szz - sz * sz;
  require(denom > 0.0, "local limit orders must be distinct");
  const double b = (m * szy - sz * sy) / denom;
  out.extrapolated = (sy - b * sz) / m;

  // Centered-difference Hessian and the Lemma A.2 / A.3 references.
  const double h = fd_spacing;
  Mat<N> H;
  const double u0 = f.value(x);
  for (int i = 0; i < N; ++i) {
    const Vec<N> ei = h * Vec<N>::Unit(i);
    H(i, i) = (f.value(x + ei) + f.value(x - ei) - 2.0 * u0) / (h * h);
    for (int j = i + 1; j < N; ++j) {
      const Vec<N> ej = h * Vec<N>::Unit(j);
      const double mixed = (f.value(x + ei + ej) + f.value(x - ei - ej) -
                            f.value(x + ei - ej) - f.value(x - ei + ej)) /
                           (4.0 * h * h);
      H(i, j) = mixed;
      H(j, i) = mixed;
    }
  }
  const TraceMinimizer<N> tm = minimizing_matrix<N>(H);
  const double wn = sphere_area(N);
  if (tm.degenerate) {
    out.reference = 0.0;
    out.trace_reference = 0.0;
  } else {
    out.reference = 0.25 * wn * std::pow(H.determinant(), 1.0 / N);
    out.trace_reference =
        wn / (4.0 * N) * quadratic_trace<N>(tm.minimizer.matrix(), H);
  }
  return out;
}

template struct OperatorResult<2>;
template struct OperatorResult<3>;
template OperatorResult<2> eval_Ds<2>(const ScalarField<2>&, const Vec<2>&,
                                      const MatrixFamily<2>&, double,
                                      const QuadratureScheme&, LAReport*);
template OperatorResult<3> eval_Ds<3>(const ScalarField<3>&, const Vec<3>&,
                                      const MatrixFamily<3>&, double,
                                      const QuadratureScheme&, LAReport*);
template double pucci_extremal<2>(const ScalarField<2>&, const Vec<2>&, double,
                                  PucciSign, double, const QuadratureScheme&,
                                  int);
template double pucci_extremal<3>(const ScalarField<3>&, const Vec<3>&, double,
                                  PucciSign, double, const QuadratureScheme&,
                                  int);
template struct EllipticityReport<2>;
template struct EllipticityReport<3>;
template EllipticityReport<2> ellipticity_certificate<2>(
    const ScalarField<2>&, const std::vector<Vec<2>>&, const MatrixFamily<2>&,
    double, double, const QuadratureScheme&, double, double);
template EllipticityReport<3> ellipticity_certificate<3>(
    const ScalarField<3>&, const std::vector<Vec<3>>&, const MatrixFamily<3>&,
    double, double, const QuadratureScheme&, double, double);
template struct LocalLimitResult<2>;
template struct LocalLimitResult<3>;
template LocalLimitResult<2> local_limit<2>(const ScalarField<2>&,
                                            const Vec<2>&,
                                            const std::vector<double>&,
                                            const MatrixFamily<2>&,
                                            const QuadratureScheme&, double);
template LocalLimitResult<3> local_limit<3>(const ScalarField<3>&,
                                            const Vec<3>&,
                                            const std::vector<double>&,
                                            const MatrixFamily<3>&,
                                            const QuadratureScheme&, double);

}  // namespace fracma
