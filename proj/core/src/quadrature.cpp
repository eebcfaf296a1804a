#include "fracma/quadrature.hpp"

#include "fracma/far_field.hpp"
#include "fracma/special.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace fracma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

const std::vector<std::array<double, 2>>& gl4() {
  static const std::vector<std::array<double, 2>> rule = gauss_legendre(4);
  return rule;
}

// ---------------------------------------------------------------------------
// Angular sets.  Directions cover a half sphere (the delta form already folds
// y <-> -y), weights sum to the full sphere area omega_{n-1}.

template <int N>
struct AngularSet {
  std::vector<Vec<N>> dir;
  std::vector<double> weight;
};

template <int N>
AngularSet<N> build_angular(int m);

template <>
AngularSet<2> build_angular<2>(int m) {
  AngularSet<2> set;
  set.dir.reserve(m);
  set.weight.assign(m, 2.0 * std::numbers::pi / m);
  for (int j = 0; j < m; ++j) {
    const double psi = (j + 0.5) * std::numbers::pi / m;
    set.dir.push_back(Vec<2>(std::cos(psi), std::sin(psi)));
  }
  return set;
}

template <>
AngularSet<3> build_angular<3>(int m) {
  AngularSet<3> set;
  const auto polar = gauss_legendre(m);
  const int n_azim = 2 * m;
  const double dphi = 2.0 * std::numbers::pi / n_azim;
  set.dir.reserve(std::size_t(m) * n_azim);
  set.weight.reserve(std::size_t(m) * n_azim);
  for (const auto& [xg, wg] : polar) {
    const double c = 0.5 * (xg + 1.0);  // cos(theta) on the upper hemisphere
    const double rho = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int i = 0; i < n_azim; ++i) {
      const double phi = (i + 0.5) * dphi;
      set.dir.push_back(Vec<3>(rho * std::cos(phi), rho * std::sin(phi), c));
      set.weight.push_back(wg * dphi);  // 2 * (0.5 wg) covers both hemispheres
    }
  }
  return set;
}

template <int N>
const AngularSet<N>& angular_set(int m) {
  require(m >= 1, "quadrature needs at least one angular node");
  thread_local std::map<int, AngularSet<N>> cache;
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, build_angular<N>(m)).first;
  return it->second;
}

// ---------------------------------------------------------------------------
// Radial rules in the t parametrization.  Weights absorb the kernel t^{-1-2s}
// so that Int_lo^hi f(t) t^{-1-2s} dt ~= Sum_q w[q] f(t[q]).

struct RadialRule {
  std::vector<double> t_mid, w_mid;    // (inner_radius, switch_radius)
  std::vector<double> t_tail, w_tail;  // (switch_radius, closure_radius)
  double inner_radius = 0.0;
  double inner_coef = 0.0;    // t_i^{-2s} / (2 - 2s): Taylor proxy weight
  double closure_cone = 0.0;  // Int_cl^inf t^{-2s} dt = t_cl^{1-2s}/(2s-1)
  double closure_mass = 0.0;  // Int_cl^inf t^{-1-2s} dt = t_cl^{-2s}/(2s)
};

void fill_log_panels(double lo, double hi, int per_decade, double s,
                     std::vector<double>& t, std::vector<double>& w) {
  t.clear();
  w.clear();
  if (!(hi > lo)) return;
  const double v_lo = std::log(lo);
  const double v_hi = std::log(hi);
  const double decades = (v_hi - v_lo) / std::numbers::ln10;
  const int panels = std::max(1, int(std::ceil(decades * per_decade)));
  const double dv = (v_hi - v_lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = v_lo + p * dv;
    for (const auto& [xg, wg] : gl4()) {
      const double v = a + 0.5 * dv * (xg + 1.0);
      t.push_back(std::exp(v));
      w.push_back(0.5 * dv * wg * std::exp(-2.0 * s * v));
    }
  }
}

const RadialRule& radial_rule(double s, const QuadratureScheme& q) {
  using Key = std::tuple<double, double, double, double, int>;
  thread_local std::map<Key, RadialRule> cache;
  const Key key{s, q.inner_radius, q.switch_radius, q.closure_radius,
                q.radial_per_decade};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 4096) cache.clear();
  RadialRule r;
  r.inner_radius = q.inner_radius;
  r.inner_coef = std::pow(q.inner_radius, -2.0 * s) / (2.0 - 2.0 * s);
  r.closure_cone = std::pow(q.closure_radius, 1.0 - 2.0 * s) / (2.0 * s - 1.0);
  r.closure_mass = std::pow(q.closure_radius, -2.0 * s) / (2.0 * s);
  fill_log_panels(q.inner_radius, q.switch_radius, q.radial_per_decade, s,
                  r.t_mid, r.w_mid);
  fill_log_panels(q.switch_radius, q.closure_radius, q.radial_per_decade, s,
                  r.t_tail, r.w_tail);
  return cache.emplace(key, std::move(r)).first->second;
}

// ---------------------------------------------------------------------------
// Zone walkers shared by eval_LA, freeze_LA and eval_LA_frozen so the frozen
// split reproduces the direct evaluation arithmetic.

// Field-value zones [0, switch_radius]: inner Taylor proxy plus log panels.
// point_value(p) supplies the integrand samples; returns the quadrature of
// Int (u(x+y) + u(x-y)) K dy; *pair_mass collects the coefficient of 2 u(x).
template <int N, class PointValue>
double sum_pairs(const Vec<N>& x, const Mat<N>& A, double det_A,
                 const AngularSet<N>& ang, const RadialRule& rule,
                 const PointValue& point_value, double* pair_mass) {
  double sum = 0.0;
  double mass = 0.0;
  const std::size_t n_dir = ang.dir.size();
  for (std::size_t e = 0; e < n_dir; ++e) {
    const Vec<N> u = A * ang.dir[e];
    const double we = 0.5 * det_A * ang.weight[e];
    const Vec<N> yi = rule.inner_radius * u;
    double dir_sum = rule.inner_coef * (point_value(x + yi) + point_value(x - yi));
    double dir_mass = 2.0 * rule.inner_coef;
    for (std::size_t q = 0; q < rule.t_mid.size(); ++q) {
      const Vec<N> y = rule.t_mid[q] * u;
      dir_sum += rule.w_mid[q] * (point_value(x + y) + point_value(x - y));
      dir_mass += 2.0 * rule.w_mid[q];
    }
    sum += we * dir_sum;
    mass += we * dir_mass;
  }
  *pair_mass = mass;
  return sum;
}

// Analytic zones [switch_radius, infinity): the far model's cone + affine on
// log panels up to closure_radius, then the exact power-law closure.  The
// perturbation eta is omitted here and accounted for in LAReport.
template <int N>
double tail_closure(const Vec<N>& x, const Mat<N>& A, double det_A,
                    const AngularSet<N>& ang, const RadialRule& rule,
                    const FarFieldModel<N>& far, double* tail_mass) {
  double sum = 0.0;
  double mass = 0.0;
  const double affine_x = far.affine_part(x);
  const std::size_t n_dir = ang.dir.size();
  for (std::size_t e = 0; e < n_dir; ++e) {
    const Vec<N> u = A * ang.dir[e];
    const double we = 0.5 * det_A * ang.weight[e];
    double dir_sum = 0.0;
    double dir_mass = 0.0;
    for (std::size_t q = 0; q < rule.t_tail.size(); ++q) {
      const Vec<N> y = rule.t_tail[q] * u;
      dir_sum += rule.w_tail[q] *
                 (far.cone_at(x + y) + far.cone_at(x - y) + 2.0 * affine_x);
      dir_mass += 2.0 * rule.w_tail[q];
    }
    sum += we * (dir_sum + 2.0 * (far.cone(u) * rule.closure_cone +
                                  affine_x * rule.closure_mass));
    mass += we * (dir_mass + 2.0 * rule.closure_mass);
  }
  *tail_mass = mass;
  return sum;
}

}  // namespace

// ---------------------------------------------------------------------------

void QuadratureScheme::validate() const {
  require(std::isfinite(inner_radius) && inner_radius > 0.0,
          "inner_radius must be positive");
  require(std::isfinite(switch_radius) && switch_radius > inner_radius,
          "switch_radius must exceed inner_radius");
  require(std::isfinite(closure_radius) && closure_radius > switch_radius,
          "closure_radius must exceed switch_radius");
  require(radial_per_decade >= 1, "radial_per_decade must be at least 1");
  require(angular >= 1, "angular node count must be at least 1");
}

QuadratureScheme QuadratureScheme::refined(int factor) const {
  require(factor >= 1, "refinement factor must be at least 1");
  QuadratureScheme q = *this;
  q.inner_radius /= factor;
  q.radial_per_decade *= factor;
  q.angular *= factor;
  return q;
}

std::vector<std::array<double, 2>> gauss_legendre(int m) {
  require(m >= 1, "Gauss-Legendre rule needs at least one node");
  std::vector<std::array<double, 2>> rule(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on the three-term recurrence.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // One clean-up iteration to polish p1 and dp at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule[i] = {-x, w};
    rule[m - 1 - i] = {x, w};
  }
  if (m % 2 == 1) rule[m / 2] = {0.0, rule[m / 2][1]};
  return rule;
}

namespace {

template <int N>
void validate_eval_point(const ScalarField<N>& f, const Vec<N>& x) {
  require(x.allFinite(), "evaluation point must be finite");
  if (const GridBox<N>* box = f.domain_box()) {
    require(box->contains(x), "evaluation point lies outside the grid box");
  }
}

template <int N>
double checked_det(const Mat<N>& A) {
  const double scale = A.template lpNorm<Eigen::Infinity>();
  require((A - A.transpose()).template lpNorm<Eigen::Infinity>() <=
              1e-12 * std::max(1.0, scale),
          "eval_LA requires a symmetric matrix");
  const double det_A = A.determinant();
  require(det_A > 0.0 && A.diagonal().minCoeff() > 0.0,
          "eval_LA requires a positive definite matrix");
  return det_A;
}

// Decaying-perturbation contribution of one direction past t_sw:
//   2 Int_sw^inf |eta(|x +- t A e|)| t^{-1-2s} dt
// bounded through |x + t A e| >= t sigma - |x| >= kappa t sigma for t >= t_sw.
double perturbation_tail_bound(double a, double eps, double x_norm,
                               double sigma, double t_sw, double s) {
  if (a <= 0.0) return 0.0;
  const double reach = t_sw * sigma - x_norm;
  if (eps > 0.0 && reach >= 1.0) {
    const double kappa = 1.0 - x_norm / (t_sw * sigma);
    return 2.0 * a * std::pow(sigma * kappa, -eps) *
           std::pow(t_sw, -2.0 * s - eps) / (2.0 * s + eps);
  }
  // Fall back on |eta| <= a when the guard radius is not yet past 1.
  return 2.0 * a * std::pow(t_sw, -2.0 * s) / (2.0 * s);
}

template <int N>
double tail_estimate(const Vec<N>& x, const Mat<N>& A, double det_A,
                     const AngularSet<N>& ang, const QuadratureScheme& quad,
                     double s, const FarFieldModel<N>& far) {
  double est = 0.0;
  const double a = far.amplitude_bound();
  const double eps = far.decay_rate();
  const double lam_min = far.cone_lambda_min();
  const double lam_max = far.cone_lambda_max();
  const double dist = (x - far.cone_center()).norm();
  double curvature = 0.0;
  if (lam_max > 0.0 && dist > 0.0) {
    const double lm = std::max(lam_min, 1e-300);
    curvature = lam_max / std::sqrt(lm) * (1.0 + lam_max / lm);
  }
  for (std::size_t e = 0; e < ang.dir.size(); ++e) {
    const double sigma = (A * ang.dir[e]).norm();
    const double we = 0.5 * det_A * ang.weight[e];
    est += we * perturbation_tail_bound(a, eps, x.norm(), sigma,
                                        quad.switch_radius, s);
    if (curvature > 0.0) {
      // delta of the cone at distance >= t sigma - dist; integrate t > t_cl.
      const double guard =
          std::max(quad.closure_radius * sigma - dist,
                   0.5 * quad.closure_radius * sigma);
      est += we * 2.0 * dist * dist * curvature / guard *
             std::pow(quad.closure_radius, -2.0 * s) / (2.0 * s);
    }
  }
  return est;
}

template <int N, class PointValue>
double inner_estimate(const Vec<N>& x, const Mat<N>& A, double det_A,
                      const AngularSet<N>& ang, const RadialRule& rule,
                      double s, double u0, const PointValue& point_value) {
  const double ti = rule.inner_radius;
  const double th = 0.5 * ti;
  const double coef_h = std::pow(th, -2.0 * s) / (2.0 - 2.0 * s);
  const double dv = std::numbers::ln2;  // log panel [ln th, ln ti]
  double est = 0.0;
  for (std::size_t e = 0; e < ang.dir.size(); ++e) {
    const Vec<N> u = A * ang.dir[e];
    const double we = 0.5 * det_A * ang.weight[e];
    const auto delta = [&](double t) {
      const Vec<N> y = t * u;
      return point_value(x + y) + point_value(x - y) - 2.0 * u0;
    };
    const double proxy = rule.inner_coef * delta(ti);
    double refined = coef_h * delta(th);
    for (const auto& [xg, wg] : gl4()) {
      const double v = std::log(th) + 0.5 * dv * (xg + 1.0);
      refined += 0.5 * dv * wg * std::exp(-2.0 * s * v) * delta(std::exp(v));
    }
    est += we * std::abs(proxy - refined);
  }
  return est;
}

}  // namespace

template <int N>
double eval_LA(const ScalarField<N>& f, const Vec<N>& x, const Mat<N>& A,
               double s, const QuadratureScheme& quad, LAReport* report) {
  quad.validate();
  require(s > 0.5 && s < 1.0, "order s must lie in (1/2, 1)");
  validate_eval_point(f, x);
  const double det_A = checked_det<N>(A);
  const AngularSet<N>& ang = angular_set<N>(quad.angular);
  const RadialRule& rule = radial_rule(s, quad);
  const FarFieldModel<N>& far = f.far_model();
  const double u0 = f.value(x);
  const auto point_value = [&f](const Vec<N>& p) { return f.value(p); };
  double pair_mass = 0.0;
  double tail_mass = 0.0;
  const double pairs = sum_pairs(x, A, det_A, ang, rule, point_value, &pair_mass);
  const double tails = tail_closure(x, A, det_A, ang, rule, far, &tail_mass);
  const double value = pairs + tails - (pair_mass + tail_mass) * u0;
  if (!std::isfinite(value)) {
    throw std::runtime_error("eval_LA produced a non-finite value");
  }
  if (report) {
    report->diag_mass = pair_mass + tail_mass;
    report->tail_estimate = tail_estimate(x, A, det_A, ang, quad, s, far);
    report->inner_estimate =
        inner_estimate(x, A, det_A, ang, rule, s, u0, point_value);
  }
  return value;
}

template <int N>
double eval_frac_lap_1d(const ScalarField<N>& f, const Vec<N>& x,
                        const Vec<N>& e, double s,
                        const QuadratureScheme& quad, LAReport* report) {
  quad.validate();
  require(s > 0.5 && s < 1.0, "order s must lie in (1/2, 1)");
  require(std::abs(e.norm() - 1.0) <= 1e-12, "direction must be a unit vector");
  validate_eval_point(f, x);
  const RadialRule& rule = radial_rule(s, quad);
  const FarFieldModel<N>& far = f.far_model();
  const double u0 = f.value(x);
  const double affine_x = far.affine_part(x);
  const Vec<N> yi = rule.inner_radius * e;
  double value = rule.inner_coef *
                 (f.value(x + yi) + f.value(x - yi) - 2.0 * u0);
  double mass = 2.0 * rule.inner_coef;
  for (std::size_t q = 0; q < rule.t_mid.size(); ++q) {
    const Vec<N> y = rule.t_mid[q] * e;
    value += rule.w_mid[q] * (f.value(x + y) + f.value(x - y) - 2.0 * u0);
    mass += 2.0 * rule.w_mid[q];
  }
  for (std::size_t q = 0; q < rule.t_tail.size(); ++q) {
    const Vec<N> y = rule.t_tail[q] * e;
    value += rule.w_tail[q] * (far.cone_at(x + y) + far.cone_at(x - y) +
                               2.0 * (affine_x - u0));
    mass += 2.0 * rule.w_tail[q];
  }
  value += 2.0 * (far.cone(e) * rule.closure_cone +
                  (affine_x - u0) * rule.closure_mass);
  mass += 2.0 * rule.closure_mass;
  if (!std::isfinite(value)) {
    throw std::runtime_error("eval_frac_lap_1d produced a non-finite value");
  }
  if (report) {
    report->diag_mass = mass;
    report->tail_estimate = perturbation_tail_bound(
        far.amplitude_bound(), far.decay_rate(), x.norm(), 1.0,
        quad.switch_radius, s);
    const double ti = rule.inner_radius;
    const double th = 0.5 * ti;
    const auto delta = [&](double t) {
      const Vec<N> y = t * e;
      return f.value(x + y) + f.value(x - y) - 2.0 * u0;
    };
    const double proxy = rule.inner_coef * delta(ti);
    double refined = std::pow(th, -2.0 * s) / (2.0 - 2.0 * s) * delta(th);
    for (const auto& [xg, wg] : gl4()) {
      const double v = std::log(th) + 0.5 * std::numbers::ln2 * (xg + 1.0);
      refined += 0.5 * std::numbers::ln2 * wg * std::exp(-2.0 * s * v) *
                 delta(std::exp(v));
    }
    report->inner_estimate = std::abs(proxy - refined);
  }
  return value;
}

namespace {

// Pair walk restricted to the grid box.  Offsets vanish outside it, so once
// t |A e|_inf exceeds box_radius + |x|_inf both probes are outside and every
// remaining term of the radial walk is an exact zero; stopping there changes
// nothing.  point_value(p) supplies the (compactly supported) samples.
template <int N, class PointValue>
double sum_pairs_capped(const GridBox<N>& box, const Vec<N>& x,
                        const Mat<N>& A, const AngularSet<N>& ang,
                        const RadialRule& rule, const PointValue& point_value) {
  const double det_A = A.determinant();
  const double reach =
      box.radius * (1.0 + 1e-12) + x.template lpNorm<Eigen::Infinity>();
  double pairs = 0.0;
  for (std::size_t e = 0; e < ang.dir.size(); ++e) {
    const Vec<N> u = A * ang.dir[e];
    const double t_stop = reach / u.template lpNorm<Eigen::Infinity>();
    double dir_sum = 0.0;
    if (rule.inner_radius <= t_stop) {
      const Vec<N> yi = rule.inner_radius * u;
      dir_sum += rule.inner_coef * (point_value(x + yi) + point_value(x - yi));
    }
    for (std::size_t q = 0; q < rule.t_mid.size(); ++q) {
      if (rule.t_mid[q] > t_stop) break;
      const Vec<N> y = rule.t_mid[q] * u;
      dir_sum += rule.w_mid[q] * (point_value(x + y) + point_value(x - y));
    }
    pairs += 0.5 * det_A * ang.weight[e] * dir_sum;
  }
  return pairs;
}

template <int N>
std::int64_t nearest_node(const GridBox<N>& box, const Vec<N>& x) {
  std::array<int, N> idx{};
  const double h = box.spacing();
  for (int d = 0; d < N; ++d) {
    const auto i = static_cast<int>(std::llround((x[d] + box.radius) / h));
    idx[d] = std::clamp(i, 0, box.nodes_per_side - 1);
  }
  return box.flatten(idx);
}

}  // namespace

template <int N>
FrozenLA freeze_LA(const GridFunction<N>& g, const Vec<N>& x, const Mat<N>& A,
                   double s, const QuadratureScheme& quad) {
  quad.validate();
  require(s > 0.5 && s < 1.0, "order s must lie in (1/2, 1)");
  validate_eval_point(g, x);
  const double det_A = checked_det<N>(A);
  const AngularSet<N>& ang = angular_set<N>(quad.angular);
  const RadialRule& rule = radial_rule(s, quad);
  const ScalarField<N>& base = g.base();
  const auto point_value = [&base](const Vec<N>& p) { return base.value(p); };
  double pair_mass = 0.0;
  double tail_mass = 0.0;
  const double pairs = sum_pairs(x, A, det_A, ang, rule, point_value, &pair_mass);
  const double tails =
      tail_closure(x, A, det_A, ang, rule, g.far_model(), &tail_mass);
  FrozenLA frozen;
  frozen.mass = pair_mass + tail_mass;
  frozen.base_value = pairs + tails - frozen.mass * base.value(x);
  const std::int64_t center = nearest_node(g.box(), x);
  frozen.self_mass =
      sum_pairs_capped(g.box(), x, A, ang, rule, [&](const Vec<N>& p) {
        return g.node_weight_at(p, center);
      });
  if (!std::isfinite(frozen.base_value) || !std::isfinite(frozen.mass) ||
      !std::isfinite(frozen.self_mass)) {
    throw std::runtime_error("freeze_LA produced a non-finite value");
  }
  return frozen;
}

template <int N>
double eval_LA_frozen(const GridFunction<N>& g, const Vec<N>& x,
                      const Mat<N>& A, double s, const QuadratureScheme& quad,
                      const FrozenLA& frozen) {
  const AngularSet<N>& ang = angular_set<N>(quad.angular);
  const RadialRule& rule = radial_rule(s, quad);
  const double pairs =
      sum_pairs_capped(g.box(), x, A, ang, rule,
                       [&](const Vec<N>& p) { return g.offset_at(p); });
  return frozen.base_value + pairs - frozen.mass * g.offset_at(x);
}

// ---------------------------------------------------------------------------
// Sphere kernel integral.

namespace {

double sphere_kernel_direct(const std::vector<double>& eps, double s) {
  const int k = int(eps.size());
  const double p = -0.5 * (k + 2.0 * s);
  if (k == 2) {
    const int m = 4096;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      const double th = (i + 0.5) * (2.0 * std::numbers::pi / m);
      const double c = std::cos(th);
      const double sn = std::sin(th);
      sum += std::pow(eps[0] * eps[0] * c * c + eps[1] * eps[1] * sn * sn, p);
    }
    return sum * (2.0 * std::numbers::pi / m);
  }
  const auto polar = gauss_legendre(96);
  const int n_azim = 192;
  const double dphi = 2.0 * std::numbers::pi / n_azim;
  double sum = 0.0;
  for (const auto& [xg, wg] : polar) {
    const double c = xg;  // cos(theta) over the full range [-1, 1]
    const double rho2 = std::max(0.0, 1.0 - c * c);
    double ring = 0.0;
    for (int i = 0; i < n_azim; ++i) {
      const double phi = (i + 0.5) * dphi;
      const double cp = std::cos(phi);
      const double sp = std::sin(phi);
      ring += std::pow(eps[0] * eps[0] * rho2 * cp * cp +
                           eps[1] * eps[1] * rho2 * sp * sp +
                           eps[2] * eps[2] * c * c,
                       p);
    }
    sum += wg * ring * dphi;
  }
  return sum;
}

double sphere_kernel_identity(const std::vector<double>& eps, double s) {
  const int k = int(eps.size());
  const double a = 0.5 * (k + 2.0 * s);
  const double v_lo = -60.0 / a;
  const double v_hi = 40.0 / (1.0 - s);
  const int panels = std::max(1, int(std::ceil(3.0 * (v_hi - v_lo))));
  const double dv = (v_hi - v_lo) / panels;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double ji = 0.0;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double v0 = v_lo + pnl * dv;
      for (const auto& [xg, wg] : gl4()) {
        const double v = v0 + 0.5 * dv * (xg + 1.0);
        const double t = std::exp(v);
        double denom_log = 0.0;
        for (int j = 0; j < k; ++j) {
          denom_log += 0.5 * std::log(eps[i] * eps[i] + eps[j] * eps[j] * t);
        }
        ji += 0.5 * dv * wg *
              std::exp(a * v - denom_log - std::log1p(t));
      }
    }
    total += std::pow(eps[i], -2.0 * s) * ji;
  }
  const double pref = std::pow(std::numbers::pi, 0.5 * k) /
                      (gamma_fn(1.0 - s) * gamma_fn(a));
  return pref * total;
}

}  // namespace

double sphere_kernel_integral(const std::vector<double>& eps, double s,
                              SphereKernelMethod method) {
  const int k = int(eps.size());
  require(k == 2 || k == 3, "sphere kernel integral expects 2 or 3 axes");
  require(s > 0.5 && s < 1.0, "order s must lie in (1/2, 1)");
  for (double e : eps) {
    require(std::isfinite(e) && e > 0.0, "axis scales must be positive");
  }
  return method == SphereKernelMethod::direct ? sphere_kernel_direct(eps, s)
                                              : sphere_kernel_identity(eps, s);
}

template double eval_LA<2>(const ScalarField<2>&, const Vec<2>&, const Mat<2>&,
                           double, const QuadratureScheme&, LAReport*);
template double eval_LA<3>(const ScalarField<3>&, const Vec<3>&, const Mat<3>&,
                           double, const QuadratureScheme&, LAReport*);
template double eval_frac_lap_1d<2>(const ScalarField<2>&, const Vec<2>&,
                                    const Vec<2>&, double,
                                    const QuadratureScheme&, LAReport*);
template double eval_frac_lap_1d<3>(const ScalarField<3>&, const Vec<3>&,
                                    const Vec<3>&, double,
                                    const QuadratureScheme&, LAReport*);
template FrozenLA freeze_LA<2>(const GridFunction<2>&, const Vec<2>&,
                               const Mat<2>&, double, const QuadratureScheme&);
template FrozenLA freeze_LA<3>(const GridFunction<3>&, const Vec<3>&,
                               const Mat<3>&, double, const QuadratureScheme&);
template double eval_LA_frozen<2>(const GridFunction<2>&, const Vec<2>&,
                                  const Mat<2>&, double,
                                  const QuadratureScheme&, const FrozenLA&);
template double eval_LA_frozen<3>(const GridFunction<3>&, const Vec<3>&,
                                  const Mat<3>&, double,
                                  const QuadratureScheme&, const FrozenLA&);

}  // namespace fracma
