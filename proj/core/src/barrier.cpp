#include "fracma/barrier.hpp"

#include "fracma/parallel.hpp"
#include "fracma/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace fracma {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

const std::vector<std::array<double, 2>>& gl6() {
  static const std::vector<std::array<double, 2>> rule = gauss_legendre(6);
  return rule;
}

template <class F>
double panel_integral(double a, double b, const F& f) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (const auto& [x, w] : gl6()) sum += w * f(mid + half * x);
  return half * sum;
}

// Logarithmic panels over [a, b], panels_per_decade of them per decade.
template <class F>
double log_integral(double a, double b, int per_decade, const F& f) {
  if (!(b > a)) return 0.0;
  const double la = std::log(a);
  const double lb = std::log(b);
  const int panels =
      std::max(1, int(std::ceil((lb - la) / std::numbers::ln10 * per_decade)));
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double u0 = la + (lb - la) * p / panels;
    const double u1 = la + (lb - la) * (p + 1) / panels;
    sum += panel_integral(u0, u1,
                          [&](double u) { return std::exp(u) * f(std::exp(u)); });
  }
  return sum;
}

// Geometric bisection panels accumulating toward the kink of |rho - r|^{2s-1}
// at an endpoint: covers [a, b] grading toward b when toward_b, else toward
// a.  The innermost sliver is integrated as a final panel; at width
// |b - a| 2^{-levels} its own quadrature error is far below target.
template <class F>
double graded_integral(double a, double b, bool toward_b, int levels,
                       const F& f) {
  if (!(b > a)) return 0.0;
  double sum = 0.0;
  double width = b - a;
  for (int j = 0; j < levels; ++j) {
    const double next = width * 0.5;
    if (toward_b) {
      sum += panel_integral(b - width, b - next, f);
    } else {
      sum += panel_integral(a + next, a + width, f);
    }
    width = next;
  }
  sum += toward_b ? panel_integral(b - width, b, f)
                  : panel_integral(a, a + width, f);
  return sum;
}

// Angular factor of the sphere-reduced convolution: the measure of
// |x - rho w|^{2s-n} over directions w at |x| = r.
//
// n = 2: 4 Int_0^{pi/2} ((r-rho)^2 + 4 r rho sin^2 psi)^{s-1} dpsi, evaluated
// with the substitution psi = (pi/2) u^6 that flattens the near-singular
// layer at psi = 0 (the integrand there behaves like psi^{2s-2}).
double kernel_2d(double r, double rho, double s, int panels) {
  const double d2 = (r - rho) * (r - rho);
  const double a = 4.0 * r * rho;
  const double half_pi = 0.5 * std::numbers::pi;
  const auto g = [&](double u) {
    const double u2 = u * u;
    const double u4 = u2 * u2;
    const double psi = half_pi * u4 * u2;
    const double sn = std::sin(psi);
    return 6.0 * half_pi * u4 * u * std::pow(d2 + a * sn * sn, s - 1.0);
  };
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += panel_integral(double(p) / panels, double(p + 1) / panels, g);
  }
  return 4.0 * sum;
}

// n = 3: closed form 2 pi ((r+rho)^{2s-1} - |r-rho|^{2s-1}) / (r rho (2s-1)).
double kernel_3d(double r, double rho, double s) {
  const double a = 2.0 * s - 1.0;
  return 2.0 * std::numbers::pi *
         (std::pow(r + rho, a) - std::pow(std::abs(r - rho), a)) /
         (r * rho * a);
}

template <int N>
double kernel(double r, double rho, double s, int panels) {
  if constexpr (N == 2) {
    return kernel_2d(r, rho, s, panels);
  } else {
    (void)panels;
    return kernel_3d(r, rho, s);
  }
}

// I(r) = Int_0^inf g1(rho) K(r, rho) rho^{n-1} drho; w1(r) = C_F I(r).
template <int N>
double convolution_integral(double r, double s, double tau,
                            const BarrierOptions& opt) {
  const auto f = [&](double rho) {
    return barrier_source(rho, s, tau) * kernel<N>(r, rho, s, opt.theta_panels) *
           std::pow(rho, N - 1);
  };
  const double omega = sphere_area(N);
  const double rho_min = std::min(1e-4, 0.05 * r);
  // K(r, rho) -> omega r^{2s-N} as rho -> 0 and g1 = 1 there.
  double sum = omega * std::pow(r, 2.0 * s - N) * std::pow(rho_min, N) / N;
  sum += log_integral(rho_min, 0.5 * r, opt.rho_per_decade, f);
  sum += graded_integral(0.5 * r, r, true, opt.graded_levels, f);
  sum += graded_integral(r, 2.0 * r, false, opt.graded_levels, f);
  const double rho_tail = std::max(32.0 * r, 32.0);
  sum += log_integral(2.0 * r, rho_tail, opt.rho_per_decade, f);
  // Beyond rho_tail both factors are exact powers; the sphere average of
  // |x/rho - w|^{2s-N} expands as 1 + c2 (r/rho)^2 + O((r/rho)^4).
  const double p = 2.0 * s - N;
  const double c2 = 0.5 * p + p * (p - 2.0) / (2.0 * N);
  sum += omega * (std::pow(rho_tail, -tau) / tau +
                  c2 * r * r * std::pow(rho_tail, -2.0 - tau) / (2.0 + tau));
  return sum;
}

template <int N>
std::vector<Vec<N>> ray_directions();

template <>
std::vector<Vec<2>> ray_directions<2>() {
  std::vector<Vec<2>> dirs;
  for (int k = 0; k < 8; ++k) {
    const double a = k * std::numbers::pi / 8.0;
    dirs.push_back(Vec<2>(std::cos(a), std::sin(a)));
  }
  return dirs;
}

template <>
std::vector<Vec<3>> ray_directions<3>() {
  std::vector<Vec<3>> dirs;
  for (int d = 0; d < 3; ++d) dirs.push_back(Vec<3>::Unit(d));
  const double q = 1.0 / std::numbers::sqrt2;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (double sb : {+1.0, -1.0}) {
        Vec<3> v = Vec<3>::Zero();
        v[a] = q;
        v[b] = sb * q;
        dirs.push_back(v);
      }
    }
  }
  const double c = 1.0 / std::sqrt(3.0);
  for (double sy : {+1.0, -1.0}) {
    for (double sz : {+1.0, -1.0}) {
      dirs.push_back(Vec<3>(c, sy * c, sz * c));
    }
  }
  return dirs;
}

}  // namespace

double barrier_source(double rho, double s, double tau) {
  if (rho <= 1.0) return 1.0;
  return std::pow(rho, -(2.0 * s + tau));
}

// ---------------------------------------------------------------------------
// RadialProfile: Fritsch-Carlson monotone cubic in log r.

RadialProfile::RadialProfile(double center_value, std::vector<double> radii,
                             std::vector<double> values,
                             double center_exponent, double tail_exponent)
    : center_(center_value),
      center_exponent_(center_exponent),
      tail_exponent_(tail_exponent),
      r_(std::move(radii)),
      v_(std::move(values)) {
  require(r_.size() >= 2 && r_.size() == v_.size(),
          "RadialProfile: need at least two aligned knots");
  require(center_exponent_ > 0.0 && tail_exponent_ > 0.0,
          "RadialProfile: continuation exponents must be positive");
  xi_.resize(r_.size());
  for (std::size_t i = 0; i < r_.size(); ++i) {
    require(r_[i] > 0.0 && (i == 0 || r_[i] > r_[i - 1]),
            "RadialProfile: radii must be positive and increasing");
    xi_[i] = std::log(r_[i]);
  }
  const std::size_t m = r_.size();
  std::vector<double> secant(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    secant[i] = (v_[i + 1] - v_[i]) / (xi_[i + 1] - xi_[i]);
  }
  slope_.resize(m);
  slope_[0] = secant[0];
  slope_[m - 1] = secant[m - 2];
  for (std::size_t i = 1; i + 1 < m; ++i) {
    slope_[i] = (secant[i - 1] * secant[i] <= 0.0)
                    ? 0.0
                    : 0.5 * (secant[i - 1] + secant[i]);
  }
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (secant[i] == 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double a = slope_[i] / secant[i];
    const double b = slope_[i + 1] / secant[i];
    const double n2 = a * a + b * b;
    if (n2 > 9.0) {
      const double t = 3.0 / std::sqrt(n2);
      slope_[i] = t * a * secant[i];
      slope_[i + 1] = t * b * secant[i];
    }
  }
}

double RadialProfile::value(double r) const {
  if (r <= 0.0) return center_;
  if (r <= r_.front()) {
    return center_ +
           (v_.front() - center_) * std::pow(r / r_.front(), center_exponent_);
  }
  if (r >= r_.back()) {
    return v_.back() * std::pow(r / r_.back(), -tail_exponent_);
  }
  const double xi = std::log(r);
  const auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
  const std::size_t k = std::size_t(it - xi_.begin()) - 1;
  const double h = xi_[k + 1] - xi_[k];
  const double t = (xi - xi_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return v_[k] * (2.0 * t3 - 3.0 * t2 + 1.0) +
         slope_[k] * h * (t3 - 2.0 * t2 + t) + v_[k + 1] * (3.0 * t2 - 2.0 * t3) +
         slope_[k + 1] * h * (t3 - t2);
}

// ---------------------------------------------------------------------------
// RadialPotentialField.

namespace {

std::vector<RadialTerm> potential_terms(const RadialProfile& profile,
                                        double scale, double tau) {
  double amp = 0.0;
  for (std::size_t i = 0; i < profile.radii().size(); ++i) {
    const double r = profile.radii()[i];
    if (r < 1.0) continue;
    amp = std::max(amp, profile.values()[i] * std::pow(r, tau));
  }
  RadialTerm term;
  term.kind = RadialTerm::Kind::power_law;
  term.amplitude = std::abs(scale) * amp;
  term.exponent = tau;
  return {term};
}

}  // namespace

template <int N>
RadialPotentialField<N>::RadialPotentialField(
    std::shared_ptr<const RadialProfile> profile, double scale, double tau)
    : profile_(std::move(profile)),
      scale_(scale),
      model_(Mat<N>::Zero(), potential_terms(*profile_, scale, tau)) {}

template <int N>
double RadialPotentialField<N>::value(const Vec<N>& x) const {
  return scale_ * profile_->value(x.norm());
}

// ---------------------------------------------------------------------------
// build_barrier.

template <int N>
Barrier<N> build_barrier(std::shared_ptr<const ScalarField<N>> phi, double s,
                         double tau, const QuadratureScheme& quad,
                         const BarrierOptions& opt) {
  require(phi != nullptr, "build_barrier: phi must be set");
  require(s > 0.5 && s < 1.0, "build_barrier: s must lie in (1/2, 1)");
  const double tau_cap = std::min(2.0 * s - 1.0, N - 2.0 * s);
  require(tau > 0.0 && tau < tau_cap,
          "build_barrier: tau must lie in (0, min{2s-1, n-2s})");
  require(opt.profile_min_radius > 0.0 &&
              opt.profile_max_radius > opt.profile_min_radius &&
              opt.profile_per_decade >= 4,
          "build_barrier: malformed profile options");
  require(opt.ray_min > 0.0 && opt.ray_max > std::max(opt.ray_min, opt.envelope_min) &&
              opt.ray_samples >= 4,
          "build_barrier: malformed ray options");

  // Tabulate w1 = u_F * g1 on a log grid.
  const double decades = std::log10(opt.profile_max_radius / opt.profile_min_radius);
  const int knots = int(std::ceil(decades * opt.profile_per_decade)) + 1;
  std::vector<double> radii(knots);
  std::vector<double> values(knots);
  for (int i = 0; i < knots; ++i) {
    radii[i] = opt.profile_min_radius *
               std::pow(opt.profile_max_radius / opt.profile_min_radius,
                        double(i) / (knots - 1));
  }
  const double cf = riesz_constant(N, s);
  parallel_for(knots, [&](std::int64_t i) {
    values[i] = cf * convolution_integral<N>(radii[i], s, tau, opt);
  });

  Barrier<N> barrier;
  barrier.tau = tau;
  barrier.w1_center = cf * sphere_area(N) * (0.5 / s + 1.0 / tau);
  auto profile = std::make_shared<RadialProfile>(
      barrier.w1_center, std::move(radii), std::move(values), 2.0 * s, tau);
  barrier.w1 = std::make_shared<RadialPotentialField<N>>(profile, 1.0, tau);

  // Decay envelope A0 min{1, r^-tau} <= w1 <= A1 min{1, r^-tau} and the
  // log-log slope on the far range.
  const auto envelope = [&](double r) {
    return profile->value(r) / std::min(1.0, std::pow(r, -tau));
  };
  barrier.measured_A0 = std::numeric_limits<double>::infinity();
  std::vector<double> sample_r(opt.ray_samples);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int fit_count = 0;
  for (int i = 0; i < opt.ray_samples; ++i) {
    const double r = opt.ray_min * std::pow(opt.ray_max / opt.ray_min,
                                            double(i) / (opt.ray_samples - 1));
    sample_r[i] = r;
    const double ratio = envelope(r);
    barrier.measured_A0 = std::min(barrier.measured_A0, ratio);
    barrier.measured_A1 = std::max(barrier.measured_A1, ratio);
    if (r >= opt.envelope_min) {
      const double lx = std::log(r);
      const double ly = std::log(profile->value(r));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++fit_count;
    }
  }
  if (!(barrier.measured_A0 > 0.0)) {
    throw std::runtime_error("build_barrier: potential is not positive on rays");
  }
  if (fit_count >= 2) {
    barrier.envelope_exponent =
        -(fit_count * sxy - sx * sy) / (fit_count * sxx - sx * sx);
  }

  // Source bound C: sup of -(-Delta)^s phi over the rays, normalized by the
  // cone's decay profile min{1, r^{1-2s}}.
  const double cns = cns_constant(N, s);
  const std::vector<Vec<N>> dirs = ray_directions<N>();
  std::vector<double> source(dirs.size() * sample_r.size());
  parallel_for(std::int64_t(source.size()), [&](std::int64_t idx) {
    const Vec<N> x = sample_r[idx % sample_r.size()] * dirs[idx / sample_r.size()];
    source[idx] = cns * eval_LA<N>(*phi, x, Mat<N>::Identity(), s, quad);
  });
  barrier.measured_C = 0.0;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    for (std::size_t i = 0; i < sample_r.size(); ++i) {
      const double profile_r = std::min(1.0, std::pow(sample_r[i], 1.0 - 2.0 * s));
      barrier.measured_C =
          std::max(barrier.measured_C, source[d * sample_r.size() + i] / profile_r);
    }
  }

  // Smallest power-of-two dilation with
  //   c_{n,s} M A0 min{1, r^-tau} >= C min{1, r^{1-2s}}   on the samples.
  double m_req = 1.0;
  for (double r : sample_r) {
    const double need = barrier.measured_C * std::min(1.0, std::pow(r, 1.0 - 2.0 * s)) /
                        (cns * barrier.measured_A0 * std::min(1.0, std::pow(r, -tau)));
    m_req = std::max(m_req, need);
  }
  barrier.M = std::exp2(std::ceil(std::log2(m_req)));
  if (!(barrier.M <= opt.dilation_cap)) {
    throw std::runtime_error(
        "build_barrier: dilation exceeds the cap; phi or tau is misconfigured");
  }

  barrier.w = std::make_shared<RadialPotentialField<N>>(profile, barrier.M, tau);
  barrier.ubar = std::make_shared<LinearCombinationField<N>>(
      std::vector<typename LinearCombinationField<N>::Term>{
          {1.0, phi}, {barrier.M, barrier.w1}});
  return barrier;
}

template class RadialPotentialField<2>;
template class RadialPotentialField<3>;
template Barrier<2> build_barrier<2>(std::shared_ptr<const ScalarField<2>>,
                                     double, double, const QuadratureScheme&,
                                     const BarrierOptions&);
template Barrier<3> build_barrier<3>(std::shared_ptr<const ScalarField<3>>,
                                     double, double, const QuadratureScheme&,
                                     const BarrierOptions&);

}  // namespace fracma
