#pragma once

#include "fracma/field.hpp"
#include "fracma/quadrature.hpp"

#include <memory>
#include <vector>

namespace fracma {

// Radial function tabulated on a logarithmic grid with monotone cubic
// (Fritsch-Carlson) interpolation in log r.  Below the first knot the value
// blends toward the stored center value with the r^{2s}-type profile of a
// fractional potential; beyond the last knot it continues as the pure power
// law value(r_max) (r / r_max)^{-tail_exponent}.
class RadialProfile {
 public:
  RadialProfile(double center_value, std::vector<double> radii,
                std::vector<double> values, double center_exponent,
                double tail_exponent);

  double value(double r) const;

  double center_value() const { return center_; }
  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& values() const { return v_; }
  double tail_exponent() const { return tail_exponent_; }

 private:
  double center_ = 0.0;
  double center_exponent_ = 2.0;
  double tail_exponent_ = 1.0;
  std::vector<double> r_;      // strictly increasing, positive
  std::vector<double> v_;      // values at r_
  std::vector<double> xi_;     // log r_
  std::vector<double> slope_;  // limited Hermite slopes in xi
};

// scale * profile(|x|) as a field the nonlocal quadrature can integrate.
// The far-field model is a single power-law term whose amplitude bounds
// scale * profile(r) r^{tau} over the tabulated range r >= 1.
template <int N>
class RadialPotentialField final : public ScalarField<N> {
 public:
  RadialPotentialField(std::shared_ptr<const RadialProfile> profile,
                       double scale, double tau);

  double value(const Vec<N>& x) const override;
  const FarFieldModel<N>& far_model() const override { return model_; }

  const RadialProfile& profile() const { return *profile_; }
  double scale() const { return scale_; }

 private:
  std::shared_ptr<const RadialProfile> profile_;
  double scale_ = 1.0;
  FarFieldModel<N> model_;
};

// The global supersolution of the model problem: ubar = phi + M w1 with
// w1 = u_F * g1, g1 = min{1, |x|^{-(2s+tau)}}, u_F the Riesz kernel, and M a
// power-of-two dilation making -(-Delta)^s ubar <= c_{n,s} (ubar - phi) hold
// on the verification rays.
template <int N>
struct Barrier {
  double tau = 0.0;
  double M = 1.0;

  std::shared_ptr<const RadialPotentialField<N>> w1;  // unit potential
  std::shared_ptr<const ScalarField<N>> w;            // M w1
  std::shared_ptr<const ScalarField<N>> ubar;         // phi + M w1

  double w1_center = 0.0;           // C_F omega_n (1/(2s) + 1/tau)
  double measured_A0 = 0.0;         // inf of w1 / min{1, r^{-tau}} on the rays
  double measured_A1 = 0.0;         // sup of the same ratio
  double measured_C = 0.0;          // sup of -(-Delta)^s phi / min{1, r^{1-2s}}
  double envelope_exponent = 0.0;   // log-log slope of w1 on the far range
};

struct BarrierOptions {
  // Tabulation of w1.
  double profile_min_radius = 1e-3;
  double profile_max_radius = 4096.0;
  int profile_per_decade = 32;
  // Radial convolution quadrature.
  int rho_per_decade = 8;       // log panels (6-point Gauss each)
  int graded_levels = 20;       // geometric bisections toward the rho = r kink
  int theta_panels = 16;        // angular panels for the n = 2 kernel
  // Verification rays for C, the A0/A1 envelope and the dilation M.
  double ray_min = 0.25;
  double ray_max = 64.0;
  int ray_samples = 25;
  double envelope_min = 2.0;    // exponent fit uses [envelope_min, ray_max]
  double dilation_cap = 1e12;
};

// Computes w1 by the sphere-reduced radial convolution, measures the decay
// envelope A0 <= w1(r) / min{1, r^{-tau}} <= A1 and the source bound C of
// -(-Delta)^s phi on the rays, and picks M as the smallest power of two with
// c_{n,s} M A0 min{1, r^{-tau}} >= C min{1, r^{1-2s}} at every sample.
// Requires 0 < tau < min{2s - 1, n - 2s}; throws when M would exceed the cap
// (a misconfigured phi or tau).
template <int N>
Barrier<N> build_barrier(std::shared_ptr<const ScalarField<N>> phi, double s,
                         double tau, const QuadratureScheme& quad,
                         const BarrierOptions& options = {});

// The truncated source g1(rho) = min{1, rho^{-(2s+tau)}}.
double barrier_source(double rho, double s, double tau);

}  // namespace fracma
