#pragma once

namespace fracma {

// Gamma function for x > 0, relative error <= 1e-12. Throws
// std::invalid_argument outside the domain.
double gamma_fn(double x);

// Surface measure of the unit sphere in R^k: omega_k = 2 pi^{k/2} / Gamma(k/2).
// omega_1 = 2, omega_2 = 2 pi, omega_3 = 4 pi.
double sphere_area(int k);

// Volume of the unit ball in R^n: omega_n / n.
double ball_volume(int n);

// Fractional-Laplacian normalization c_{n,s} with Fourier symbol |xi|^{2s}:
//   c_{n,s} = 4^s Gamma(n/2 + s) s / (pi^{n/2} Gamma(1 - s)),
// so that -(-Delta)^s u(x) = c_{n,s} * (1/2) \int delta(u,x,y) |y|^{-n-2s} dy.
double cns_constant(int n, double s);

// Riesz-potential constant matching cns_constant: the kernel
// u_F = riesz_constant * |x|^{2s-n} inverts (-Delta)^s, i.e.
// (-Delta)^s (u_F * g) = g. Requires n > 2s.
double riesz_constant(int n, double s);

// Power-law eigenvalue of the fractional Laplacian:
//   (-Delta)^s |x|^{-g} = power_law_coefficient(n,s,g) * |x|^{-g-2s}
// for 0 < g < n - 2s (the range where the coefficient is positive and the
// right-hand side is locally integrable).
double power_law_coefficient(int n, double s, double g);

}  // namespace fracma
