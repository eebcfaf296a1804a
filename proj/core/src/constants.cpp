#include "fracma/constants.hpp"

#include "fracma/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracma {

StructuralConstants structural_constants(int n, double s, double lipschitz,
                                         double cone_bound, double excess) {
  if (n != 2 && n != 3) {
    throw std::invalid_argument("structural constants require n in {2, 3}");
  }
  if (!(s > 0.5 && s < 1.0)) {
    throw std::invalid_argument("structural constants require s in (1/2, 1)");
  }
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw std::invalid_argument("Lipschitz bound L must be positive");
  }
  if (!(cone_bound > 0.0) || !std::isfinite(cone_bound)) {
    throw std::invalid_argument("cone slope bound C must be positive");
  }
  if (!(excess > 0.0) || !std::isfinite(excess)) {
    throw std::invalid_argument("excess eta0 must be positive");
  }

  StructuralConstants k;
  k.n = n;
  k.s = s;
  k.lipschitz = lipschitz;
  k.cone_bound = cone_bound;
  k.excess = excess;

  const double L = lipschitz;
  const double C = cone_bound;
  const double omega_nm1 = sphere_area(n - 1);
  const double omega_n = sphere_area(n);

  // mu1 = sup over Lipschitz profiles of the line integral: the integrand is
  // min{2 L t, C t^2} t^{-1-2s}, switching at t0 = 2L/C.
  k.mu1 = std::pow(L, 2.0 - 2.0 * s) / (2.0 * s - 1.0) *
          std::pow(0.5 * C, 2.0 * s - 1.0);

  // C2 = omega_{n-1} Gamma((n-1)/2) Gamma(s + 1/2) / (2 Gamma(n/2 + s)):
  // the sphere mass a single degenerate axis contributes to the kernel.
  k.C2 = omega_nm1 * gamma_fn(0.5 * (n - 1)) * gamma_fn(s + 0.5) /
         (2.0 * gamma_fn(0.5 * n + s));

  // C1 = sqrt(pi) Gamma((n-1)/2 + s) / Gamma(n/2 + s) * (mu1 omega_{n-1} / 2).
  k.C1 = std::sqrt(std::numbers::pi) * gamma_fn(0.5 * (n - 1) + s) /
         gamma_fn(0.5 * n + s) * (0.5 * k.mu1 * omega_nm1);

  // mu0 = C1^{1-n} C2^{-1} (eta0 / 2)^n.
  k.mu0 = std::pow(k.C1, 1.0 - n) / k.C2 * std::pow(0.5 * excess, double(n));

  // bar_mu0 = (2 n eta0 / omega_n)^n (C (n-1))^{1-n}, the s -> 1 companion.
  k.bar_mu0 = std::pow(2.0 * n * excess / omega_n, double(n)) *
              std::pow(C * (n - 1), 1.0 - n);

  const bool positive = k.mu1 > 0.0 && k.C1 > 0.0 && k.C2 > 0.0 &&
                        k.mu0 > 0.0 && k.bar_mu0 > 0.0;
  const bool finite = std::isfinite(k.mu1) && std::isfinite(k.C1) &&
                      std::isfinite(k.C2) && std::isfinite(k.mu0) &&
                      std::isfinite(k.bar_mu0);
  if (!positive || !finite) {
    throw std::runtime_error("structural constants lost positivity");
  }
  return k;
}

}  // namespace fracma
