#include "fracma/special.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracma {

namespace {
void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}
void require_s(double s) {
  require(s > 0.5 && s < 1.0, "s must lie in (1/2, 1), got " + std::to_string(s));
}
}  // namespace

double gamma_fn(double x) {
  require(std::isfinite(x) && x > 0.0, "gamma_fn requires x > 0, got " + std::to_string(x));
  // glibc tgamma is accurate to a few ulp for positive arguments; the 1e-12
  // relative contract is verified against an independent Spouge-series oracle
  // in the test suite.
  return std::tgamma(x);
}

double sphere_area(int k) {
  require(k >= 1, "sphere_area requires k >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * k) / gamma_fn(0.5 * k);
}

double ball_volume(int n) {
  require(n >= 1, "ball_volume requires n >= 1");
  return sphere_area(n) / n;
}

double cns_constant(int n, double s) {
  require(n >= 1, "cns_constant requires n >= 1");
  require_s(s);
  // |Gamma(-s)| = Gamma(1-s)/s for s in (0,1).
  return std::pow(4.0, s) * gamma_fn(0.5 * n + s) * s /
         (std::pow(M_PI, 0.5 * n) * gamma_fn(1.0 - s));
}

double riesz_constant(int n, double s) {
  require_s(s);
  require(n > 2.0 * s, "riesz_constant requires n > 2s");
  return gamma_fn(0.5 * n - s) / (std::pow(4.0, s) * std::pow(M_PI, 0.5 * n) * gamma_fn(s));
}

double power_law_coefficient(int n, double s, double g) {
  require_s(s);
  require(g > 0.0 && g < n - 2.0 * s,
          "power_law_coefficient requires 0 < g < n - 2s, got g = " + std::to_string(g));
  return std::pow(4.0, s) * (gamma_fn(0.5 * (g + 2.0 * s)) / gamma_fn(0.5 * g)) *
         (gamma_fn(0.5 * (n - g)) / gamma_fn(0.5 * (n - g - 2.0 * s)));
}

}  // namespace fracma
