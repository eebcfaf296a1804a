#pragma once

namespace fracma {

// Structural constants of the operator class, computed from the far-field
// data (cone slope bound C, Lipschitz bound L, excess eta0) and the order s.
// They quantify the a-priori bounds the scheme relies on:
//   mu1     uniform upper bound on the line integrals of Lipschitz fields,
//   C2      angular kernel mass of a degenerate direction,
//   C1      line-to-sphere comparison constant,
//   mu0     uniform positive lower bound induced by the excess eta0,
//   bar_mu0 its nondegenerate-limit counterpart (s -> 1).
struct StructuralConstants {
  // Recorded inputs.
  int n = 0;
  double s = 0.0;
  double lipschitz = 0.0;  // L
  double cone_bound = 0.0; // C
  double excess = 0.0;     // eta0

  // Derived constants; all strictly positive for valid inputs.
  double mu1 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double mu0 = 0.0;
  double bar_mu0 = 0.0;
};

// Validates n in {2, 3}, s in (1/2, 1), L > 0, C > 0, eta0 > 0 and evaluates
// the closed forms.  Throws std::invalid_argument on a bad input and
// std::runtime_error if any output fails its positivity invariant.
StructuralConstants structural_constants(int n, double s, double lipschitz,
                                         double cone_bound, double excess);

}  // namespace fracma
