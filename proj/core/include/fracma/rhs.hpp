#pragma once

#include "fracma/field.hpp"

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>

namespace fracma {

// Right-hand side g(x, t) of D_s u = g(x, u) together with the structural
// constants the estimates consume: monotonicity mu (g(x,t1) - g(x,t2) >=
// mu (t1 - t2) for t1 >= t2), the x-Lipschitz constant uniform in t, and the
// semiconvexity constant of x -> g(x, t) (second increments >= -C |y|^2).
template <int N>
struct RightHandSide {
  enum class Kind { model, general };

  Kind kind = Kind::general;
  double monotonicity = 1.0;   // mu > 0
  double lipschitz = 0.0;      // Lip(g) in x, uniform in t
  double semiconvexity = 0.0;  // C_g >= 0
  std::function<double(const Vec<N>&, double)> evaluator;

  double operator()(const Vec<N>& x, double t) const { return evaluator(x, t); }

  // The model problem g(x, t) = t - phi(x): mu = 1 exactly, and the x part
  // is -phi, so Lip(g) = Lip(phi) and the semiconvexity constant equals the
  // semiconcavity constant of phi.  The callers pass the phi constants they
  // measured (or bounded analytically).
  static RightHandSide model_problem(std::shared_ptr<const ScalarField<N>> phi,
                                     double phi_lipschitz,
                                     double phi_semiconcavity) {
    if (!phi) throw std::invalid_argument("model_problem: phi must be set");
    if (!(phi_lipschitz >= 0.0) || !(phi_semiconcavity >= 0.0)) {
      throw std::invalid_argument(
          "model_problem: phi constants must be non-negative");
    }
    RightHandSide rhs;
    rhs.kind = Kind::model;
    rhs.monotonicity = 1.0;
    rhs.lipschitz = phi_lipschitz;
    rhs.semiconvexity = phi_semiconcavity;
    rhs.evaluator = [phi = std::move(phi)](const Vec<N>& x, double t) {
      return t - phi->value(x);
    };
    return rhs;
  }
};

}  // namespace fracma
