#pragma once

#include "fracma/grid_function.hpp"

namespace fracma {

// Quadratic-penalty regularizations of the offset part of a grid function:
//   sup:  o_eps(x) = max_y { o(y) - |x - y|^2 / eps },
//   inf:  o_eps(x) = min_y { o(y) + |x - y|^2 / eps },
// taken over grid nodes y with |x - y| <= sqrt((2 max|o| + 1) eps), the
// radius beyond which no node can compete with the y = x candidate.  The sup
// version dominates the input and is semiconvex with constant 2 / eps; the
// inf version is dominated by the input and is semiconcave with the same
// constant (each output touches a paraboloid of opening 1 / eps at every
// node).  The base field and taper are carried over unchanged.
//
// eps <= 0 (or non-finite) is rejected.
enum class EnvelopeSign { sup, inf };

template <int N>
GridFunction<N> sup_inf_convolution(const GridFunction<N>& gf, double eps,
                                    EnvelopeSign sign);

}  // namespace fracma
