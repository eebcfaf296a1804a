#include "fracma/envelope.hpp"

#include "fracma/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracma {

namespace {

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

template <int N>
GridFunction<N> sup_inf_convolution(const GridFunction<N>& gf, double eps,
                                    EnvelopeSign sign) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument(
        "sup_inf_convolution: eps must be positive and finite");
  }
  const GridBox<N>& box = gf.box();
  const std::vector<double>& o = gf.offsets();
  const double h = box.spacing();
  const int m = box.nodes_per_side;

  // Any maximizer satisfies |x - y|^2 <= (2 max|o| + 1) eps; nodes beyond
  // that radius lose to the y = x candidate already.
  const double radius = std::sqrt((2.0 * max_abs(o) + 1.0) * eps);
  const int reach = std::min<int>(m - 1, int(std::ceil(radius / h)));
  const double r2 = radius * radius;
  const double flip = (sign == EnvelopeSign::sup) ? 1.0 : -1.0;

  std::vector<double> out(o.size());
  parallel_for(std::int64_t(o.size()), [&](std::int64_t flat) {
    const std::array<int, N> idx = box.unflatten(flat);
    // flip * (o(y) - |x-y|^2 / eps) maximized in both cases.
    double best = flip * o[flat];
    std::array<int, N> lo{};
    std::array<int, N> hi{};
    for (int d = 0; d < N; ++d) {
      lo[d] = std::max(0, idx[d] - reach);
      hi[d] = std::min(m - 1, idx[d] + reach);
    }
    std::array<int, N> j = lo;
    for (;;) {
      double d2 = 0.0;
      for (int d = 0; d < N; ++d) {
        const double dd = (j[d] - idx[d]) * h;
        d2 += dd * dd;
      }
      if (d2 <= r2) {
        best = std::max(best, flip * o[box.flatten(j)] - d2 / eps);
      }
      int d = N - 1;
      for (; d >= 0; --d) {
        if (++j[d] <= hi[d]) break;
        j[d] = lo[d];
      }
      if (d < 0) break;
    }
    out[flat] = flip * best;
  });
  return GridFunction<N>(box, gf.base_ptr(), std::move(out),
                         gf.taper_fraction());
}

template GridFunction<2> sup_inf_convolution<2>(const GridFunction<2>&, double,
                                                EnvelopeSign);
template GridFunction<3> sup_inf_convolution<3>(const GridFunction<3>&, double,
                                                EnvelopeSign);

}  // namespace fracma
