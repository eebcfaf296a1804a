#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>

namespace fracma {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;
template <int N>
using Mat = Eigen::Matrix<double, N, N>;

// Node-centered uniform grid on the closed box [-radius, radius]^N with
// nodes_per_side nodes along each axis (so spacing = 2 radius / (m - 1)).
template <int N>
struct GridBox {
  double radius = 1.0;
  int nodes_per_side = 2;

  void validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("GridBox: radius must be positive");
    if (nodes_per_side < 2) throw std::invalid_argument("GridBox: need at least 2 nodes per side");
  }

  double spacing() const { return 2.0 * radius / (nodes_per_side - 1); }

  std::int64_t node_count() const {
    std::int64_t c = 1;
    for (int d = 0; d < N; ++d) c *= nodes_per_side;
    return c;
  }

  std::array<int, N> unflatten(std::int64_t flat) const {
    std::array<int, N> idx{};
    for (int d = N - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(flat % nodes_per_side);
      flat /= nodes_per_side;
    }
    return idx;
  }

  std::int64_t flatten(const std::array<int, N>& idx) const {
    std::int64_t flat = 0;
    for (int d = 0; d < N; ++d) flat = flat * nodes_per_side + idx[d];
    return flat;
  }

  Vec<N> coord(const std::array<int, N>& idx) const {
    Vec<N> x;
    const double h = spacing();
    for (int d = 0; d < N; ++d) x[d] = -radius + h * idx[d];
    return x;
  }

  Vec<N> coord(std::int64_t flat) const { return coord(unflatten(flat)); }

  // Max-norm membership in the closed box (with a roundoff cushion so that
  // boundary nodes stay inside).
  bool contains(const Vec<N>& x) const {
    return x.template lpNorm<Eigen::Infinity>() <= radius * (1.0 + 1e-12);
  }
};

}  // namespace fracma
