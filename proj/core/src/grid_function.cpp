#include "fracma/grid_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fracma {

template <int N>
GridFunction<N>::GridFunction(const GridBox<N>& box,
                              std::shared_ptr<const ScalarField<N>> base,
                              std::vector<double> offsets,
                              double taper_fraction)
    : box_(box),
      base_(std::move(base)),
      offsets_(std::move(offsets)),
      taper_fraction_(taper_fraction) {
  box_.validate();
  if (base_ == nullptr) {
    throw std::invalid_argument("grid function requires a base field");
  }
  if (offsets_.size() != static_cast<std::size_t>(box_.node_count())) {
    throw std::invalid_argument("grid function offset count does not match box");
  }
  if (!(taper_fraction_ >= 0.0 && taper_fraction_ < 0.5)) {
    throw std::invalid_argument("taper fraction must lie in [0, 1/2)");
  }
}

template <int N>
GridFunction<N> GridFunction<N>::sample(
    const GridBox<N>& box, std::shared_ptr<const ScalarField<N>> base,
    const ScalarField<N>& f, double taper_fraction) {
  std::vector<double> offs(static_cast<std::size_t>(box.node_count()));
  for (std::int64_t i = 0; i < box.node_count(); ++i) {
    const Vec<N> x = box.coord(i);
    offs[static_cast<std::size_t>(i)] = f.value(x) - base->value(x);
  }
  return GridFunction(box, std::move(base), std::move(offs), taper_fraction);
}

template <int N>
double GridFunction<N>::value(const Vec<N>& x) const {
  if (!x.allFinite()) {
    throw std::invalid_argument("grid function evaluated at non-finite point");
  }
  if (!box_.contains(x)) return base_->value(x);
  return base_->value(x) + offset_at(x);
}

template <int N>
double GridFunction<N>::node_value(std::int64_t flat) const {
  return base_->value(box_.coord(flat)) +
         offsets_[static_cast<std::size_t>(flat)];
}

template <int N>
double GridFunction<N>::offset_at(const Vec<N>& x) const {
  if (!box_.contains(x)) return 0.0;
  const double h = box_.spacing();
  const int m = box_.nodes_per_side;

  int cell[N];
  double frac[N];
  for (int d = 0; d < N; ++d) {
    const double t = (x[d] + box_.radius) / h;
    int i = static_cast<int>(std::floor(t));
    i = std::clamp(i, 0, m - 2);
    cell[d] = i;
    frac[d] = std::clamp(t - i, 0.0, 1.0);
  }

  double interp = 0.0;
  for (int corner = 0; corner < (1 << N); ++corner) {
    double w = 1.0;
    std::array<int, N> idx;
    for (int d = 0; d < N; ++d) {
      const int bit = (corner >> d) & 1;
      w *= bit ? frac[d] : 1.0 - frac[d];
      idx[d] = cell[d] + bit;
    }
    if (w != 0.0) {
      interp += w * offsets_[static_cast<std::size_t>(box_.flatten(idx))];
    }
  }

  if (taper_fraction_ > 0.0) {
    const double s = x.template lpNorm<Eigen::Infinity>() / box_.radius;
    if (s > 1.0 - taper_fraction_) {
      interp *= std::max(0.0, (1.0 - s) / taper_fraction_);
    }
  }
  return interp;
}

template <int N>
double GridFunction<N>::node_weight_at(const Vec<N>& x,
                                       std::int64_t flat) const {
  if (!box_.contains(x)) return 0.0;
  const double h = box_.spacing();
  const int m = box_.nodes_per_side;

  int cell[N];
  double frac[N];
  for (int d = 0; d < N; ++d) {
    const double t = (x[d] + box_.radius) / h;
    int i = static_cast<int>(std::floor(t));
    i = std::clamp(i, 0, m - 2);
    cell[d] = i;
    frac[d] = std::clamp(t - i, 0.0, 1.0);
  }

  double weight = 0.0;
  for (int corner = 0; corner < (1 << N); ++corner) {
    double w = 1.0;
    std::array<int, N> idx;
    for (int d = 0; d < N; ++d) {
      const int bit = (corner >> d) & 1;
      w *= bit ? frac[d] : 1.0 - frac[d];
      idx[d] = cell[d] + bit;
    }
    if (box_.flatten(idx) == flat) {
      weight = w;
      break;
    }
  }

  if (taper_fraction_ > 0.0) {
    const double s = x.template lpNorm<Eigen::Infinity>() / box_.radius;
    if (s > 1.0 - taper_fraction_) {
      weight *= std::max(0.0, (1.0 - s) / taper_fraction_);
    }
  }
  return weight;
}

template <int N>
double GridFunction<N>::max_abs_offset() const {
  double m = 0.0;
  for (double o : offsets_) m = std::max(m, std::abs(o));
  return m;
}

template class GridFunction<2>;
template class GridFunction<3>;

}  // namespace fracma
