#pragma once

#include "fracma/field.hpp"
#include "fracma/geometry.hpp"

#include <memory>
#include <vector>

namespace fracma {

// A field represented as base + multilinear interpolation of node offsets on
// a GridBox, falling back to the base field outside the box.  The base
// carries the far-field model; the offsets carry the computed correction.
//
// taper_fraction in [0, 1/2) multiplies the interpolated offset by a hat
// that falls linearly (in |x|_inf) from 1 at (1 - fraction) R to 0 at the box
// boundary, so that fields loaded from arbitrary node data stay continuous
// across the boundary.  Pass 0 to trust the given offsets (solver output and
// envelopes already vanish near the boundary by construction).
template <int N>
class GridFunction final : public ScalarField<N> {
 public:
  GridFunction(const GridBox<N>& box,
               std::shared_ptr<const ScalarField<N>> base,
               std::vector<double> offsets, double taper_fraction);

  // Sample offsets = f - base at the nodes.
  static GridFunction sample(const GridBox<N>& box,
                             std::shared_ptr<const ScalarField<N>> base,
                             const ScalarField<N>& f, double taper_fraction);

  double value(const Vec<N>& x) const override;
  const FarFieldModel<N>& far_model() const override {
    return base_->far_model();
  }
  const GridBox<N>* domain_box() const override { return &box_; }

  const GridBox<N>& box() const { return box_; }
  const ScalarField<N>& base() const { return *base_; }
  std::shared_ptr<const ScalarField<N>> base_ptr() const { return base_; }
  double taper_fraction() const { return taper_fraction_; }

  std::vector<double>& offsets() { return offsets_; }
  const std::vector<double>& offsets() const { return offsets_; }
  double node_value(std::int64_t flat) const;

  // Interpolated offset including the taper factor; 0 outside the box.
  double offset_at(const Vec<N>& x) const;
  // Coefficient of offsets()[flat] inside offset_at(x) (interpolation weight
  // times the taper factor); 0 when x is outside the box or outside the
  // node's interpolation support.
  double node_weight_at(const Vec<N>& x, std::int64_t flat) const;
  double max_abs_offset() const;

 private:
  GridBox<N> box_;
  std::shared_ptr<const ScalarField<N>> base_;
  std::vector<double> offsets_;
  double taper_fraction_ = 0.0;
};

}  // namespace fracma
