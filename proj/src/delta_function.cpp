#include "rnav/delta_function.hpp"

#include <algorithm>
#include <stdexcept>

#include "rnav/geom.hpp"

namespace rnav {

DeltaFunction::DeltaFunction(std::vector<Fracture> fractures) : fractures_(std::move(fractures)) {
  if (fractures_.empty()) throw std::invalid_argument("DeltaFunction: no fractures");
  if (fractures_.front().distance != 0.0)
    throw std::invalid_argument("DeltaFunction: first fracture must be at distance 0");
  for (std::size_t i = 0; i < fractures_.size(); ++i) {
    const Fracture& f = fractures_[i];
    if (!(f.delta >= 0.0 && f.delta < kPi / 2.0))
      throw std::invalid_argument("DeltaFunction: delta outside [0, pi/2)");
    if (i > 0) {
      if (!(f.distance > fractures_[i - 1].distance))
        throw std::invalid_argument("DeltaFunction: distances must strictly increase");
      if (f.delta > fractures_[i - 1].delta)
        throw std::invalid_argument("DeltaFunction: must be nonincreasing");
    }
  }
}

DeltaFunction DeltaFunction::constant(double delta) { return DeltaFunction({{0.0, delta}}); }

DeltaFunction DeltaFunction::flat_then_decay(double delta, double flat_until, double far_delta,
                                             double far_distance) {
  if (flat_until <= 0.0) return DeltaFunction({{0.0, delta}, {far_distance, far_delta}});
  return DeltaFunction({{0.0, delta}, {flat_until, delta}, {far_distance, far_delta}});
}

DeltaFunction DeltaFunction::reference_table() {
  return DeltaFunction({{0.0, 1.52},
                        {0.5, 1.27},
                        {1.0, 1.21},
                        {1.5, 0.43},
                        {2.0, 0.2},
                        {2.5, 0.02},
                        {3.0, 0.01},
                        {100.0, 0.003}});
}

double DeltaFunction::operator()(double distance) const {
  if (distance <= fractures_.front().distance) return fractures_.front().delta;
  if (distance >= fractures_.back().distance) return fractures_.back().delta;
  auto hi = std::upper_bound(fractures_.begin(), fractures_.end(), distance,
                             [](double d, const Fracture& f) { return d < f.distance; });
  auto lo = hi - 1;
  const double u = (distance - lo->distance) / (hi->distance - lo->distance);
  return lo->delta + u * (hi->delta - lo->delta);
}

bool DeltaFunction::flat_until(double upto) const {
  const double d0 = at_zero();
  for (const Fracture& f : fractures_) {
    if (f.distance > upto) break;
    if (f.delta != d0) return false;
  }
  // Linear pieces are monotone, so the value at `upto` settles the remainder.
  return (*this)(upto) == d0;
}

}  // namespace rnav
