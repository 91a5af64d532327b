#pragma once

#include <vector>

namespace rnav {

/// Facet enlargement angle as a function of facet distance: a continuous,
/// nonincreasing, piecewise-linear map into [0, pi/2) given by its fractures
/// and held constant past the last one.
class DeltaFunction {
 public:
  struct Fracture {
    double distance;
    double delta;
    bool operator==(const Fracture&) const = default;
  };

  /// Throws std::invalid_argument unless distances start at 0 and strictly
  /// increase, and deltas lie in [0, pi/2) and do not increase.
  explicit DeltaFunction(std::vector<Fracture> fractures);

  static DeltaFunction constant(double delta);
  /// Constant `delta` on [0, flat_until], then linear decay to `far_delta`
  /// reached at `far_distance`.
  static DeltaFunction flat_then_decay(double delta, double flat_until, double far_delta,
                                       double far_distance);
  /// The genetic-algorithm tuned fracture table used in the reference
  /// simulations: d = 0, 0.5, 1, 1.5, 2, 2.5, 3, 100 m.
  static DeltaFunction reference_table();

  double operator()(double distance) const;
  double at_zero() const { return fractures_.front().delta; }
  const std::vector<Fracture>& fractures() const { return fractures_; }
  /// True if the function equals its value at 0 everywhere on [0, upto].
  bool flat_until(double upto) const;

  bool operator==(const DeltaFunction&) const = default;

 private:
  std::vector<Fracture> fractures_;
};

}  // namespace rnav
