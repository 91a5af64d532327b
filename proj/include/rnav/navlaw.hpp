#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "rnav/delta_function.hpp"
#include "rnav/sensor.hpp"
#include "rnav/world.hpp"

namespace rnav {

/// A facet whose angular range is widened by delta on both sides; outside the
/// original arc the range profile is that of the nearest arc end.
struct ExtendedFacet {
  Facet base;
  double delta = 0.0;
  Arc range;

  /// Extended profile d_k(angle); meaningful for any angle.
  double distance_at(double angle) const;
  /// Both ends of the extended range; none when it covers the whole circle.
  std::vector<double> endpoints() const;
};

/// Widens each facet by its class enlargement evaluated at the facet distance.
/// Throws std::invalid_argument if a facet's class is not listed.
std::vector<ExtendedFacet> enlarge(const std::vector<Facet>& facets,
                                   const std::vector<ObstacleClass>& classes);
ExtendedFacet enlarge(const Facet& facet, const DeltaFunction& delta);

enum class Branch { Unobstructed, Obstructed, Hold };

const char* branch_name(Branch b);

struct ControlDecision {
  Vec2 velocity;
  Branch branch = Branch::Unobstructed;
  double chosen_angle = 0.0;
  int obstructing = -1;              // index into the extended facets
  std::vector<double> endpoint_set;  // E_k
  bool tie = false;                  // equal discrepancies on both sides
};

class NoEscapeDirection : public std::runtime_error {
 public:
  NoEscapeDirection() : std::runtime_error("no admissible escape direction") {}
};

struct ControlOptions {
  /// When set, the obstructed branch is used only if some facet is closer than this.
  std::optional<double> d_star;
  /// When set, ties between the two escape directions are broken at random
  /// instead of counter-clockwise.
  std::mt19937_64* tie_rng = nullptr;
};

/// Velocity selection: head along `beta` unless an extended facet covers it,
/// otherwise turn to the escape endpoint nearest to beta. Throws
/// NoEscapeDirection when the obstructing facet offers no escape endpoint.
ControlDecision select_control(double beta, const std::vector<ExtendedFacet>& extended, double v,
                               const ControlOptions& options = {});

struct SafetyTuning {
  int class_id;
  double delta_at_zero;
  double required;  // arcsin(v_o / v)
  bool pass;
};
/// Delta_i(0) > arcsin(v_o^i / v) for every class.
std::vector<SafetyTuning> check_safety_tuning(const std::vector<ObstacleClass>& classes, double v);

struct DriftTuning {
  int class_id;
  double delta_bar;   // arcsin(v_o / v)
  double delta_star;
  double delta_at_zero;
  double hat_height;
  bool flat;          // Delta constant on [0, hat_height]
  bool in_range;      // delta_bar < Delta(0) < delta_star
  bool pass() const { return flat && in_range; }
};
DriftTuning check_drift_tuning(const ObstacleClass& cls, double hat_height, double delta_star,
                               double v);
/// Uses each class's declared delta_star and hat_height_bound; classes without
/// a delta_star fail.
std::vector<DriftTuning> check_drift_tuning(const std::vector<ObstacleClass>& classes, double v);

/// Flat length a disk of radius R requires: R (1 - cos delta) / cos delta.
double disk_flat_length(double radius, double delta);

}  // namespace rnav
