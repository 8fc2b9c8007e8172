#pragma once

// Finite-domain split of 1..B into cycle points (C), points whose orbit
// reaches a cycle (D1) and points left undetermined by the limits (D2
// candidates). Only limits are certified here: a D2 candidate may still reach
// a cycle under larger limits.

#include "syrdyn/maps.hpp"
#include "syrdyn/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace syrdyn {

enum class PointClass { Cycle, Preperiodic, Undetermined };

/// "C", "D1", "D2?"
const char* to_string(PointClass cls);

struct PointOutcome {
  PointClass cls = PointClass::Undetermined;
  TrajectoryStatus status = TrajectoryStatus::HitStepLimit;
  /// Steps to the first cycle member for C/D1; map applications performed
  /// before the limit was hit for D2 candidates.
  std::uint64_t steps = 0;
  Nat max_excursion;
  /// Smallest member of the cycle reached, for C/D1 points.
  std::optional<Nat> cycle_min;

  friend bool operator==(const PointOutcome&, const PointOutcome&) = default;
};

/// Outcome iterate() gives for one start; the reference classification.
PointOutcome classify_by_iteration(const MapDescriptor& map, const Nat& x, const Limits& limits);

struct PartitionResult {
  std::uint64_t domain_bound = 0;
  Limits limits;
  /// outcomes[x - 1] for x in 1..domain_bound.
  std::vector<PointOutcome> outcomes;
  std::vector<Nat> c_set;
  std::vector<Nat> d1_set;
  std::vector<Nat> d2_candidates;
  /// Every cycle reached from the domain, sorted by smallest member.
  std::vector<CycleInfo> cycles;

  const PointOutcome& at(std::uint64_t x) const { return outcomes.at(x - 1); }
};

/// Classifies every x in 1..domain_bound. Orbit suffixes are cached, and the
/// result equals classifying each point with iterate() on its own.
PartitionResult partition(const MapDescriptor& map, std::uint64_t domain_bound, const Limits& limits);

}  // namespace syrdyn
