#pragma once

// A finite measure on the truncated preimage forest of a set of cycles.
//
// For cycle i (1-based) of length N the cycle-local values are:
//   cycle members                          1/(2N)
//   level 1, whole level ascending j=1,2.. 2^(-j-3)
//   child t=1,2.. (ascending) of value m   m * 2^(-t-1)
// and the combined measure weights cycle i by 2^(-i-1). Every level carries at
// most half of the previous one, which gives mu(V^-n(A)) <= 2 mu(A).

#include "syrdyn/maps.hpp"
#include "syrdyn/numeric.hpp"
#include "syrdyn/trajectory.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace syrdyn {

class ForestError : public std::invalid_argument {
 public:
  enum class Kind { OverlappingCycles, InvalidCycle, DepthExceeded };
  ForestError(Kind kind, const std::string& message) : std::invalid_argument(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct ForestNode {
  Nat value;
  std::size_t cycle = 0;  // 0-based
  unsigned level = 0;     // 0 for cycle members
  /// Image under the map; empty for cycle members.
  std::optional<Nat> parent;
  /// Preimages inside the forest, ascending. Cycle members list only their
  /// off-cycle preimages; nodes on the deepest level have none.
  std::vector<Nat> children;
};

class PreimageForest {
 public:
  const MapDescriptor& map() const noexcept { return map_; }
  const std::vector<CycleInfo>& cycles() const noexcept { return cycles_; }
  unsigned depth() const noexcept { return depth_; }

  /// levels(i)[l] holds the level-l nodes of cycle i, ascending.
  const std::vector<std::vector<Nat>>& levels(std::size_t cycle) const { return levels_.at(cycle); }

  const ForestNode* find(const Nat& value) const;
  bool covers(const Nat& value) const { return nodes_.contains(value); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::map<Nat, ForestNode>& nodes() const noexcept { return nodes_; }

  /// V^-1(set) intersected with the covered nodes, ascending.
  std::vector<Nat> preimage_within(const std::vector<Nat>& set) const;

 private:
  friend PreimageForest build_forest(const MapDescriptor& map, std::vector<CycleInfo> cycles, unsigned depth);
  explicit PreimageForest(MapDescriptor map) : map_(std::move(map)) {}

  MapDescriptor map_;
  std::vector<CycleInfo> cycles_;
  unsigned depth_ = 0;
  std::vector<std::vector<std::vector<Nat>>> levels_;
  std::map<Nat, ForestNode> nodes_;
};

/// Breadth-first preimage levels 0..depth for each cycle. Throws ForestError
/// for a list entry that is not a cycle of `map` or for cycles sharing a member.
PreimageForest build_forest(const MapDescriptor& map, std::vector<CycleInfo> cycles, unsigned depth);

struct MeasureAssignment {
  PreimageForest forest;
  /// per_cycle[i] is the cycle-local measure of cycle i + 1.
  std::vector<std::map<Nat, ScaledDyadic>> per_cycle;
  std::map<Nat, ScaledDyadic> combined;
  ScaledDyadic total;

  /// Combined value of a point; zero outside the forest.
  ScaledDyadic value(const Nat& x) const;
};

MeasureAssignment assign_measure(PreimageForest forest);

/// Exact combined measure of a set; duplicates count once.
ScaledDyadic measure_of(const MeasureAssignment& assignment, const std::vector<Nat>& set);

/// Structural checks of the construction, all in exact arithmetic.
struct ConstructionReport {
  /// level_sums[i][l]: cycle-local mass of level l of cycle i.
  std::vector<std::vector<ScaledDyadic>> level_sums;
  std::vector<ScaledDyadic> cycle_totals;
  bool cycle_members_ok = true;     // each member 1/(2N), cycle mass 1/2
  bool level_one_ok = true;         // level 1 mass <= 1/4
  bool children_ok = true;          // children of m sum to <= m/2
  bool positive_ok = true;          // every covered node > 0
  bool totals_ok = true;            // every cycle total <= 1, combined total <= 1

  bool ok() const { return cycle_members_ok && level_one_ok && children_ok && positive_ok && totals_ok; }
};

ConstructionReport verify_construction(const MeasureAssignment& assignment);

struct PowerBoundSample {
  std::vector<Nat> set;
  unsigned n = 0;
  ScaledDyadic set_measure;
  ScaledDyadic preimage_measure;
};

struct PowerBoundReport {
  std::uint64_t trials = 0;
  unsigned max_n = 0;
  std::uint64_t seed = 0;
  std::uint64_t comparisons = 0;
  /// Pairs violating mu(V^-n(A)) <= 2 mu(A); empty for a correct construction.
  std::vector<PowerBoundSample> violations;
  /// Sample with the largest ratio mu(V^-n(A)) / mu(A).
  std::optional<PowerBoundSample> worst;

  bool ok() const { return violations.empty(); }
  double worst_ratio() const;
};

/// Checks mu(V^-n(A)) <= 2 mu(A) for `trials` pseudo-random subsets A of the
/// covered nodes (fixed by `seed`) and every n in 1..max_n. Throws
/// ForestError(DepthExceeded) when max_n exceeds the forest depth.
PowerBoundReport check_power_bound(const MeasureAssignment& assignment, std::uint64_t trials, unsigned max_n,
                                   std::uint64_t seed);

/// mu(V^-n(set)) <= 2 mu(set) for one explicit set.
PowerBoundSample power_bound_sample(const MeasureAssignment& assignment, std::vector<Nat> set, unsigned n);

}  // namespace syrdyn
