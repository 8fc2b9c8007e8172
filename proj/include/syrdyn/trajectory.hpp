#pragma once

#include "syrdyn/maps.hpp"
#include "syrdyn/numeric.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace syrdyn {

/// Raised when a construction that must hold by arithmetic fails to verify.
class VerificationFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Truncation of the forward dynamics.
struct Limits {
  std::uint64_t max_steps = 100'000;
  Integer max_value = pow_int(10, 40);

  /// Throws std::invalid_argument unless both limits are positive.
  void check() const;
};

/// A cycle in orbit order, rotated to start at its smallest member.
class CycleInfo {
 public:
  /// Rotates `orbit` (consecutive images, no repeats) to canonical form.
  static CycleInfo from_orbit(std::vector<Nat> orbit);

  const std::vector<Nat>& members() const noexcept { return members_; }
  std::size_t length() const noexcept { return members_.size(); }
  const Nat& min_member() const { return members_.front(); }
  const Nat& max_member() const;
  bool contains(const Nat& x) const;

  friend bool operator==(const CycleInfo&, const CycleInfo&) = default;
  friend auto operator<=>(const CycleInfo& a, const CycleInfo& b) { return a.members_ <=> b.members_; }

 private:
  std::vector<Nat> members_;
};

/// True when V maps each member to the next and the last back to the first.
bool verify_cycle(const MapDescriptor& map, const CycleInfo& cycle);

enum class TrajectoryStatus { EnteredCycle, HitStepLimit, HitValueLimit };

const char* to_string(TrajectoryStatus status);

struct TrajectoryReport {
  Nat start;
  /// steps[0] = start, steps[j+1] = V(steps[j]). A value that broke the value
  /// limit is kept as the last entry.
  std::vector<Nat> steps;
  TrajectoryStatus status = TrajectoryStatus::HitStepLimit;
  std::optional<CycleInfo> cycle;
  /// Index of the first orbit value lying on the cycle (EnteredCycle only).
  std::size_t entry_index = 0;
  Nat max_excursion;
};

/// Iterates from `start` until a value repeats, more than `limits.max_steps`
/// applications would be needed, or a value exceeds `limits.max_value`.
TrajectoryReport iterate(const MapDescriptor& map, const Nat& start, const Limits& limits);

/// Distinct cycles reached from starts 1..search_bound, sorted by smallest
/// member. `threads` = 0 picks the default worker count; the result does not
/// depend on it.
std::vector<CycleInfo> find_cycles(const MapDescriptor& map, std::uint64_t search_bound, const Limits& limits,
                                   unsigned threads = 1);

/// {1, 2^{k-1}, ..., 2} verified as a cycle of the px+1 map with p = 2^k - 1.
CycleInfo check_power_cycle(unsigned k);

}  // namespace syrdyn
