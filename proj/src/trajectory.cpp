#include "syrdyn/trajectory.hpp"

#include "syrdyn/parallel.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace syrdyn {

void Limits::check() const {
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (max_value < 1) throw std::invalid_argument("max_value must be positive");
}

CycleInfo CycleInfo::from_orbit(std::vector<Nat> orbit) {
  if (orbit.empty()) throw std::invalid_argument("a cycle needs at least one member");
  auto smallest = std::min_element(orbit.begin(), orbit.end());
  std::rotate(orbit.begin(), smallest, orbit.end());
  CycleInfo out;
  out.members_ = std::move(orbit);
  return out;
}

const Nat& CycleInfo::max_member() const { return *std::max_element(members_.begin(), members_.end()); }

bool CycleInfo::contains(const Nat& x) const { return std::find(members_.begin(), members_.end(), x) != members_.end(); }

bool verify_cycle(const MapDescriptor& map, const CycleInfo& cycle) {
  const auto& m = cycle.members();
  if (m.empty()) return false;
  if (std::set<Nat>(m.begin(), m.end()).size() != m.size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 1 || map.apply(m[i]) != m[(i + 1) % m.size()]) return false;
  }
  return true;
}

const char* to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::EnteredCycle: return "EnteredCycle";
    case TrajectoryStatus::HitStepLimit: return "HitStepLimit";
    case TrajectoryStatus::HitValueLimit: return "HitValueLimit";
  }
  return "Unknown";
}

TrajectoryReport iterate(const MapDescriptor& map, const Nat& start, const Limits& limits) {
  limits.check();
  if (start < 1) throw MapError(MapError::Kind::Domain, "trajectory start must be >= 1", std::nullopt, start);

  TrajectoryReport report;
  report.start = start;
  report.steps.push_back(start);
  report.max_excursion = start;
  if (start > limits.max_value) {
    report.status = TrajectoryStatus::HitValueLimit;
    return report;
  }

  std::unordered_map<Nat, std::size_t> seen;
  seen.emplace(start, 0);
  for (std::uint64_t applied = 1; applied <= limits.max_steps; ++applied) {
    Nat next = map.apply(report.steps.back());
    if (next > limits.max_value) {
      report.max_excursion = next;
      report.steps.push_back(std::move(next));
      report.status = TrajectoryStatus::HitValueLimit;
      return report;
    }
    if (auto hit = seen.find(next); hit != seen.end()) {
      report.status = TrajectoryStatus::EnteredCycle;
      report.entry_index = hit->second;
      report.cycle = CycleInfo::from_orbit(
          std::vector<Nat>(report.steps.begin() + static_cast<std::ptrdiff_t>(hit->second), report.steps.end()));
      return report;
    }
    if (next > report.max_excursion) report.max_excursion = next;
    seen.emplace(next, report.steps.size());
    report.steps.push_back(std::move(next));
  }
  report.status = TrajectoryStatus::HitStepLimit;
  return report;
}

std::vector<CycleInfo> find_cycles(const MapDescriptor& map, std::uint64_t search_bound, const Limits& limits,
                                   unsigned threads) {
  if (search_bound < 1) throw std::invalid_argument("search_bound must be >= 1");
  limits.check();
  const unsigned workers = resolve_threads(threads);
  std::vector<std::set<CycleInfo>> found(workers);
  for_each_block(1, search_bound, workers, [&](std::uint64_t lo, std::uint64_t hi, std::size_t block) {
    auto& local = found[block];
    // Starts already seen on a found cycle cannot reveal anything new.
    std::set<Nat> on_cycle;
    for (std::uint64_t x = lo; x <= hi; ++x) {
      if (on_cycle.contains(Nat(x))) continue;
      TrajectoryReport rep = iterate(map, Nat(x), limits);
      if (rep.status != TrajectoryStatus::EnteredCycle) continue;
      if (local.insert(*rep.cycle).second) on_cycle.insert(rep.cycle->members().begin(), rep.cycle->members().end());
    }
  });
  std::set<CycleInfo> merged;
  for (auto& s : found) merged.insert(s.begin(), s.end());
  return {merged.begin(), merged.end()};
}

CycleInfo check_power_cycle(unsigned k) {
  if (k < 2) throw std::invalid_argument("power cycle needs k >= 2");
  const Integer p = pow_int(2, k) - 1;
  std::vector<Nat> orbit{1};
  for (unsigned e = k - 1; e >= 1; --e) orbit.push_back(pow_int(2, e));
  CycleInfo cycle = CycleInfo::from_orbit(std::move(orbit));
  if (!verify_cycle(pxr_map(p, 1), cycle)) {
    throw VerificationFailure("{1, 2^(k-1), ..., 2} is not a cycle of the px+1 map for k=" + std::to_string(k));
  }
  return cycle;
}

}  // namespace syrdyn
