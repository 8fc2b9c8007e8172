#include "syrdyn/trajectory.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace syrdyn;

namespace {

std::vector<Nat> nats(std::initializer_list<int> xs) { return {xs.begin(), xs.end()}; }

Limits limits(std::uint64_t steps, const char* value) {
  Limits l;
  l.max_steps = steps;
  l.max_value = parse_integer(value);
  return l;
}

}  // namespace

TEST_CASE("iterate examples") {
  const MapDescriptor c = collatz();
  const TrajectoryReport seven = iterate(c, 7, Limits{});
  CHECK(seven.status == TrajectoryStatus::EnteredCycle);
  CHECK(seven.steps == nats({7, 11, 17, 26, 13, 20, 10, 5, 8, 4, 2, 1}));
  REQUIRE(seven.cycle.has_value());
  CHECK(seven.cycle->members() == nats({1, 2}));
  CHECK(seven.entry_index == 10);
  CHECK(seven.steps[seven.entry_index] == 2);
  CHECK(seven.max_excursion == 26);

  const TrajectoryReport one = iterate(c, 1, Limits{});
  CHECK(one.status == TrajectoryStatus::EnteredCycle);
  CHECK(one.entry_index == 0);
  CHECK(one.steps == nats({1, 2}));

  const TrajectoryReport up = iterate(pxr_map(5, 1), 7, limits(100000, "1e6"));
  CHECK(up.status == TrajectoryStatus::HitValueLimit);
  CHECK(up.steps.back() > 1000000);
  CHECK(up.max_excursion == up.steps.back());
  CHECK_FALSE(up.cycle.has_value());
}

TEST_CASE("iterate respects the step limit exactly") {
  const MapDescriptor c = collatz();
  // 27 needs many steps; cap at 5 applications.
  const TrajectoryReport r = iterate(c, 27, limits(5, "1e40"));
  CHECK(r.status == TrajectoryStatus::HitStepLimit);
  CHECK(r.steps.size() == 6);
  // Detection after exactly entry + cycle length applications still succeeds.
  const TrajectoryReport seven = iterate(c, 7, limits(12, "1e40"));
  CHECK(seven.status == TrajectoryStatus::EnteredCycle);
  CHECK(iterate(c, 7, limits(11, "1e40")).status == TrajectoryStatus::HitStepLimit);
  // A start above the ceiling stops at once.
  CHECK(iterate(c, 100, limits(10, "50")).status == TrajectoryStatus::HitValueLimit);
  CHECK_THROWS(iterate(c, 0, Limits{}));
  CHECK_THROWS(iterate(c, 3, limits(0, "10")));
}

TEST_CASE("iterate orbit invariant") {
  const MapDescriptor m = pxr_map(5, 1);
  for (int x = 1; x <= 200; ++x) {
    const TrajectoryReport r = iterate(m, x, limits(10000, "1e9"));
    CHECK(r.steps.front() == x);
    for (std::size_t j = 0; j + 1 < r.steps.size(); ++j) CHECK(r.steps[j + 1] == m.apply(r.steps[j]));
    CHECK(r.max_excursion == *std::max_element(r.steps.begin(), r.steps.end()));
    if (r.status == TrajectoryStatus::EnteredCycle) {
      CHECK(verify_cycle(m, *r.cycle));
      CHECK(r.cycle->contains(r.steps[r.entry_index]));
      CHECK(m.apply(r.steps.back()) == r.steps[r.entry_index]);
      for (std::size_t j = 0; j < r.entry_index; ++j) CHECK_FALSE(r.cycle->contains(r.steps[j]));
    }
  }
}

TEST_CASE("cycle canonical form") {
  const CycleInfo c = CycleInfo::from_orbit(nats({8, 4, 2, 1, 3}));
  CHECK(c.members() == nats({1, 3, 8, 4, 2}));
  CHECK(c.length() == 5);
  CHECK(c.max_member() == 8);
  CHECK(verify_cycle(pxr_map(5, 1), c));
  CHECK_FALSE(verify_cycle(pxr_map(5, 1), CycleInfo::from_orbit(nats({1, 3, 4}))));
}

TEST_CASE("find_cycles examples") {
  const auto collatz_cycles = find_cycles(collatz(), 10000, Limits{});
  REQUIRE(collatz_cycles.size() == 1);
  CHECK(collatz_cycles[0].members() == nats({1, 2}));

  const auto seven = find_cycles(pxr_map(7, 1), 100, limits(100000, "1e12"));
  CHECK(std::find(seven.begin(), seven.end(), CycleInfo::from_orbit(nats({1, 4, 2}))) != seven.end());

  const auto five = find_cycles(pxr_map(5, 1), 100, limits(10000, "1e9"));
  CHECK(std::find(five.begin(), five.end(), CycleInfo::from_orbit(nats({1, 3, 8, 4, 2}))) != five.end());
  CHECK(std::is_sorted(five.begin(), five.end(),
                       [](const CycleInfo& a, const CycleInfo& b) { return a.min_member() < b.min_member(); }));
  for (const auto& c : five) CHECK(verify_cycle(pxr_map(5, 1), c));
}

TEST_CASE("find_cycles does not depend on the worker count") {
  const Limits l = limits(10000, "1e9");
  const auto one = find_cycles(pxr_map(5, 1), 2000, l, 1);
  CHECK(one == find_cycles(pxr_map(5, 1), 2000, l, 3));
  CHECK(one == find_cycles(pxr_map(5, 1), 2000, l, 7));
}

TEST_CASE("power cycles") {
  CHECK(check_power_cycle(2).members() == nats({1, 2}));
  CHECK(check_power_cycle(3).members() == nats({1, 4, 2}));
  CHECK(check_power_cycle(5).members() == nats({1, 16, 8, 4, 2}));
  CHECK_THROWS(check_power_cycle(1));
}
