#include "syrdyn/measure.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace syrdyn {

const ForestNode* PreimageForest::find(const Nat& value) const {
  auto it = nodes_.find(value);
  return it == nodes_.end() ? nullptr : &it->second;
}

std::vector<Nat> PreimageForest::preimage_within(const std::vector<Nat>& set) const {
  std::set<Nat> out;
  for (const Nat& y : set) {
    for (Nat& x : map_.preimage(y)) {
      if (covers(x)) out.insert(std::move(x));
    }
  }
  return {out.begin(), out.end()};
}

PreimageForest build_forest(const MapDescriptor& map, std::vector<CycleInfo> cycles, unsigned depth) {
  PreimageForest forest(map);
  forest.depth_ = depth;
  std::set<Nat> on_cycles;
  for (const CycleInfo& c : cycles) {
    if (!verify_cycle(map, c)) {
      throw ForestError(ForestError::Kind::InvalidCycle,
                        "cycle starting at " + c.min_member().str() + " is not a cycle of " + map.to_string());
    }
    for (const Nat& m : c.members()) {
      if (!on_cycles.insert(m).second) {
        throw ForestError(ForestError::Kind::OverlappingCycles, "cycles share the member " + m.str());
      }
    }
  }
  forest.cycles_ = std::move(cycles);

  for (std::size_t ci = 0; ci < forest.cycles_.size(); ++ci) {
    const CycleInfo& cycle = forest.cycles_[ci];
    auto& levels = forest.levels_.emplace_back();
    auto& level0 = levels.emplace_back(cycle.members());
    std::sort(level0.begin(), level0.end());
    for (const Nat& m : level0) forest.nodes_.emplace(m, ForestNode{m, ci, 0, std::nullopt, {}});

    for (unsigned level = 1; level <= depth; ++level) {
      std::vector<Nat> next;
      for (const Nat& parent : levels[level - 1]) {
        ForestNode& pnode = forest.nodes_.at(parent);
        for (Nat& x : map.preimage(parent)) {
          // Only cycle members can meet an already placed node: images are unique.
          if (on_cycles.contains(x)) continue;
          pnode.children.push_back(x);
          next.push_back(std::move(x));
        }
      }
      std::sort(next.begin(), next.end());
      for (const Nat& x : next) {
        forest.nodes_.emplace(x, ForestNode{x, ci, level, map.apply(x), {}});
      }
      if (next.empty()) break;
      levels.push_back(std::move(next));
    }
    while (levels.size() < static_cast<std::size_t>(depth) + 1) levels.emplace_back();
  }
  return forest;
}

ScaledDyadic MeasureAssignment::value(const Nat& x) const {
  auto it = combined.find(x);
  return it == combined.end() ? ScaledDyadic{} : it->second;
}

MeasureAssignment assign_measure(PreimageForest forest) {
  MeasureAssignment out{std::move(forest), {}, {}, {}};
  const PreimageForest& f = out.forest;
  for (std::size_t ci = 0; ci < f.cycles().size(); ++ci) {
    auto& local = out.per_cycle.emplace_back();
    const auto& levels = f.levels(ci);
    const Integer cycle_length = f.cycles()[ci].length();

    const ScaledDyadic member_value = ScaledDyadic::ratio(DyadicRational::inverse_power_of_two(1), cycle_length);
    for (const Nat& m : levels[0]) local.emplace(m, member_value);

    if (levels.size() > 1) {
      std::uint64_t j = 1;
      for (const Nat& x : levels[1]) local.emplace(x, ScaledDyadic(DyadicRational::inverse_power_of_two(j++ + 3)));
    }
    for (std::size_t level = 2; level < levels.size(); ++level) {
      for (const Nat& parent : levels[level - 1]) {
        const ScaledDyadic parent_value = local.at(parent);
        std::uint64_t t = 1;
        for (const Nat& child : f.find(parent)->children) local.emplace(child, parent_value.scaled_down(t++ + 1));
      }
    }

    const std::uint64_t weight_exponent = ci + 2;  // 2^(-i-1) with i = ci + 1
    for (const auto& [x, v] : local) {
      ScaledDyadic w = v.scaled_down(weight_exponent);
      out.total += w;
      out.combined.emplace(x, std::move(w));
    }
  }
  return out;
}

ScaledDyadic measure_of(const MeasureAssignment& assignment, const std::vector<Nat>& set) {
  std::set<Nat> unique(set.begin(), set.end());
  ScaledDyadic sum;
  for (const Nat& x : unique) sum += assignment.value(x);
  return sum;
}

ConstructionReport verify_construction(const MeasureAssignment& assignment) {
  ConstructionReport rep;
  const PreimageForest& f = assignment.forest;
  const ScaledDyadic one(DyadicRational(1));
  const ScaledDyadic half(DyadicRational::inverse_power_of_two(1));
  const ScaledDyadic quarter(DyadicRational::inverse_power_of_two(2));
  for (std::size_t ci = 0; ci < f.cycles().size(); ++ci) {
    const auto& local = assignment.per_cycle[ci];
    const auto& levels = f.levels(ci);
    auto& sums = rep.level_sums.emplace_back();
    ScaledDyadic total;
    for (const auto& level : levels) {
      ScaledDyadic s;
      for (const Nat& x : level) {
        const ScaledDyadic& v = local.at(x);
        if (v.is_zero()) rep.positive_ok = false;
        s += v;
      }
      total += s;
      sums.push_back(std::move(s));
    }
    const Integer n = f.cycles()[ci].length();
    const ScaledDyadic member = ScaledDyadic::ratio(DyadicRational::inverse_power_of_two(1), n);
    for (const Nat& m : levels[0]) {
      if (local.at(m) != member) rep.cycle_members_ok = false;
    }
    if (sums[0] != half) rep.cycle_members_ok = false;
    if (sums.size() > 1 && sums[1] > quarter) rep.level_one_ok = false;
    for (std::size_t level = 1; level < levels.size(); ++level) {
      for (const Nat& x : levels[level]) {
        ScaledDyadic children;
        for (const Nat& c : f.find(x)->children) children += local.at(c);
        if (children > local.at(x).scaled_down(1)) rep.children_ok = false;
      }
    }
    if (total > one) rep.totals_ok = false;
    rep.cycle_totals.push_back(std::move(total));
  }
  if (assignment.total > one) rep.totals_ok = false;
  return rep;
}

double PowerBoundReport::worst_ratio() const {
  if (!worst || worst->set_measure.is_zero()) return 0.0;
  return worst->preimage_measure.to_double() / worst->set_measure.to_double();
}

PowerBoundSample power_bound_sample(const MeasureAssignment& assignment, std::vector<Nat> set, unsigned n) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  std::vector<Nat> pre = set;
  for (unsigned k = 0; k < n; ++k) pre = assignment.forest.preimage_within(pre);
  PowerBoundSample s;
  s.n = n;
  s.set_measure = measure_of(assignment, set);
  s.preimage_measure = measure_of(assignment, pre);
  s.set = std::move(set);
  return s;
}

namespace {

std::vector<Nat> sample_subset(const std::vector<Nat>& nodes, std::uint64_t trial, std::mt19937_64& rng) {
  std::vector<Nat> set;
  const std::uint64_t n = nodes.size();
  switch (trial % 3) {
    case 0:
      set.push_back(nodes[rng() % n]);
      break;
    case 1: {
      const std::uint64_t k = std::min<std::uint64_t>(n, 2 + rng() % 4);
      std::set<std::uint64_t> picked;
      while (picked.size() < k) picked.insert(rng() % n);
      for (auto idx : picked) set.push_back(nodes[idx]);
      break;
    }
    default:
      for (const Nat& x : nodes) {
        if ((rng() & 1U) != 0) set.push_back(x);
      }
      if (set.empty()) set.push_back(nodes[rng() % n]);
      break;
  }
  return set;
}

}  // namespace

PowerBoundReport check_power_bound(const MeasureAssignment& assignment, std::uint64_t trials, unsigned max_n,
                                   std::uint64_t seed) {
  if (max_n > assignment.forest.depth()) {
    throw ForestError(ForestError::Kind::DepthExceeded, "max_n " + std::to_string(max_n) + " exceeds forest depth " +
                                                            std::to_string(assignment.forest.depth()));
  }
  PowerBoundReport rep;
  rep.trials = trials;
  rep.max_n = max_n;
  rep.seed = seed;

  std::vector<Nat> nodes;
  nodes.reserve(assignment.forest.size());
  for (const auto& [x, node] : assignment.forest.nodes()) nodes.push_back(x);
  if (nodes.empty()) return rep;

  std::mt19937_64 rng(seed);
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::vector<Nat> set = sample_subset(nodes, trial, rng);
    const ScaledDyadic set_measure = measure_of(assignment, set);
    const ScaledDyadic bound = set_measure + set_measure;
    std::vector<Nat> pre = set;
    for (unsigned n = 1; n <= max_n; ++n) {
      pre = assignment.forest.preimage_within(pre);
      ScaledDyadic pre_measure = measure_of(assignment, pre);
      ++rep.comparisons;
      const bool violated = pre_measure > bound;
      const bool worse = !rep.worst || pre_measure * rep.worst->set_measure > rep.worst->preimage_measure * set_measure;
      if (violated || worse) {
        PowerBoundSample s{set, n, set_measure, std::move(pre_measure)};
        if (violated) rep.violations.push_back(s);
        if (worse) rep.worst = std::move(s);
      }
    }
  }
  return rep;
}

}  // namespace syrdyn
