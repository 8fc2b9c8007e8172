#include "syrdyn/partition.hpp"

#include <algorithm>
#include <unordered_map>

namespace syrdyn {

const char* to_string(PointClass cls) {
  switch (cls) {
    case PointClass::Cycle: return "C";
    case PointClass::Preperiodic: return "D1";
    case PointClass::Undetermined: return "D2?";
  }
  return "?";
}

PointOutcome classify_by_iteration(const MapDescriptor& map, const Nat& x, const Limits& limits) {
  TrajectoryReport rep = iterate(map, x, limits);
  PointOutcome out;
  out.status = rep.status;
  out.max_excursion = rep.max_excursion;
  switch (rep.status) {
    case TrajectoryStatus::EnteredCycle:
      out.cls = rep.entry_index == 0 ? PointClass::Cycle : PointClass::Preperiodic;
      out.steps = rep.entry_index;
      out.cycle_min = rep.cycle->min_member();
      break;
    case TrajectoryStatus::HitValueLimit:
      out.steps = rep.steps.size() - 1;
      break;
    case TrajectoryStatus::HitStepLimit:
      out.steps = limits.max_steps;
      break;
  }
  return out;
}

namespace {

class Classifier {
 public:
  Classifier(const MapDescriptor& map, std::uint64_t bound, const Limits& limits)
      : map_(map), bound_(bound), limits_(limits), memo_(bound) {}

  void run() {
    for (std::uint64_t x = 1; x <= bound_; ++x) {
      if (!memo_[x - 1]) classify(x);
    }
  }

  PartitionResult finish() && {
    PartitionResult out;
    out.domain_bound = bound_;
    out.limits = limits_;
    out.outcomes.reserve(bound_);
    for (std::uint64_t x = 1; x <= bound_; ++x) {
      PointOutcome& o = *memo_[x - 1];
      switch (o.cls) {
        case PointClass::Cycle: out.c_set.emplace_back(x); break;
        case PointClass::Preperiodic: out.d1_set.emplace_back(x); break;
        case PointClass::Undetermined: out.d2_candidates.emplace_back(x); break;
      }
      out.outcomes.push_back(std::move(o));
    }
    out.cycles = std::move(cycles_);
    std::sort(out.cycles.begin(), out.cycles.end());
    return out;
  }

 private:
  std::uint64_t detection_steps(const PointOutcome& o) const {
    return o.steps + cycles_[cycle_index_.at(*o.cycle_min)].length();
  }

  const PointOutcome* known(const Nat& v) const {
    if (v <= bound_) {
      const auto& m = memo_[v.convert_to<std::uint64_t>() - 1];
      if (m) return &*m;
    }
    return nullptr;
  }

  std::size_t register_cycle(std::vector<Nat> orbit) {
    CycleInfo cycle = CycleInfo::from_orbit(std::move(orbit));
    const std::size_t id = cycles_.size();
    for (const Nat& m : cycle.members()) cycle_index_.emplace(m, id);
    cycle_min_index_.emplace(cycle.min_member(), id);
    cycles_.push_back(std::move(cycle));
    return id;
  }

  void classify(std::uint64_t x) {
    std::vector<Nat> walk{Nat(x)};
    std::unordered_map<Nat, std::size_t> position{{walk[0], 0}};
    PointOutcome result;  // outcome for x
    bool ok = false;       // false: fall back to plain iteration
    std::size_t own_cycle_entry = 0;
    bool own_cycle = false;

    for (;;) {
      const std::size_t i = walk.size() - 1;
      const Nat& cur = walk[i];
      if (cur > limits_.max_value) {
        result.status = TrajectoryStatus::HitValueLimit;
        result.steps = i;
        ok = true;
        break;
      }
      if (i > 0) {
        PointOutcome hit;
        bool have = false;
        if (auto c = cycle_index_.find(cur); c != cycle_index_.end()) {
          const CycleInfo& cyc = cycles_[c->second];
          hit = PointOutcome{PointClass::Cycle, TrajectoryStatus::EnteredCycle, 0, cyc.max_member(), cyc.min_member()};
          have = true;
        } else if (const PointOutcome* m = known(cur)) {
          hit = *m;
          have = true;
        }
        if (have) {
          ok = combine(i, hit, result);
          break;
        }
      }
      if (i == limits_.max_steps) {
        result.status = TrajectoryStatus::HitStepLimit;
        result.steps = limits_.max_steps;
        ok = true;
        break;
      }
      Nat next = map_.apply(cur);
      if (auto seen = position.find(next); seen != position.end()) {
        own_cycle = true;
        own_cycle_entry = seen->second;
        const std::size_t id = register_cycle(
            std::vector<Nat>(walk.begin() + static_cast<std::ptrdiff_t>(own_cycle_entry), walk.end()));
        result.status = TrajectoryStatus::EnteredCycle;
        result.steps = own_cycle_entry;
        result.cycle_min = cycles_[id].min_member();
        ok = true;
        break;
      }
      position.emplace(next, walk.size());
      walk.push_back(std::move(next));
    }

    if (!ok) {
      PointOutcome direct = classify_by_iteration(map_, Nat(x), limits_);
      if (direct.cycle_min && !cycle_min_index_.contains(*direct.cycle_min)) {
        register_cycle(iterate(map_, *direct.cycle_min, limits_).cycle->members());
      }
      memo_[x - 1] = std::move(direct);
      return;
    }

    // Suffix maxima of the walk, combined with the excursion of whatever
    // the walk ran into.
    std::vector<Nat> suffix_max(walk.size());
    for (std::size_t k = walk.size(); k-- > 0;) {
      suffix_max[k] = (k + 1 < walk.size() && suffix_max[k + 1] > walk[k]) ? suffix_max[k + 1] : walk[k];
    }
    const Nat tail_excursion = result.max_excursion;  // zero unless set by combine()

    auto excursion_from = [&](std::size_t k) { return tail_excursion > suffix_max[k] ? tail_excursion : suffix_max[k]; };

    if (result.status == TrajectoryStatus::HitStepLimit) {
      result.cls = PointClass::Undetermined;
      result.max_excursion = excursion_from(0);
      memo_[x - 1] = std::move(result);
      return;
    }

    for (std::size_t k = 0; k < walk.size(); ++k) {
      const Nat& v = walk[k];
      if (v > bound_ || memo_[v.convert_to<std::uint64_t>() - 1]) continue;
      PointOutcome o;
      o.status = result.status;
      if (result.status == TrajectoryStatus::HitValueLimit) {
        if (k > result.steps) continue;
        o.cls = PointClass::Undetermined;
        o.steps = result.steps - k;
        o.max_excursion = excursion_from(k);
      } else if (own_cycle && k >= own_cycle_entry) {
        const CycleInfo& cyc = cycles_[cycle_index_.at(v)];
        o.cls = PointClass::Cycle;
        o.steps = 0;
        o.max_excursion = cyc.max_member();
        o.cycle_min = cyc.min_member();
      } else {
        o.cls = PointClass::Preperiodic;
        o.steps = result.steps - k;
        o.max_excursion = excursion_from(k);
        o.cycle_min = result.cycle_min;
      }
      memo_[v.convert_to<std::uint64_t>() - 1] = std::move(o);
    }
  }

  // Extends a known outcome at walk position i back to the walk's start.
  // Returns false when the start would run out of steps first; that case is
  // left to plain iteration.
  bool combine(std::size_t i, const PointOutcome& hit, PointOutcome& result) const {
    switch (hit.status) {
      case TrajectoryStatus::EnteredCycle:
        if (i + detection_steps(hit) > limits_.max_steps) return false;
        result.status = TrajectoryStatus::EnteredCycle;
        result.steps = i + hit.steps;
        result.cycle_min = hit.cycle_min;
        result.max_excursion = hit.max_excursion;
        return true;
      case TrajectoryStatus::HitValueLimit:
        if (i + hit.steps > limits_.max_steps) return false;
        result.status = TrajectoryStatus::HitValueLimit;
        result.steps = i + hit.steps;
        result.max_excursion = hit.max_excursion;
        return true;
      case TrajectoryStatus::HitStepLimit:
        return false;
    }
    return false;
  }

  const MapDescriptor& map_;
  std::uint64_t bound_;
  const Limits& limits_;
  std::vector<std::optional<PointOutcome>> memo_;
  std::vector<CycleInfo> cycles_;
  std::unordered_map<Nat, std::size_t> cycle_index_;
  std::unordered_map<Nat, std::size_t> cycle_min_index_;
};

}  // namespace

PartitionResult partition(const MapDescriptor& map, std::uint64_t domain_bound, const Limits& limits) {
  if (domain_bound < 1) throw std::invalid_argument("domain_bound must be >= 1");
  limits.check();
  Classifier classifier(map, domain_bound, limits);
  classifier.run();
  return std::move(classifier).finish();
}

}  // namespace syrdyn
