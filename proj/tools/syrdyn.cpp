// syrdyn: command-line front end.
//
// Exit codes: 0 success, 1 usage or validation error, 2 a limit was hit
// (the report is still written), 3 an internal verification failed.

#include "syrdyn/chains.hpp"
#include "syrdyn/maps.hpp"
#include "syrdyn/measure.hpp"
#include "syrdyn/parallel.hpp"
#include "syrdyn/partition.hpp"
#include "syrdyn/serialize.hpp"
#include "syrdyn/trajectory.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

using namespace syrdyn;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kLimit = 2;
constexpr int kVerification = 3;
constexpr std::uint64_t kDefaultSeed = 20240607;

struct Common {
  std::string output;
  std::string format;
  std::uint64_t max_steps = 100'000;
  std::string max_value = "10^40";
  unsigned threads = 0;

  Limits limits() const {
    Limits l;
    l.max_steps = max_steps;
    l.max_value = parse_integer(max_value);
    l.check();
    return l;
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void add_limits(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-steps", c.max_steps, "Maximum map applications per orbit")->capture_default_str();
  cmd->add_option("--max-value", c.max_value, "Orbit value ceiling (e.g. 1e9, 10^40)")->capture_default_str();
}

void add_output(CLI::App* cmd, Common& c, std::vector<std::string> formats) {
  cmd->add_option("-o,--output", c.output, "Output file (stdout when omitted)");
  c.format = formats.front();
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
}

Nat parse_nat(const std::string& text, const char* what) {
  Integer v = parse_integer(text);
  if (v < 1) throw MapError(MapError::Kind::Domain, std::string(what) + " must be >= 1", std::nullopt, v);
  return v;
}

std::uint64_t to_u64(const Nat& v, const char* what) {
  if (v > std::numeric_limits<std::uint64_t>::max()) {
    throw std::invalid_argument(std::string(what) + " does not fit in 64 bits");
  }
  return v.convert_to<std::uint64_t>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact orbit, preimage and measure analysis of Syracuse-type maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "syrdyn 0.1.0");

  Common common;
  std::string map_text = "collatz";
  std::string start_text;
  std::uint64_t bound = 10'000;
  unsigned depth = 10;
  std::uint64_t cycle_bound = 1000;
  std::uint64_t trials = 1000;
  unsigned max_n = 10;
  std::uint64_t seed = kDefaultSeed;
  std::size_t links = 1;
  std::size_t forward = 0;
  std::size_t backward = 0;
  std::string p_text;
  std::string r_text;
  bool verify = false;
  std::size_t tail_count = 500;
  std::uint64_t grid = 4;
  std::uint64_t k_max = 50;
  std::string summary_path;
  std::string from_text = "1";
  std::string to_text;

  auto* traj = app.add_subcommand("traj", "Orbit of one starting value");
  traj->add_option("map", map_text, "Map descriptor")->required();
  traj->add_option("n", start_text, "Starting value")->required();
  add_limits(traj, common);
  add_output(traj, common, {"json"});

  auto* cycles = app.add_subcommand("cycles", "Cycles reached from 1..bound");
  cycles->add_option("map", map_text, "Map descriptor")->required();
  cycles->add_option("--bound", bound, "Largest starting value")->capture_default_str();
  cycles->add_option("--threads", common.threads, "Worker count (SYRDYN_THREADS overrides)");
  add_limits(cycles, common);
  add_output(cycles, common, {"json"});

  auto* part = app.add_subcommand("partition", "Split 1..bound into C, D1 and D2 candidates");
  part->add_option("map", map_text, "Map descriptor")->required();
  part->add_option("--bound", bound, "Domain bound")->capture_default_str();
  part->add_option("--summary", summary_path, "Also write the JSON summary to this file");
  add_limits(part, common);
  add_output(part, common, {"csv", "json"});

  auto* measure = app.add_subcommand("measure", "Finite measure on the preimage forest of the cycles");
  measure->add_option("map", map_text, "Map descriptor")->required();
  measure->add_option("--depth", depth, "Forest depth")->capture_default_str();
  measure->add_option("--cycle-bound", cycle_bound, "Cycle search bound")->capture_default_str();
  measure->add_option("--trials", trials, "Random sets for the power-bound check")->capture_default_str();
  measure->add_option("--max-n", max_n, "Largest preimage power checked")->capture_default_str();
  measure->add_option("--seed", seed, "Random seed")->capture_default_str();
  measure->add_option("--threads", common.threads, "Worker count for the cycle search");
  add_limits(measure, common);
  add_output(measure, common, {"json"});

  auto* chains = app.add_subcommand("chains", "Collatz family chain through n");
  chains->add_option("n", start_text, "Node on the chain")->required();
  chains->add_option("--links", links, "Links to follow in each direction")->capture_default_str();
  chains->add_option("--forward", forward, "Forward links (overrides --links)");
  chains->add_option("--backward", backward, "Backward links (overrides --links)");
  add_output(chains, common, {"json", "dot"});

  auto* tree = app.add_subcommand("tree", "Truncated preimage tree");
  tree->add_option("map", map_text, "Map descriptor")->required();
  tree->add_option("root", start_text, "Root value")->required();
  tree->add_option("--depth", depth, "Tree depth")->capture_default_str();
  add_output(tree, common, {"json", "dot"});

  auto* crit = app.add_subcommand("criterion", "Chain-structure criterion for px+r maps");
  crit->add_option("p", p_text, "Odd multiplier p >= 3")->required();
  crit->add_option("r", r_text, "Odd offset with |r| < p")->required();
  crit->add_flag("--verify", verify, "Run the family identity and connection checks");
  crit->add_option("--tails", tail_count, "Sampled family tails for the connection check")->capture_default_str();
  crit->add_option("--grid", grid, "Largest alpha and beta in the identity check")->capture_default_str();
  crit->add_option("--k-max", k_max, "Largest k in the identity check")->capture_default_str();
  crit->add_option("--seed", seed, "Random seed")->capture_default_str();
  add_output(crit, common, {"json"});

  auto* scan = app.add_subcommand("scan", "Per-point status over a range of starts");
  scan->add_option("map", map_text, "Map descriptor")->required();
  scan->add_option("--from", from_text, "First start")->capture_default_str();
  scan->add_option("--to", to_text, "Last start")->required();
  scan->add_option("--threads", common.threads, "Worker count (SYRDYN_THREADS overrides)");
  add_limits(scan, common);
  add_output(scan, common, {"csv"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*traj) {
      const MapDescriptor map = parse_descriptor(map_text);
      const TrajectoryReport rep = iterate(map, parse_nat(start_text, "start"), common.limits());
      emit(common.output, dump(to_json(rep)));
      return rep.status == TrajectoryStatus::EnteredCycle ? kOk : kLimit;
    }
    if (*cycles) {
      const MapDescriptor map = parse_descriptor(map_text);
      const auto found = find_cycles(map, bound, common.limits(), resolve_threads(common.threads));
      Json out;
      out["map"] = map.to_string();
      out["bound"] = std::to_string(bound);
      out["limits"] = to_json(common.limits());
      out["cycles"] = cycles_to_json(found);
      emit(common.output, dump(out));
      return kOk;
    }
    if (*part) {
      const MapDescriptor map = parse_descriptor(map_text);
      const PartitionResult res = partition(map, bound, common.limits());
      Json summary = partition_summary(res);
      summary["map"] = map.to_string();
      if (common.format == "json") {
        emit(common.output, dump(summary));
      } else {
        emit(common.output, partition_csv(res));
      }
      if (!summary_path.empty()) emit(summary_path, dump(summary));
      return res.d2_candidates.empty() ? kOk : kLimit;
    }
    if (*measure) {
      const MapDescriptor map = parse_descriptor(map_text);
      auto found = find_cycles(map, cycle_bound, common.limits(), resolve_threads(common.threads));
      MeasureAssignment assignment = assign_measure(build_forest(map, std::move(found), depth));
      const ConstructionReport construction = verify_construction(assignment);
      const PowerBoundReport bound_report = check_power_bound(assignment, trials, max_n, seed);
      emit(common.output, dump(to_json(assignment, construction, &bound_report)));
      return construction.ok() && bound_report.ok() ? kOk : kVerification;
    }
    if (*chains) {
      const std::size_t fwd = chains->count("--forward") > 0 ? forward : links;
      const std::size_t bwd = chains->count("--backward") > 0 ? backward : links;
      const Chain chain = chain_of(parse_nat(start_text, "chain origin"), fwd, bwd);
      emit(common.output, common.format == "dot" ? to_dot(chain) : dump(to_json(chain)));
      return kOk;
    }
    if (*tree) {
      const MapDescriptor map = parse_descriptor(map_text);
      const PreimageTree t = build_preimage_tree(map, parse_nat(start_text, "root"), depth);
      emit(common.output, common.format == "dot" ? to_dot(t) : dump(to_json(t)));
      return kOk;
    }
    if (*crit) {
      const Integer p = parse_integer(p_text);
      const Integer r = parse_integer(r_text);
      const bool chained = chain_criterion(p, r);
      Json out;
      out["p"] = p.str();
      out["r"] = r.str();
      out["map"] = pxr_map(p, r).to_string();
      out["chain_structure"] = chained;
      out["two_preimage_class"] = two_preimage_class(p, r).str();
      bool verified = true;
      if (verify) {
        try {
          const auto rep = verify_family_identity(p, r, family_sample_grid(grid, grid, k_max, 2 * p));
          out["family_identity"] = to_json(rep);
          verified = verified && rep.failures.empty();
        } catch (const ChainError& e) {
          if (e.kind() != ChainError::Kind::NotApplicable) throw;
          out["family_identity"] = {{"status", "NotApplicable"}, {"reason", e.what()}};
        }
        if (chained) {
          const auto rep = verify_family_connection(p, r, sample_tails(p, tail_count, seed));
          out["family_connection"] = to_json(rep);
          verified = verified && rep.ok();
        } else {
          out["family_connection"] = {{"status", "NotApplicable"}};
        }
      }
      std::cerr << "pxr p=" << p << " r=" << r << ": "
                << (chained ? "chain structure (r = p - 2 or r = 2 - p)" : "no chain structure") << "\n";
      emit(common.output, dump(out));
      return verified ? kOk : kVerification;
    }
    if (*scan) {
      const MapDescriptor map = parse_descriptor(map_text);
      const Limits limits = common.limits();
      const std::uint64_t lo = to_u64(parse_nat(from_text, "--from"), "--from");
      const std::uint64_t hi = to_u64(parse_nat(to_text, "--to"), "--to");
      if (hi < lo) throw std::invalid_argument("--to must not be below --from");
      const unsigned threads = resolve_threads(common.threads);
      std::vector<std::string> blocks(threads);
      std::vector<std::uint64_t> limited(threads, 0);
      for_each_block(lo, hi, threads, [&](std::uint64_t a, std::uint64_t b, std::size_t idx) {
        std::string rows;
        for (std::uint64_t x = a;; ++x) {
          const PointOutcome o = classify_by_iteration(map, Nat(x), limits);
          if (o.cls == PointClass::Undetermined) ++limited[idx];
          rows += scan_csv_row(Nat(x), o);
          if (x == b) break;
        }
        blocks[idx] = std::move(rows);
      });
      std::string text = scan_csv_header();
      std::uint64_t hits = 0;
      for (std::size_t i = 0; i < blocks.size(); ++i) {
        text += blocks[i];
        hits += limited[i];
      }
      emit(common.output, text);
      return hits == 0 ? kOk : kLimit;
    }
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const MapError& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
