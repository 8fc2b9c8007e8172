#pragma once

// Report formats. JSON keys keep insertion order and every integer is a
// decimal string, since orbit values routinely exceed 64 bits.

#include "syrdyn/chains.hpp"
#include "syrdyn/measure.hpp"
#include "syrdyn/partition.hpp"
#include "syrdyn/trajectory.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace syrdyn {

using Json = nlohmann::ordered_json;

Json to_json(const Limits& limits);
Json to_json(const CycleInfo& cycle);
Json to_json(const DyadicRational& value);
/// {"value": "num/2^e", "scale": "1/N"} plus "decimal" when exactly expressible.
Json to_json(const ScaledDyadic& value);
Json to_json(const TrajectoryReport& report);
Json cycles_to_json(const std::vector<CycleInfo>& cycles);
Json partition_summary(const PartitionResult& result);
Json to_json(const MeasureAssignment& assignment, const ConstructionReport& construction,
             const PowerBoundReport* power_bound);
Json to_json(const PowerBoundReport& report);
Json to_json(const ChainHeadForm& form);
Json to_json(const Chain& chain);
Json to_json(const PreimageTree& tree);
Json to_json(const FamilyIdentityReport& report);
Json to_json(const FamilyConnectionReport& report);
Json to_json(const std::vector<ClassIdentityReport>& reports);

/// Header "x,class,steps_to_cycle,max_excursion"; steps_to_cycle is empty for D2 candidates.
std::string partition_csv(const PartitionResult& result);

/// Header "x,status,steps,max_excursion,cycle_min".
std::string scan_csv_header();
std::string scan_csv_row(const Nat& x, const PointOutcome& outcome);

/// Node label "n (class, 3^a·2^b·h−1)" for Collatz N_2 nodes.
std::string node_label(const Nat& n, bool collatz, std::size_t residue, const Integer& modulus);

std::string to_dot(const PreimageTree& tree);
std::string to_dot(const Chain& chain);

}  // namespace syrdyn
