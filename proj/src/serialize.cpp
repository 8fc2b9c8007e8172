#include "syrdyn/serialize.hpp"

#include <map>
#include <set>
#include <sstream>

namespace syrdyn {

namespace {

Json strings(const std::vector<Nat>& values) {
  Json out = Json::array();
  for (const Nat& v : values) out.push_back(v.str());
  return out;
}

Json optional_string(const std::optional<Nat>& v) { return v ? Json(v->str()) : Json(nullptr); }

Json failures_json(const std::vector<IdentityFailure>& failures) {
  Json out = Json::array();
  for (const auto& f : failures) {
    out.push_back({{"alpha", f.sample.alpha},
                   {"beta", f.sample.beta},
                   {"k", f.sample.k.str()},
                   {"node", f.node.str()},
                   {"expected", f.expected.str()},
                   {"actual", f.actual.str()}});
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json to_json(const Limits& limits) {
  return {{"max_steps", std::to_string(limits.max_steps)}, {"max_value", limits.max_value.str()}};
}

Json to_json(const CycleInfo& cycle) {
  return {{"min", cycle.min_member().str()}, {"length", cycle.length()}, {"members", strings(cycle.members())}};
}

Json to_json(const DyadicRational& value) {
  Json out = {{"value", value.to_string()}};
  if (auto dec = value.to_decimal_expansion()) out["decimal"] = *dec;
  return out;
}

Json to_json(const ScaledDyadic& value) {
  Json out = {{"value", value.dyadic().to_string()}, {"scale", value.scale_string()}};
  if (value.scale() == 1) {
    if (auto dec = value.dyadic().to_decimal_expansion()) out["decimal"] = *dec;
  }
  return out;
}

Json to_json(const TrajectoryReport& report) {
  Json out;
  out["start"] = report.start.str();
  out["status"] = to_string(report.status);
  out["step_count"] = report.steps.size();
  out["steps"] = strings(report.steps);
  out["max_excursion"] = report.max_excursion.str();
  if (report.cycle) {
    out["entry_index"] = report.entry_index;
    out["cycle"] = strings(report.cycle->members());
  } else {
    out["entry_index"] = nullptr;
    out["cycle"] = nullptr;
  }
  return out;
}

Json cycles_to_json(const std::vector<CycleInfo>& cycles) {
  Json out = Json::array();
  for (const auto& c : cycles) out.push_back(to_json(c));
  return out;
}

Json partition_summary(const PartitionResult& result) {
  Json out;
  out["domain_bound"] = std::to_string(result.domain_bound);
  out["limits"] = to_json(result.limits);
  out["counts"] = {{"C", result.c_set.size()},
                   {"D1", result.d1_set.size()},
                   {"D2?", result.d2_candidates.size()}};
  out["cycles"] = cycles_to_json(result.cycles);
  out["c_set"] = strings(result.c_set);
  return out;
}

Json to_json(const PowerBoundReport& report) {
  Json out;
  out["trials"] = report.trials;
  out["max_n"] = report.max_n;
  out["seed"] = std::to_string(report.seed);
  out["comparisons"] = report.comparisons;
  out["violations"] = report.violations.size();
  auto sample = [](const PowerBoundSample& s) {
    return Json{{"n", s.n},
                {"set", strings(s.set)},
                {"set_measure", to_json(s.set_measure)},
                {"preimage_measure", to_json(s.preimage_measure)}};
  };
  if (report.worst) {
    std::ostringstream ratio;
    ratio.precision(12);
    ratio << report.worst_ratio();
    out["worst_ratio"] = ratio.str();
    out["worst"] = sample(*report.worst);
  } else {
    out["worst_ratio"] = nullptr;
    out["worst"] = nullptr;
  }
  Json violations = Json::array();
  for (const auto& v : report.violations) violations.push_back(sample(v));
  out["violation_witnesses"] = std::move(violations);
  return out;
}

Json to_json(const MeasureAssignment& assignment, const ConstructionReport& construction,
             const PowerBoundReport* power_bound) {
  const PreimageForest& f = assignment.forest;
  Json out;
  out["map"] = f.map().to_string();
  out["depth"] = f.depth();
  Json cycles = Json::array();
  for (std::size_t i = 0; i < f.cycles().size(); ++i) {
    Json c = to_json(f.cycles()[i]);
    c["index"] = i + 1;
    Json sums = Json::array();
    for (const auto& s : construction.level_sums[i]) sums.push_back(to_json(s));
    c["level_sums"] = std::move(sums);
    c["total"] = to_json(construction.cycle_totals[i]);
    cycles.push_back(std::move(c));
  }
  out["cycles"] = std::move(cycles);

  Json nodes = Json::array();
  for (const auto& [x, node] : f.nodes()) {
    nodes.push_back({{"value", x.str()},
                     {"cycle", node.cycle + 1},
                     {"level", node.level},
                     {"parent", optional_string(node.parent)},
                     {"per_cycle", to_json(assignment.per_cycle[node.cycle].at(x))},
                     {"combined", to_json(assignment.combined.at(x))}});
  }
  out["nodes"] = std::move(nodes);

  Json summary;
  summary["covered"] = f.size();
  summary["total"] = to_json(assignment.total);
  summary["construction"] = {{"ok", construction.ok()},
                             {"cycle_members", construction.cycle_members_ok},
                             {"level_one", construction.level_one_ok},
                             {"children", construction.children_ok},
                             {"positive", construction.positive_ok},
                             {"totals", construction.totals_ok}};
  summary["power_bound"] = power_bound ? to_json(*power_bound) : Json(nullptr);
  out["summary"] = std::move(summary);
  return out;
}

Json to_json(const ChainHeadForm& form) {
  return {{"a", form.a}, {"b", form.b}, {"h", form.h.str()}, {"text", form.to_string()}};
}

Json to_json(const Chain& chain) {
  Json out;
  out["origin"] = chain.origin.str();
  out["lead_in"] = strings(chain.lead_in);
  Json segments = Json::array();
  for (const auto& s : chain.segments) {
    segments.push_back({{"a", s.family.a},
                        {"h", s.family.h.str()},
                        {"entry_index", s.entry_index},
                        {"members", strings(s.family.members)}});
  }
  out["segments"] = std::move(segments);
  out["links"] = strings(chain.links);
  out["origin_segment"] = chain.origin_segment;
  out["forward_links"] = chain.forward_links;
  out["backward_links"] = chain.backward_links;
  out["cyclic"] = chain.cyclic;
  if (chain.backward_blocked) {
    out["backward_blocked"] = {{"class", to_string(*chain.backward_blocked)},
                               {"node", chain.backward_blocked_node->str()}};
  } else {
    out["backward_blocked"] = nullptr;
  }
  return out;
}

Json to_json(const PreimageTree& tree) {
  Json out;
  out["map"] = tree.map_text;
  out["root"] = tree.root.str();
  out["depth"] = tree.depth;
  Json nodes = Json::array();
  for (const auto& n : tree.nodes) {
    Json j;
    j["value"] = n.value.str();
    j["depth"] = n.depth;
    j["parent"] = optional_string(n.parent);
    j["children"] = n.expanded ? strings(n.children) : Json(nullptr);
    j["residue"] = n.residue;
    if (n.cls) j["class"] = to_string(*n.cls);
    if (n.form) j["form"] = to_json(*n.form);
    nodes.push_back(std::move(j));
  }
  out["nodes"] = std::move(nodes);
  return out;
}

Json to_json(const FamilyIdentityReport& report) {
  return {{"p", report.p.str()},
          {"r", report.r.str()},
          {"l", report.l.str()},
          {"tested", report.tested},
          {"satisfied", report.satisfied},
          {"skipped", report.skipped},
          {"failures", failures_json(report.failures)}};
}

Json to_json(const FamilyConnectionReport& report) {
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"a", f.sample.a},
                        {"k", f.sample.k.str()},
                        {"tail", f.tail.str()},
                        {"halvings", f.halvings},
                        {"halvings_formula", f.halvings_formula},
                        {"landing", f.landing.str()},
                        {"connected", f.connected}});
  }
  return {{"p", report.p.str()},
          {"r", report.r.str()},
          {"l", report.l.str()},
          {"target_class", report.target_class.str()},
          {"tested", report.tested},
          {"connected", report.connected},
          {"formula_agrees", report.formula_agrees},
          {"failures", std::move(failures)}};
}

Json to_json(const std::vector<ClassIdentityReport>& reports) {
  Json out = Json::array();
  for (const auto& r : reports) {
    Json j;
    j["residue"] = r.residue;
    j["status"] = r.applicable ? "Applicable" : "NotApplicable";
    j["l"] = r.applicable ? Json(r.l.str()) : Json(nullptr);
    j["tested"] = r.tested;
    j["satisfied"] = r.satisfied;
    j["skipped"] = r.skipped;
    j["failures"] = failures_json(r.failures);
    out.push_back(std::move(j));
  }
  return out;
}

std::string partition_csv(const PartitionResult& result) {
  std::string out = "x,class,steps_to_cycle,max_excursion\n";
  for (std::uint64_t x = 1; x <= result.domain_bound; ++x) {
    const PointOutcome& o = result.at(x);
    out += std::to_string(x);
    out += ',';
    out += to_string(o.cls);
    out += ',';
    if (o.cls != PointClass::Undetermined) out += std::to_string(o.steps);
    out += ',';
    out += o.max_excursion.str();
    out += '\n';
  }
  return out;
}

std::string scan_csv_header() { return "x,status,steps,max_excursion,cycle_min\n"; }

std::string scan_csv_row(const Nat& x, const PointOutcome& o) {
  std::string out = x.str();
  out += ',';
  out += to_string(o.status);
  out += ',';
  out += std::to_string(o.steps);
  out += ',';
  out += o.max_excursion.str();
  out += ',';
  if (o.cycle_min) out += o.cycle_min->str();
  out += '\n';
  return out;
}

std::string node_label(const Nat& n, bool collatz, std::size_t residue, const Integer& modulus) {
  if (!collatz) return n.str() + " (" + std::to_string(residue) + " mod " + modulus.str() + ")";
  const NodeClass cls = classify(n);
  if (cls == NodeClass::N2) return n.str() + " (N2, " + decompose(n).to_string() + ")";
  return n.str() + " (" + to_string(cls) + ")";
}

std::string to_dot(const PreimageTree& tree) {
  std::ostringstream os;
  os << "digraph preimage_tree {\n";
  os << "  rankdir=BT;\n";
  os << "  node [shape=box];\n";
  os << "  label=" << quote("preimage tree of " + tree.root.str() + " under " + tree.map_text + ", depth " +
                            std::to_string(tree.depth))
     << ";\n";

  // Collatz nodes sharing a family are drawn as one cluster.
  std::vector<std::pair<std::string, std::vector<const TreeNode*>>> clusters;
  std::vector<const TreeNode*> loose;
  if (tree.collatz) {
    std::map<std::pair<std::uint64_t, Nat>, std::size_t> by_family;
    for (const auto& n : tree.nodes) {
      auto pos = family_containing(n.value);
      if (!pos) {
        loose.push_back(&n);
        continue;
      }
      auto key = std::make_pair(pos->family.a, pos->family.h);
      auto [it, inserted] = by_family.emplace(key, clusters.size());
      if (inserted) {
        clusters.emplace_back("family a=" + std::to_string(key.first) + ", h=" + key.second.str(),
                              std::vector<const TreeNode*>{});
      }
      clusters[it->second].second.push_back(&n);
    }
  } else {
    for (const auto& n : tree.nodes) loose.push_back(&n);
  }

  auto declare = [&](const TreeNode& n, const char* indent) {
    os << indent << quote(n.value.str()) << " [label=" << quote(node_label(n.value, tree.collatz, n.residue, tree.modulus))
       << "];\n";
  };
  std::size_t cluster_id = 0;
  for (const auto& [name, members] : clusters) {
    if (members.size() < 2) {
      loose.push_back(members.front());
      continue;
    }
    os << "  subgraph cluster_" << cluster_id++ << " {\n";
    os << "    label=" << quote(name) << ";\n";
    for (const TreeNode* n : members) declare(*n, "    ");
    os << "  }\n";
  }
  for (const TreeNode* n : loose) declare(*n, "  ");
  for (const auto& n : tree.nodes) {
    for (const Nat& c : n.children) os << "  " << quote(c.str()) << " -> " << quote(n.value.str()) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_dot(const Chain& chain) {
  const MapDescriptor t = collatz();
  std::ostringstream os;
  os << "digraph chain {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box];\n";
  os << "  label=" << quote("chain through " + chain.origin.str() + (chain.cyclic ? " (cyclic)" : "")) << ";\n";

  std::set<Nat> declared;
  std::vector<Nat> order;
  auto declare = [&](const Nat& n, const char* indent) {
    if (!declared.insert(n).second) return;
    order.push_back(n);
    os << indent << quote(n.str()) << " [label=" << quote(node_label(n, true, 0, 2)) << "];\n";
  };
  for (std::size_t s = 0; s < chain.segments.size(); ++s) {
    const ChainSegment& seg = chain.segments[s];
    os << "  subgraph cluster_" << s << " {\n";
    os << "    label=" << quote("family a=" + std::to_string(seg.family.a) + ", h=" + seg.family.h.str()) << ";\n";
    for (std::size_t j = seg.entry_index; j < seg.family.members.size(); ++j) declare(seg.family.members[j], "    ");
    os << "  }\n";
  }
  for (const Nat& n : chain.links) declare(n, "  ");
  for (const Nat& n : chain.lead_in) declare(n, "  ");
  // Edges follow the map among the drawn nodes.
  for (const Nat& n : order) {
    Nat image = t.apply(n);
    if (declared.contains(image)) os << "  " << quote(n.str()) << " -> " << quote(image.str()) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace syrdyn
