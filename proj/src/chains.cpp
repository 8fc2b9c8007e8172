#include "syrdyn/chains.hpp"

#include "syrdyn/trajectory.hpp"

#include <algorithm>
#include <map>
#include <random>

namespace syrdyn {

namespace mp = boost::multiprecision;

const char* to_string(NodeClass cls) {
  switch (cls) {
    case NodeClass::N0: return "N0";
    case NodeClass::N1: return "N1";
    case NodeClass::N2: return "N2";
  }
  return "N?";
}

NodeClass classify(const Nat& n) {
  if (n < 1) throw MapError(MapError::Kind::Domain, "node class of " + n.str() + " < 1", std::nullopt, n);
  switch (mod_floor(n, 3).convert_to<int>()) {
    case 0: return NodeClass::N0;
    case 1: return NodeClass::N1;
    default: return NodeClass::N2;
  }
}

Nat ChainHeadForm::value() const { return pow_int(3, a) * pow_int(2, b) * h - 1; }

std::string ChainHeadForm::to_string() const {
  return "3^" + std::to_string(a) + "·2^" + std::to_string(b) + "·" + h.str() + "−1";
}

ChainHeadForm decompose(const Nat& n) {
  if (n < 1 || classify(n) != NodeClass::N2) {
    throw ChainError(ChainError::Kind::NotInN2, n.str() + " is not 2 mod 3");
  }
  ChainHeadForm form;
  Nat rest = n + 1;
  form.a = 0;
  while (mod_floor(rest, 3).is_zero()) {
    rest /= 3;
    ++form.a;
  }
  form.b = mp::lsb(rest);
  form.h = rest >> form.b;
  return form;
}

StructuredPreimage structured_preimage(const Nat& n) {
  const ChainHeadForm f = decompose(n);
  return {pow_int(3, f.a - 1) * pow_int(2, f.b + 1) * f.h - 1, 2 * n};
}

Family family_of(std::uint64_t a, const Nat& h) {
  if (a < 1 || h < 1 || mp::gcd(h, Nat(6)) != 1) {
    throw ChainError(ChainError::Kind::InvalidParameters,
                     "family needs a >= 1 and h coprime to 6 (a=" + std::to_string(a) + ", h=" + h.str() + ")");
  }
  Family fam{a, h, {}};
  fam.members.reserve(a + 1);
  for (std::uint64_t j = 0; j <= a; ++j) fam.members.push_back(pow_int(3, j) * pow_int(2, a - j) * h - 1);
  const MapDescriptor t = collatz();
  for (std::uint64_t j = 0; j < a; ++j) {
    if (t.apply(fam.members[j]) != fam.members[j + 1]) {
      throw VerificationFailure("family (a=" + std::to_string(a) + ", h=" + h.str() + ") breaks at member " +
                                std::to_string(j));
    }
  }
  return fam;
}

std::optional<FamilyPosition> family_containing(const Nat& n) {
  if (n < 1) return std::nullopt;
  if (classify(n) == NodeClass::N2) {
    const ChainHeadForm f = decompose(n);
    return FamilyPosition{family_of(f.a + f.b, f.h), static_cast<std::size_t>(f.a)};
  }
  if (mp::bit_test(n, 0)) {
    const Nat up = n + 1;
    const std::uint64_t a = mp::lsb(up);
    return FamilyPosition{family_of(a, up >> a), 0};
  }
  return std::nullopt;
}

Chain chain_of(const Nat& n, std::size_t forward_links, std::size_t backward_links) {
  if (n < 1) throw MapError(MapError::Kind::Domain, "chain origin must be >= 1", std::nullopt, n);
  const MapDescriptor t = collatz();
  Chain chain;
  chain.origin = n;

  Nat v = n;
  std::optional<FamilyPosition> pos = family_containing(v);
  while (!pos) {
    chain.lead_in.push_back(v);
    v = t.apply(v);
    pos = family_containing(v);
  }
  chain.segments.push_back({pos->family, pos->index});

  auto on_chain = [&](const Family& f) {
    return std::any_of(chain.segments.begin(), chain.segments.end(),
                       [&](const ChainSegment& s) { return s.family == f; });
  };

  for (std::size_t k = 0; k < forward_links; ++k) {
    const Nat link = t.apply(chain.segments.back().family.tail());
    const Nat landing = t.apply(link);
    std::optional<FamilyPosition> next = family_containing(landing);
    if (!next) throw VerificationFailure("link " + link.str() + " does not lead into a family");
    std::size_t entry = next->index;
    if (entry >= 1 && next->family.members[entry - 1] == link) --entry;
    if (on_chain(next->family)) {
      chain.cyclic = true;
      break;
    }
    chain.links.push_back(link);
    chain.segments.push_back({std::move(next->family), entry});
    ++chain.forward_links;
  }

  for (std::size_t k = 0; k < backward_links; ++k) {
    const Nat head = chain.segments.front().family.head();
    const NodeClass cls = classify(head);
    if (cls != NodeClass::N1) {
      chain.backward_blocked = cls;
      chain.backward_blocked_node = head;
      break;
    }
    // N_1 nodes have the single preimage 2n, which ends the previous family.
    const ChainHeadForm f = decompose(2 * head);
    if (!f.is_chain_head()) throw VerificationFailure("preimage of family head " + head.str() + " is not 3^a h - 1");
    Family prev = family_of(f.a, f.h);
    if (on_chain(prev)) {
      chain.cyclic = true;
      break;
    }
    // The chain now enters the old first family through its head.
    chain.segments.front().entry_index = 0;
    chain.segments.insert(chain.segments.begin(), ChainSegment{std::move(prev), 0});
    chain.links.insert(chain.links.begin(), head);
    ++chain.origin_segment;
    ++chain.backward_links;
  }
  return chain;
}

const TreeNode* PreimageTree::find(const Nat& value) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const TreeNode& n) { return n.value == value; });
  return it == nodes.end() ? nullptr : &*it;
}

PreimageTree build_preimage_tree(const MapDescriptor& map, const Nat& root, unsigned depth) {
  if (root < 1) throw MapError(MapError::Kind::Domain, "tree root must be >= 1", std::nullopt, root);
  PreimageTree tree;
  tree.map_text = map.to_string();
  tree.modulus = map.modulus();
  tree.collatz = map.is_collatz();
  tree.root = root;
  tree.depth = depth;

  std::map<Nat, std::size_t> index;
  auto add = [&](const Nat& value, unsigned level, std::optional<Nat> parent) {
    TreeNode node;
    node.value = value;
    node.depth = level;
    node.parent = std::move(parent);
    node.residue = map.residue(value);
    if (tree.collatz) {
      node.cls = classify(value);
      if (*node.cls == NodeClass::N2) node.form = decompose(value);
    }
    index.emplace(value, tree.nodes.size());
    tree.nodes.push_back(std::move(node));
  };

  add(root, 0, std::nullopt);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].depth >= depth) continue;
    const Nat value = tree.nodes[i].value;
    const unsigned level = tree.nodes[i].depth;
    std::vector<Nat> children = map.preimage(value);
    for (const Nat& c : children) {
      if (!index.contains(c)) add(c, level + 1, value);
    }
    tree.nodes[i].children = std::move(children);
    tree.nodes[i].expanded = true;
  }
  return tree;
}

bool chain_criterion(const Integer& p, const Integer& r) {
  PxrDescriptor::validated(p, r);
  return r == p - 2 || r == 2 - p;
}

Integer two_preimage_class(const Integer& p, const Integer& r) {
  PxrDescriptor::validated(p, r);
  return mod_floor(r * mod_inverse(2 - p, p), p);
}

std::vector<FamilySample> family_sample_grid(std::uint64_t alpha_max, std::uint64_t beta_max, std::uint64_t k_max,
                                             const Integer& coprime_to) {
  std::vector<FamilySample> out;
  for (std::uint64_t alpha = 0; alpha <= alpha_max; ++alpha) {
    for (std::uint64_t beta = 1; beta <= beta_max; ++beta) {
      for (std::uint64_t k = 1; k <= k_max; ++k) {
        if (mp::gcd(Integer(k), coprime_to) == 1) out.push_back({alpha, beta, Nat(k)});
      }
    }
  }
  return out;
}

FamilyIdentityReport verify_family_identity(const Integer& p, const Integer& r,
                                            const std::vector<FamilySample>& samples) {
  const MapDescriptor v = pxr_map(p, r);
  if (!Integer(r % (p - 2)).is_zero()) {
    throw ChainError(ChainError::Kind::NotApplicable,
                     "p - 2 = " + Integer(p - 2).str() + " does not divide r = " + r.str());
  }
  FamilyIdentityReport rep{p, r, r / (p - 2), 0, 0, 0, {}};
  for (const FamilySample& s : samples) {
    if (s.beta < 1) throw ChainError(ChainError::Kind::InvalidParameters, "family samples need beta >= 1");
    const Nat node = pow_int(p, s.alpha) * pow_int(2, s.beta) * s.k - rep.l;
    if (node < 1) {
      ++rep.skipped;
      continue;
    }
    Nat expected = pow_int(p, s.alpha + 1) * pow_int(2, s.beta - 1) * s.k - rep.l;
    Nat actual = v.apply(node);
    ++rep.tested;
    if (actual == expected) {
      ++rep.satisfied;
    } else {
      rep.failures.push_back({s, node, std::move(expected), std::move(actual)});
    }
  }
  return rep;
}

std::vector<TailSample> sample_tails(const Integer& p, std::size_t count, std::uint64_t seed, std::uint64_t a_max,
                                     std::uint64_t k_max) {
  if (a_max < 1 || k_max < 1) throw std::invalid_argument("tail sampling ranges must be non-empty");
  std::mt19937_64 rng(seed);
  const Integer two_p = 2 * p;
  std::vector<TailSample> out;
  out.reserve(count);
  while (out.size() < count) {
    const std::uint64_t a = 1 + rng() % a_max;
    const std::uint64_t k = 1 + rng() % k_max;
    if (mp::gcd(Integer(k), two_p) != 1) continue;
    out.push_back({a, Nat(k)});
  }
  return out;
}

FamilyConnectionReport verify_family_connection(const Integer& p, const Integer& r,
                                                const std::vector<TailSample>& tails) {
  if (!chain_criterion(p, r)) {
    throw ChainError(ChainError::Kind::NotApplicable,
                     "families of px+r need r = p - 2 or r = 2 - p (p=" + p.str() + ", r=" + r.str() + ")");
  }
  const MapDescriptor v = pxr_map(p, r);
  FamilyConnectionReport rep{p, r, r / (p - 2), two_preimage_class(p, r), 0, 0, 0, {}};
  // r / (2 - p) = -l, so p^a k + r/(2-p) is the tail itself.
  for (const TailSample& s : tails) {
    ConnectionRecord rec;
    rec.sample = s;
    rec.tail = pow_int(p, s.a) * s.k - rep.l;
    rec.halvings_formula = two_adic_valuation(pow_int(p, s.a) * s.k + r / (2 - p));
    Nat x = rec.tail;
    while (!mp::bit_test(x, 0)) {
      x = v.apply(x);
      ++rec.halvings;
    }
    rec.landing = v.apply(x);
    rec.connected = mod_floor(rec.landing, p) == rep.target_class;
    ++rep.tested;
    if (rec.connected) ++rep.connected;
    if (rec.halvings == rec.halvings_formula) ++rep.formula_agrees;
    if (!rec.connected || rec.halvings != rec.halvings_formula) rep.failures.push_back(std::move(rec));
  }
  return rep;
}

std::vector<ClassIdentityReport> verify_general_family_identity(const MapDescriptor& map,
                                                                const std::vector<FamilySample>& samples) {
  std::vector<ClassIdentityReport> out;
  const Integer& d = map.modulus();
  for (std::size_t i = 0; i < map.branches().size(); ++i) {
    const Branch& b = map.branch(i);
    ClassIdentityReport rep;
    rep.residue = i;
    const Integer denom = b.multiplier - d;
    if (denom.is_zero() || !Integer(b.offset % denom).is_zero()) {
      out.push_back(std::move(rep));
      continue;
    }
    rep.applicable = true;
    rep.l = b.offset / denom;
    const Integer coprime_to = d * b.multiplier;
    for (const FamilySample& s : samples) {
      if (s.beta < 1 || mp::gcd(s.k, coprime_to) != 1) {
        ++rep.skipped;
        continue;
      }
      const Nat x = pow_int(b.multiplier, s.alpha) * pow_int(d, s.beta) * s.k - rep.l;
      if (x < 1 || map.residue(x) != i) {
        ++rep.skipped;
        continue;
      }
      Nat expected = pow_int(b.multiplier, s.alpha + 1) * pow_int(d, s.beta - 1) * s.k - rep.l;
      Nat actual = map.apply(x);
      ++rep.tested;
      if (actual == expected) {
        ++rep.satisfied;
      } else {
        rep.failures.push_back({s, x, std::move(expected), std::move(actual)});
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace syrdyn
