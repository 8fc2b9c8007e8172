#pragma once

// Residue-class structure of the Collatz preimage graph and its px+r
// generalization.
//
// Collatz facts used throughout, with N_i = { n : n = i (mod 3) }:
//   V^-1(3q)   = {6q}
//   V^-1(3q+1) = {6q+2}
//   V^-1(3q+2) = {2q+1, 6q+4}
// Every N_2 node is 3^a 2^b h - 1 (a >= 1, b >= 0, gcd(h, 6) = 1), and the
// family 2^a h - 1 -> 3 2^(a-1) h - 1 -> ... -> 3^a h - 1 is an orbit segment.

#include "syrdyn/maps.hpp"
#include "syrdyn/numeric.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace syrdyn {

class ChainError : public std::invalid_argument {
 public:
  enum class Kind { NotInN2, InvalidParameters, NotApplicable };
  ChainError(Kind kind, const std::string& message) : std::invalid_argument(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class NodeClass { N0, N1, N2 };

const char* to_string(NodeClass cls);

NodeClass classify(const Nat& n);

/// n = 3^a 2^b h - 1.
struct ChainHeadForm {
  std::uint64_t a = 1;
  std::uint64_t b = 0;
  Nat h{1};

  Nat value() const;
  /// b = 0: the form 3^a h - 1 that ends a family.
  bool is_chain_head() const { return b == 0; }
  /// "3^a·2^b·h−1"
  std::string to_string() const;

  friend bool operator==(const ChainHeadForm&, const ChainHeadForm&) = default;
};

/// Throws ChainError(NotInN2) unless n = 2 (mod 3).
ChainHeadForm decompose(const Nat& n);

/// The two Collatz preimages of an N_2 node in decomposed coordinates.
struct StructuredPreimage {
  Nat odd_branch;   // 3^(a-1) 2^(b+1) h - 1
  Nat even_branch;  // 2n
};

StructuredPreimage structured_preimage(const Nat& n);

/// Members 3^j 2^(a-j) h - 1 for j = 0..a; each maps to the next under Collatz.
struct Family {
  std::uint64_t a = 1;
  Nat h{1};
  std::vector<Nat> members;

  const Nat& head() const { return members.front(); }
  const Nat& tail() const { return members.back(); }

  friend bool operator==(const Family& x, const Family& y) { return x.a == y.a && x.h == y.h; }
};

/// Throws ChainError(InvalidParameters) for a < 1 or gcd(h, 6) != 1.
Family family_of(std::uint64_t a, const Nat& h);

struct FamilyPosition {
  Family family;
  std::size_t index = 0;
};

/// The family having n as a member: N_2 nodes via decompose(), odd nodes as
/// family heads. Even N_0 / N_1 nodes belong to no family.
std::optional<FamilyPosition> family_containing(const Nat& n);

struct ChainSegment {
  Family family;
  /// The chain runs through members[entry_index..a].
  std::size_t entry_index = 0;
};

/// Families joined by N_1 link nodes, in forward (orbit) order.
struct Chain {
  Nat origin;
  /// Orbit values from `origin` preceding its first family node.
  std::vector<Nat> lead_in;
  std::vector<ChainSegment> segments;
  /// links[k] = V(tail of segments[k]), the N_1 node joining segments k and k+1.
  std::vector<Nat> links;
  /// Segment reached first from `origin`.
  std::size_t origin_segment = 0;
  std::size_t forward_links = 0;
  std::size_t backward_links = 0;
  /// Extension ran into a family already on the chain (the {1, 2} cycle).
  bool cyclic = false;
  /// Backward extension stopped at a family head outside N_1.
  std::optional<NodeClass> backward_blocked;
  std::optional<Nat> backward_blocked_node;
};

Chain chain_of(const Nat& n, std::size_t forward_links, std::size_t backward_links);
inline Chain chain_of(const Nat& n, std::size_t links) { return chain_of(n, links, links); }

struct TreeNode {
  Nat value;
  unsigned depth = 0;
  std::optional<Nat> parent;
  /// Exact preimage set when expanded; children already in the tree appear
  /// here but are not expanded again.
  std::vector<Nat> children;
  bool expanded = false;
  std::size_t residue = 0;  // mod d
  std::optional<NodeClass> cls;          // Collatz only
  std::optional<ChainHeadForm> form;     // Collatz N_2 nodes only
};

struct PreimageTree {
  std::string map_text;
  Integer modulus{2};
  bool collatz = false;
  Nat root;
  unsigned depth = 0;
  /// Breadth-first order, root first; one entry per integer.
  std::vector<TreeNode> nodes;

  const TreeNode* find(const Nat& value) const;
};

PreimageTree build_preimage_tree(const MapDescriptor& map, const Nat& root, unsigned depth);

// --- px+r maps -------------------------------------------------------------

/// True iff r = p - 2 or r = 2 - p. Throws MapError(InvalidParameters) for
/// inadmissible (p, r).
bool chain_criterion(const Integer& p, const Integer& r);

/// r (2 - p)^-1 mod p: the residue class whose members have two preimages.
Integer two_preimage_class(const Integer& p, const Integer& r);

struct FamilySample {
  std::uint64_t alpha = 0;
  std::uint64_t beta = 1;
  Nat k{1};
};

/// alpha in 0..alpha_max, beta in 1..beta_max, k in 1..k_max with gcd(k, coprime_to) = 1.
std::vector<FamilySample> family_sample_grid(std::uint64_t alpha_max, std::uint64_t beta_max, std::uint64_t k_max,
                                             const Integer& coprime_to);

struct IdentityFailure {
  FamilySample sample;
  Nat node;
  Nat expected;
  Nat actual;
};

struct FamilyIdentityReport {
  Integer p;
  Integer r;
  Integer l;
  std::uint64_t tested = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t skipped = 0;  // node < 1
  std::vector<IdentityFailure> failures;

  double fraction() const { return tested == 0 ? 0.0 : static_cast<double>(satisfied) / static_cast<double>(tested); }
};

/// With l = r / (p - 2), checks V(p^alpha 2^beta k - l) = p^(alpha+1) 2^(beta-1) k - l
/// for each sample. Throws ChainError(NotApplicable) when p - 2 does not divide r.
FamilyIdentityReport verify_family_identity(const Integer& p, const Integer& r, const std::vector<FamilySample>& samples);

struct TailSample {
  std::uint64_t a = 1;
  Nat k{1};
};

/// `count` tails with a in 1..a_max and k in 1..k_max coprime to 2p, fixed by `seed`.
std::vector<TailSample> sample_tails(const Integer& p, std::size_t count, std::uint64_t seed,
                                     std::uint64_t a_max = 12, std::uint64_t k_max = 10'000);

struct ConnectionRecord {
  TailSample sample;
  Nat tail;
  std::uint64_t halvings = 0;          // by iteration
  std::uint64_t halvings_formula = 0;  // 2-adic valuation of the tail
  Nat landing;
  bool connected = false;
};

struct FamilyConnectionReport {
  Integer p;
  Integer r;
  Integer l;
  Integer target_class;
  std::uint64_t tested = 0;
  std::uint64_t connected = 0;
  std::uint64_t formula_agrees = 0;
  std::vector<ConnectionRecord> failures;

  bool ok() const { return connected == tested && formula_agrees == tested; }
};

/// For each tail p^a k - l, halves down to the first odd value and applies the
/// odd branch once; the landing must lie in two_preimage_class(p, r). Throws
/// ChainError(NotApplicable) unless chain_criterion(p, r).
FamilyConnectionReport verify_family_connection(const Integer& p, const Integer& r,
                                                const std::vector<TailSample>& tails);

struct ClassIdentityReport {
  std::size_t residue = 0;
  bool applicable = false;
  Integer l;
  std::uint64_t tested = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t skipped = 0;  // node < 1 or outside the residue class
  std::vector<IdentityFailure> failures;
};

/// Per residue class i with (m_i - d) | r_i and l_i = r_i / (m_i - d): checks
/// V(m_i^alpha d^beta k - l_i) = m_i^(alpha+1) d^(beta-1) k - l_i. Samples with
/// gcd(k, d m_i) != 1 are skipped.
std::vector<ClassIdentityReport> verify_general_family_identity(const MapDescriptor& map,
                                                                const std::vector<FamilySample>& samples);

}  // namespace syrdyn
