#pragma once

// Syracuse-type maps V(x) = (m_i x + r_i) / d for x = i (mod d), with the
// Collatz map and the px+r family as special constructions.

#include "syrdyn/numeric.hpp"

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace syrdyn {

class MapError : public std::invalid_argument {
 public:
  enum class Kind {
    Syntax,
    Malformed,
    GcdViolation,
    NonIntegerBranch,
    NonPositiveImage,
    InvalidParameters,
    Domain,
  };

  MapError(Kind kind, const std::string& message, std::optional<std::size_t> position = std::nullopt,
           std::optional<Integer> witness = std::nullopt)
      : std::invalid_argument(message), kind_(kind), position_(position), witness_(std::move(witness)) {}

  Kind kind() const noexcept { return kind_; }
  /// Character offset of a syntax error in the parsed text.
  std::optional<std::size_t> position() const noexcept { return position_; }
  /// Offending point for NonPositiveImage / Domain errors.
  const std::optional<Integer>& witness() const noexcept { return witness_; }

 private:
  Kind kind_;
  std::optional<std::size_t> position_;
  std::optional<Integer> witness_;
};

const char* to_string(MapError::Kind kind);

struct Branch {
  Integer multiplier;
  Integer offset;

  friend bool operator==(const Branch&, const Branch&) = default;
};

/// Unchecked input to validate().
struct RawMap {
  Integer modulus;
  std::vector<Branch> branches;
};

class MapDescriptor;

/// x -> (p x + r) / 2 on odd x, x / 2 on even x.
struct PxrDescriptor {
  Integer p;
  Integer r;

  /// Throws MapError(InvalidParameters) unless p is odd and >= 3, r is odd,
  /// |r| < p and gcd(r, p) = 1.
  static PxrDescriptor validated(Integer p, Integer r);

  MapDescriptor to_map() const;

  friend bool operator==(const PxrDescriptor&, const PxrDescriptor&) = default;
};

/// A validated Syracuse-type map. Only validate() and the named
/// constructors produce instances, so every descriptor in circulation
/// satisfies the gcd, integrality and positivity conditions.
class MapDescriptor {
 public:
  const Integer& modulus() const noexcept { return modulus_; }
  std::span<const Branch> branches() const noexcept { return branches_; }
  const Branch& branch(std::size_t residue) const { return branches_.at(residue); }

  /// Residue class index of x.
  std::size_t residue(const Integer& x) const;

  /// V(x); throws MapError(Domain) for x < 1.
  Nat apply(const Nat& x) const;

  /// { x >= 1 : V(x) = y }, ascending. Empty for y < 1.
  std::vector<Nat> preimage(const Nat& y) const;

  std::optional<PxrDescriptor> as_pxr() const;
  bool is_collatz() const;

  /// Canonical text in the descriptor grammar; parse_descriptor(to_string()) == *this.
  std::string to_string() const;

  friend bool operator==(const MapDescriptor&, const MapDescriptor&) = default;

 private:
  friend MapDescriptor validate(RawMap raw);
  MapDescriptor() = default;

  Integer modulus_;
  std::vector<Branch> branches_;
};

/// Checks, in order: shape (d >= 2, d branches, positive multipliers),
/// gcd(m_0 ... m_{d-1}, d) = 1, integrality m_i * i + r_i = 0 (mod d), and that
/// no x >= 1 maps below 1.
MapDescriptor validate(RawMap raw);

MapDescriptor collatz();
MapDescriptor pxr_map(const Integer& p, const Integer& r);

/// Grammar: `collatz` | `pxr:p=<int>,r=<int>` | `d=<int>(;m<i>=<int>,r<i>=<int>){d}`.
/// Syntax errors carry the character position.
MapDescriptor parse_descriptor(std::string_view text);

}  // namespace syrdyn
