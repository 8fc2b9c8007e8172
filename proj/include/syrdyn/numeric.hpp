#pragma once

// Exact arithmetic shared by every engine: arbitrary-precision integers and
// dyadic rationals (numerator / 2^exponent), plus dyadic values carrying an
// odd integer scale for measures built on cycles whose length is not a power
// of two.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace syrdyn {

using Integer = boost::multiprecision::cpp_int;

/// A point of the map domain. Always >= 1 at API boundaries; intermediate
/// arithmetic may pass through zero or negative values.
using Nat = Integer;

std::string to_decimal(const Integer& value);

/// Parses a decimal integer ("-17"), a power of ten ("1e40", "3E6") or an
/// explicit power ("10^9", "2^64"). Throws std::invalid_argument on bad input.
Integer parse_integer(std::string_view text);

/// Exponent of the largest power of two dividing `value`; `value` must be nonzero.
std::uint64_t two_adic_valuation(const Integer& value);

Integer pow_int(const Integer& base, std::uint64_t exponent);

/// Remainder in [0, modulus) for any sign of `value`; modulus > 0.
Integer mod_floor(const Integer& value, const Integer& modulus);

/// Inverse of `value` modulo `modulus`; throws std::domain_error when gcd != 1.
Integer mod_inverse(const Integer& value, const Integer& modulus);

/// numerator * 2^(-exponent), numerator >= 0.
///
/// Canonical form: the numerator is odd, or the value is zero (stored as 0/2^0),
/// or the exponent is zero. Equal values therefore have equal representations.
class DyadicRational {
 public:
  DyadicRational() = default;
  explicit DyadicRational(Integer numerator, std::uint64_t exponent = 0);

  /// 2^(-k)
  static DyadicRational inverse_power_of_two(std::uint64_t k);

  const Integer& numerator() const noexcept { return numerator_; }
  std::uint64_t exponent() const noexcept { return exponent_; }
  bool is_zero() const noexcept { return numerator_.is_zero(); }

  /// value * 2^(-k)
  DyadicRational scaled_down(std::uint64_t k) const;
  DyadicRational halved() const { return scaled_down(1); }

  DyadicRational& operator+=(const DyadicRational& other);
  friend DyadicRational operator+(DyadicRational lhs, const DyadicRational& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend DyadicRational operator*(const DyadicRational& lhs, const DyadicRational& rhs);
  friend DyadicRational operator*(const DyadicRational& lhs, const Integer& factor);

  friend std::strong_ordering operator<=>(const DyadicRational& lhs, const DyadicRational& rhs);
  friend bool operator==(const DyadicRational& lhs, const DyadicRational& rhs) = default;

  /// "3/2^6"; zero prints as "0/2^0".
  std::string to_string() const;
  /// Exact decimal expansion ("0.046875"), available when exponent <= 64.
  std::optional<std::string> to_decimal_expansion() const;
  double to_double() const;

 private:
  void canonicalize();

  Integer numerator_{0};
  std::uint64_t exponent_ = 0;
};

DyadicRational dyadic_add(const DyadicRational& a, const DyadicRational& b);
std::strong_ordering dyadic_cmp(const DyadicRational& a, const DyadicRational& b);

/// dyadic / scale with an odd scale >= 1, reduced so gcd(numerator, scale) = 1.
///
/// Holds 1/(2N) for a cycle of length N exactly. Comparison cross-multiplies,
/// so inequalities stay exact for any cycle length.
class ScaledDyadic {
 public:
  ScaledDyadic() = default;
  ScaledDyadic(DyadicRational dyadic);  // NOLINT(google-explicit-constructor)

  /// dyadic / denominator for any denominator >= 1; powers of two in the
  /// denominator move into the dyadic exponent.
  static ScaledDyadic ratio(const DyadicRational& dyadic, const Integer& denominator);

  const DyadicRational& dyadic() const noexcept { return dyadic_; }
  const Integer& scale() const noexcept { return scale_; }
  bool is_zero() const noexcept { return dyadic_.is_zero(); }

  ScaledDyadic scaled_down(std::uint64_t k) const;

  ScaledDyadic& operator+=(const ScaledDyadic& other);
  friend ScaledDyadic operator+(ScaledDyadic lhs, const ScaledDyadic& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend ScaledDyadic operator*(const ScaledDyadic& lhs, const ScaledDyadic& rhs);

  friend std::strong_ordering operator<=>(const ScaledDyadic& lhs, const ScaledDyadic& rhs);
  friend bool operator==(const ScaledDyadic& lhs, const ScaledDyadic& rhs) = default;

  /// "1/2^3" when the scale is one, otherwise "1/2^1 * 1/5".
  std::string to_string() const;
  /// "1/N"
  std::string scale_string() const;
  double to_double() const;

 private:
  void reduce();

  DyadicRational dyadic_;
  Integer scale_{1};
};

}  // namespace syrdyn
