#include "syrdyn/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace syrdyn {

namespace mp = boost::multiprecision;

std::string to_decimal(const Integer& value) { return value.str(); }

namespace {

Integer parse_digits(std::string_view digits, std::string_view whole) {
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(),
                                     [](unsigned char c) { return std::isdigit(c) != 0; })) {
    throw std::invalid_argument("not an integer: '" + std::string(whole) + "'");
  }
  return Integer(std::string(digits));
}

}  // namespace

Integer parse_integer(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Integer value;
  if (auto pos = body.find_first_of("eE"); pos != std::string_view::npos) {
    Integer mantissa = parse_digits(body.substr(0, pos), text);
    Integer exponent = parse_digits(body.substr(pos + 1), text);
    if (exponent > 100000) throw std::invalid_argument("exponent too large: '" + std::string(text) + "'");
    value = mantissa * pow_int(10, exponent.convert_to<std::uint64_t>());
  } else if (auto caret = body.find('^'); caret != std::string_view::npos) {
    Integer base = parse_digits(body.substr(0, caret), text);
    Integer exponent = parse_digits(body.substr(caret + 1), text);
    if (exponent > 100000) throw std::invalid_argument("exponent too large: '" + std::string(text) + "'");
    value = pow_int(base, exponent.convert_to<std::uint64_t>());
  } else {
    value = parse_digits(body, text);
  }
  return negative ? Integer(-value) : value;
}

std::uint64_t two_adic_valuation(const Integer& value) {
  if (value.is_zero()) throw std::domain_error("2-adic valuation of zero");
  return mp::lsb(mp::abs(value));
}

Integer pow_int(const Integer& base, std::uint64_t exponent) {
  Integer result = 1;
  Integer square = base;
  while (exponent != 0) {
    if ((exponent & 1U) != 0) result *= square;
    exponent >>= 1U;
    if (exponent != 0) square *= square;
  }
  return result;
}

Integer mod_floor(const Integer& value, const Integer& modulus) {
  Integer rem = value % modulus;
  if (rem < 0) rem += modulus;
  return rem;
}

Integer mod_inverse(const Integer& value, const Integer& modulus) {
  Integer old_r = mod_floor(value, modulus);
  Integer r = modulus;
  Integer old_s = 1;
  Integer s = 0;
  while (!r.is_zero()) {
    Integer q = old_r / r;
    Integer next_r = old_r - q * r;
    old_r = r;
    r = next_r;
    Integer next_s = old_s - q * s;
    old_s = s;
    s = next_s;
  }
  if (old_r != 1) throw std::domain_error("no modular inverse");
  return mod_floor(old_s, modulus);
}

// --- DyadicRational -------------------------------------------------------

DyadicRational::DyadicRational(Integer numerator, std::uint64_t exponent)
    : numerator_(std::move(numerator)), exponent_(exponent) {
  if (numerator_ < 0) throw std::invalid_argument("dyadic rational numerator must be non-negative");
  canonicalize();
}

DyadicRational DyadicRational::inverse_power_of_two(std::uint64_t k) { return DyadicRational(1, k); }

void DyadicRational::canonicalize() {
  if (numerator_.is_zero()) {
    exponent_ = 0;
    return;
  }
  if (exponent_ == 0) return;
  std::uint64_t shift = std::min<std::uint64_t>(mp::lsb(numerator_), exponent_);
  numerator_ >>= shift;
  exponent_ -= shift;
}

DyadicRational DyadicRational::scaled_down(std::uint64_t k) const {
  if (is_zero()) return {};
  DyadicRational out;
  out.numerator_ = numerator_;
  out.exponent_ = exponent_ + k;
  out.canonicalize();
  return out;
}

DyadicRational& DyadicRational::operator+=(const DyadicRational& other) {
  if (other.is_zero()) return *this;
  if (exponent_ >= other.exponent_) {
    numerator_ += other.numerator_ << (exponent_ - other.exponent_);
  } else {
    numerator_ <<= (other.exponent_ - exponent_);
    numerator_ += other.numerator_;
    exponent_ = other.exponent_;
  }
  canonicalize();
  return *this;
}

DyadicRational operator*(const DyadicRational& lhs, const DyadicRational& rhs) {
  return DyadicRational(lhs.numerator_ * rhs.numerator_, lhs.exponent_ + rhs.exponent_);
}

DyadicRational operator*(const DyadicRational& lhs, const Integer& factor) {
  return DyadicRational(lhs.numerator_ * factor, lhs.exponent_);
}

std::strong_ordering operator<=>(const DyadicRational& lhs, const DyadicRational& rhs) {
  auto three_way = [](const Integer& a, const Integer& b) {
    int c = a.compare(b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  };
  if (lhs.exponent_ >= rhs.exponent_) {
    return three_way(lhs.numerator_, rhs.numerator_ << (lhs.exponent_ - rhs.exponent_));
  }
  return three_way(lhs.numerator_ << (rhs.exponent_ - lhs.exponent_), rhs.numerator_);
}

std::string DyadicRational::to_string() const {
  return numerator_.str() + "/2^" + std::to_string(exponent_);
}

std::optional<std::string> DyadicRational::to_decimal_expansion() const {
  if (exponent_ > 64) return std::nullopt;
  if (exponent_ == 0) return numerator_.str();
  std::string digits = (numerator_ * pow_int(5, exponent_)).str();
  const auto frac = static_cast<std::size_t>(exponent_);
  if (digits.size() <= frac) digits.insert(0, frac + 1 - digits.size(), '0');
  digits.insert(digits.size() - frac, 1, '.');
  return digits;
}

double DyadicRational::to_double() const {
  if (is_zero()) return 0.0;
  // Keep the leading 64 bits so huge numerators do not overflow before scaling.
  std::uint64_t bits = mp::msb(numerator_) + 1;
  std::uint64_t drop = bits > 64 ? bits - 64 : 0;
  double mantissa = static_cast<Integer>(numerator_ >> drop).convert_to<double>();
  std::int64_t shift = static_cast<std::int64_t>(drop) - static_cast<std::int64_t>(exponent_);
  if (shift < -4096) return 0.0;
  return std::ldexp(mantissa, static_cast<int>(shift));
}

DyadicRational dyadic_add(const DyadicRational& a, const DyadicRational& b) { return a + b; }

std::strong_ordering dyadic_cmp(const DyadicRational& a, const DyadicRational& b) { return a <=> b; }

// --- ScaledDyadic ---------------------------------------------------------

ScaledDyadic::ScaledDyadic(DyadicRational dyadic) : dyadic_(std::move(dyadic)) {}

ScaledDyadic ScaledDyadic::ratio(const DyadicRational& dyadic, const Integer& denominator) {
  if (denominator < 1) throw std::invalid_argument("scale denominator must be positive");
  std::uint64_t twos = mp::lsb(denominator);
  ScaledDyadic out;
  out.dyadic_ = dyadic.scaled_down(twos);
  out.scale_ = denominator >> twos;
  out.reduce();
  return out;
}

void ScaledDyadic::reduce() {
  if (dyadic_.is_zero() || scale_ == 1) {
    if (dyadic_.is_zero()) scale_ = 1;
    return;
  }
  Integer g = mp::gcd(dyadic_.numerator(), scale_);
  if (g != 1) {
    dyadic_ = DyadicRational(dyadic_.numerator() / g, dyadic_.exponent());
    scale_ /= g;
  }
}

ScaledDyadic ScaledDyadic::scaled_down(std::uint64_t k) const {
  ScaledDyadic out = *this;
  out.dyadic_ = dyadic_.scaled_down(k);
  return out;
}

ScaledDyadic& ScaledDyadic::operator+=(const ScaledDyadic& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (scale_ == other.scale_) {
    dyadic_ += other.dyadic_;
  } else {
    Integer common = mp::lcm(scale_, other.scale_);
    dyadic_ = dyadic_ * Integer(common / scale_) + other.dyadic_ * Integer(common / other.scale_);
    scale_ = common;
  }
  reduce();
  return *this;
}

ScaledDyadic operator*(const ScaledDyadic& lhs, const ScaledDyadic& rhs) {
  ScaledDyadic out;
  out.dyadic_ = lhs.dyadic_ * rhs.dyadic_;
  out.scale_ = lhs.scale_ * rhs.scale_;
  out.reduce();
  return out;
}

std::strong_ordering operator<=>(const ScaledDyadic& lhs, const ScaledDyadic& rhs) {
  if (lhs.scale_ == rhs.scale_) return lhs.dyadic_ <=> rhs.dyadic_;
  return (lhs.dyadic_ * rhs.scale_) <=> (rhs.dyadic_ * lhs.scale_);
}

std::string ScaledDyadic::to_string() const {
  if (scale_ == 1) return dyadic_.to_string();
  return dyadic_.to_string() + " * " + scale_string();
}

std::string ScaledDyadic::scale_string() const { return "1/" + scale_.str(); }

double ScaledDyadic::to_double() const { return dyadic_.to_double() / scale_.convert_to<double>(); }

}  // namespace syrdyn
