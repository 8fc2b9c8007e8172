#include "syrdyn/maps.hpp"

#include <algorithm>
#include <cctype>

namespace syrdyn {

namespace mp = boost::multiprecision;

const char* to_string(MapError::Kind kind) {
  switch (kind) {
    case MapError::Kind::Syntax: return "SyntaxError";
    case MapError::Kind::Malformed: return "Malformed";
    case MapError::Kind::GcdViolation: return "GcdViolation";
    case MapError::Kind::NonIntegerBranch: return "NonIntegerBranch";
    case MapError::Kind::NonPositiveImage: return "NonPositiveImage";
    case MapError::Kind::InvalidParameters: return "InvalidParameters";
    case MapError::Kind::Domain: return "DomainError";
  }
  return "MapError";
}

PxrDescriptor PxrDescriptor::validated(Integer p, Integer r) {
  auto fail = [&](const std::string& why) {
    throw MapError(MapError::Kind::InvalidParameters,
                   "invalid px+r parameters p=" + p.str() + ", r=" + r.str() + ": " + why);
  };
  if (p < 3 || mp::bit_test(p, 0) == false) fail("p must be odd and at least 3");
  if (mp::abs(r) >= p) fail("|r| must be less than p");
  if (mp::gcd(mp::abs(r), p) != 1) fail("r must be coprime to p");
  if (!mp::bit_test(mp::abs(r), 0)) fail("r must be odd for (px+r)/2 to be an integer");
  return PxrDescriptor{std::move(p), std::move(r)};
}

MapDescriptor PxrDescriptor::to_map() const {
  return validate(RawMap{2, {Branch{1, 0}, Branch{p, r}}});
}

std::size_t MapDescriptor::residue(const Integer& x) const {
  return mod_floor(x, modulus_).convert_to<std::size_t>();
}

Nat MapDescriptor::apply(const Nat& x) const {
  if (x < 1) throw MapError(MapError::Kind::Domain, "map applied to " + x.str() + " < 1", std::nullopt, x);
  const Branch& b = branches_[residue(x)];
  return (b.multiplier * x + b.offset) / modulus_;
}

std::vector<Nat> MapDescriptor::preimage(const Nat& y) const {
  std::vector<Nat> out;
  if (y < 1) return out;
  const Integer scaled = modulus_ * y;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& b = branches_[i];
    Integer numer = scaled - b.offset;
    if (numer < 1) continue;
    Integer q;
    Integer rem;
    mp::divide_qr(numer, b.multiplier, q, rem);
    if (!rem.is_zero() || q < 1) continue;
    if (residue(q) != i) continue;
    out.push_back(std::move(q));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<PxrDescriptor> MapDescriptor::as_pxr() const {
  if (modulus_ != 2 || branches_[0] != Branch{1, 0}) return std::nullopt;
  return PxrDescriptor{branches_[1].multiplier, branches_[1].offset};
}

bool MapDescriptor::is_collatz() const {
  auto pxr = as_pxr();
  return pxr && pxr->p == 3 && pxr->r == 1;
}

std::string MapDescriptor::to_string() const {
  if (auto pxr = as_pxr()) {
    if (pxr->p == 3 && pxr->r == 1) return "collatz";
    return "pxr:p=" + pxr->p.str() + ",r=" + pxr->r.str();
  }
  std::string out = "d=" + modulus_.str();
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    out += ";m" + std::to_string(i) + "=" + branches_[i].multiplier.str() + ",r" + std::to_string(i) + "=" +
           branches_[i].offset.str();
  }
  return out;
}

MapDescriptor validate(RawMap raw) {
  using Kind = MapError::Kind;
  if (raw.modulus < 2) throw MapError(Kind::Malformed, "modulus d must be at least 2");
  if (raw.modulus > 1'000'000) throw MapError(Kind::Malformed, "modulus d is unreasonably large");
  const auto d = raw.modulus.convert_to<std::size_t>();
  if (raw.branches.size() != d) {
    throw MapError(Kind::Malformed, "expected " + std::to_string(d) + " branches, got " +
                                        std::to_string(raw.branches.size()));
  }
  Integer product = 1;
  for (const Branch& b : raw.branches) {
    if (b.multiplier < 1) throw MapError(Kind::Malformed, "multipliers must be positive");
    product *= b.multiplier;
  }
  if (mp::gcd(product, raw.modulus) != 1) {
    throw MapError(Kind::GcdViolation,
                   "gcd(m_0*...*m_{d-1}, d) = " + Integer(mp::gcd(product, raw.modulus)).str() + ", expected 1");
  }
  for (std::size_t i = 0; i < d; ++i) {
    const Branch& b = raw.branches[i];
    if (!mod_floor(b.multiplier * i + b.offset, raw.modulus).is_zero()) {
      throw MapError(Kind::NonIntegerBranch, "branch " + std::to_string(i) + ": m*i + r = " +
                                                 Integer(b.multiplier * i + b.offset).str() +
                                                 " is not divisible by d");
    }
  }
  // Images grow with x inside a class, so the smallest member decides positivity.
  for (std::size_t i = 0; i < d; ++i) {
    const Branch& b = raw.branches[i];
    Integer smallest = i == 0 ? raw.modulus : Integer(i);
    Integer image = (b.multiplier * smallest + b.offset) / raw.modulus;
    if (image < 1) {
      throw MapError(Kind::NonPositiveImage, "x=" + smallest.str() + " maps to " + image.str(), std::nullopt,
                     smallest);
    }
  }
  MapDescriptor out;
  out.modulus_ = std::move(raw.modulus);
  out.branches_ = std::move(raw.branches);
  return out;
}

MapDescriptor collatz() { return PxrDescriptor::validated(3, 1).to_map(); }

MapDescriptor pxr_map(const Integer& p, const Integer& r) { return PxrDescriptor::validated(p, r).to_map(); }

namespace {

class DescriptorParser {
 public:
  explicit DescriptorParser(std::string_view text) : text_(text) {}

  MapDescriptor parse() {
    if (text_ == "collatz") return collatz();
    if (text_.starts_with("pxr:")) {
      pos_ = 4;
      expect("p=");
      Integer p = integer(false);
      expect(",r=");
      Integer r = integer(true);
      finish();
      return PxrDescriptor::validated(std::move(p), std::move(r)).to_map();
    }
    expect("d=");
    RawMap raw;
    const std::size_t modulus_pos = pos_;
    raw.modulus = integer(false);
    if (raw.modulus < 2 || raw.modulus > 1'000'000) error("modulus must be between 2 and 1000000", modulus_pos);
    const auto d = raw.modulus.convert_to<std::size_t>();
    for (std::size_t i = 0; i < d; ++i) {
      const std::string idx = std::to_string(i);
      expect(";m" + idx + "=");
      Integer m = integer(false);
      expect(",r" + idx + "=");
      Integer r = integer(true);
      raw.branches.push_back(Branch{std::move(m), std::move(r)});
    }
    finish();
    return validate(std::move(raw));
  }

 private:
  [[noreturn]] void error(const std::string& what, std::size_t at) const {
    throw MapError(MapError::Kind::Syntax,
                   "syntax error at position " + std::to_string(at) + ": " + what + " in '" + std::string(text_) + "'",
                   at);
  }

  void expect(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) error("expected '" + std::string(token) + "'", pos_);
    pos_ += token.size();
  }

  Integer integer(bool allow_sign) {
    const std::size_t start = pos_;
    if (allow_sign && pos_ < text_.size() && text_[pos_] == '-') ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    if (pos_ == digits) error("expected an integer", digits);
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  void finish() const {
    if (pos_ != text_.size()) error("unexpected trailing input", pos_);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MapDescriptor parse_descriptor(std::string_view text) { return DescriptorParser(text).parse(); }

}  // namespace syrdyn
