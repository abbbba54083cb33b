#include "diagtor/ring.hpp"

#include "diagtor/errors.hpp"

#include <cctype>

namespace diagtor {

Integer parse_integer(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  if (pos == text.size()) throw InvalidArgument("not an integer literal: '" + std::string(text) + "'");
  Integer value = 0;
  for (; pos < text.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(text[pos])))
      throw InvalidArgument("not an integer literal: '" + std::string(text) + "'");
    value = value * 10 + (text[pos] - '0');
  }
  return negative ? Integer(-value) : value;
}

Integer extended_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t) {
  Integer old_r = a, r = b;
  Integer old_s = 1, cur_s = 0;
  Integer old_t = 0, cur_t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * cur_s;
    old_s = cur_s;
    cur_s = tmp;
    tmp = old_t - q * cur_t;
    old_t = cur_t;
    cur_t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  s = old_s;
  t = old_t;
  return old_r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer s, t;
  Integer g = extended_gcd(mod_floor(a, m), m, s, t);
  if (g != 1) throw InvalidArgument(a.str() + " is not a unit modulo " + m.str());
  return mod_floor(s, m);
}

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

CoefficientRing CoefficientRing::integers(const Integer& delta) {
  return CoefficientRing(RingKind::Integers, 0, Scalar(delta));
}

CoefficientRing CoefficientRing::rationals(const Rational& delta) {
  return CoefficientRing(RingKind::Rationals, 0, delta);
}

CoefficientRing CoefficientRing::prime_field(std::uint32_t p, const Integer& delta) {
  if (!is_prime(p)) throw InvalidArgument("Fp requires a prime, got " + std::to_string(p));
  if (p >= (1u << 31)) throw InvalidArgument("prime too large for the modular kernels");
  return CoefficientRing(RingKind::PrimeField, p, Scalar(mod_floor(delta, p)));
}

CoefficientRing CoefficientRing::modular(std::uint32_t m, const Integer& delta) {
  if (m < 2) throw InvalidArgument("Zmod requires m >= 2");
  if (m >= (1u << 31)) throw InvalidArgument("modulus too large for the modular kernels");
  return CoefficientRing(RingKind::ModularRing, m, Scalar(mod_floor(delta, m)));
}

CoefficientRing CoefficientRing::parse(std::string_view spec, const Integer& delta) {
  auto parse_modulus = [&](std::string_view digits) -> std::uint32_t {
    Integer v = parse_integer(digits);
    if (v < 2 || v >= (Integer(1) << 31))
      throw InvalidArgument("ring modulus out of range in '" + std::string(spec) + "'");
    return static_cast<std::uint32_t>(v);
  };
  if (spec == "Z") return integers(delta);
  if (spec == "Q") return rationals(Rational(delta));
  if (spec.rfind("Fp:", 0) == 0) return prime_field(parse_modulus(spec.substr(3)), delta);
  if (spec.rfind("Zmod:", 0) == 0) return modular(parse_modulus(spec.substr(5)), delta);
  if (spec.size() > 1 && spec[0] == 'F' && std::isdigit(static_cast<unsigned char>(spec[1])))
    return prime_field(parse_modulus(spec.substr(1)), delta);
  throw InvalidArgument("unknown ring spec '" + std::string(spec) +
                        "' (expected Z, Q, Fp:<prime> or Zmod:<m>)");
}

CoefficientRing CoefficientRing::with_delta(const Integer& delta) const {
  switch (kind_) {
    case RingKind::Integers: return integers(delta);
    case RingKind::Rationals: return rationals(Rational(delta));
    case RingKind::PrimeField: return prime_field(modulus_, delta);
    case RingKind::ModularRing: return modular(modulus_, delta);
  }
  return *this;
}

Scalar CoefficientRing::normalize(const Scalar& x) const {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  switch (kind_) {
    case RingKind::Rationals: return x;
    case RingKind::Integers:
      if (denominator(x) != 1) throw InvalidArgument(diagtor::to_string(x) + " is not an integer");
      return x;
    case RingKind::PrimeField:
    case RingKind::ModularRing: {
      Integer m = modulus_;
      Integer num = mod_floor(numerator(x), m);
      Integer den = denominator(x);
      if (den == 1) return Scalar(num);
      return Scalar(mod_floor(num * inverse_mod(den, m), m));
    }
  }
  return x;
}

Integer CoefficientRing::reduce(const Integer& x) const {
  if (modulus_ == 0) return x;
  return mod_floor(x, Integer(modulus_));
}

Scalar CoefficientRing::pow(const Scalar& a, unsigned e) const {
  Scalar result = normalize(Scalar(1));
  Scalar base = normalize(a);
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    e >>= 1u;
    if (e != 0) base = mul(base, base);
  }
  return result;
}

bool CoefficientRing::is_unit(const Scalar& a) const {
  Scalar v = normalize(a);
  switch (kind_) {
    case RingKind::Integers: return v == 1 || v == -1;
    case RingKind::Rationals:
    case RingKind::PrimeField: return v != 0;
    case RingKind::ModularRing:
      return gcd(boost::multiprecision::numerator(v), Integer(modulus_)) == 1;
  }
  return false;
}

Scalar CoefficientRing::inverse(const Scalar& a) const {
  if (!is_unit(a)) throw InvalidArgument(to_string(a) + " is not a unit in " + spec());
  Scalar v = normalize(a);
  switch (kind_) {
    case RingKind::Integers: return v;
    case RingKind::Rationals: return Scalar(1) / v;
    case RingKind::PrimeField:
    case RingKind::ModularRing:
      return Scalar(inverse_mod(boost::multiprecision::numerator(v), Integer(modulus_)));
  }
  return v;
}

Integer CoefficientRing::delta_power_integer(unsigned e) const {
  Scalar v = delta_power(e);
  if (boost::multiprecision::denominator(v) != 1)
    throw InvalidArgument("delta power is not integral");
  return boost::multiprecision::numerator(v);
}

std::string CoefficientRing::spec() const {
  switch (kind_) {
    case RingKind::Integers: return "Z";
    case RingKind::Rationals: return "Q";
    case RingKind::PrimeField: return "Fp:" + std::to_string(modulus_);
    case RingKind::ModularRing: return "Zmod:" + std::to_string(modulus_);
  }
  return "?";
}

std::string CoefficientRing::to_string(const Scalar& x) const { return diagtor::to_string(normalize(x)); }

}  // namespace diagtor
