#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace diagtor {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Integer& x) { return x.str(); }

inline std::string to_string(const Rational& x) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

Integer parse_integer(std::string_view text);

/// Least non-negative residue of x modulo m (m > 0).
inline Integer mod_floor(const Integer& x, const Integer& m) {
  Integer r = x % m;
  if (r < 0) r += m;
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) { return boost::multiprecision::gcd(a, b); }

/// Extended gcd: returns g >= 0 and s, t with s*a + t*b = g.
Integer extended_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t);

/// a^-1 mod m for a unit a; throws InvalidArgument otherwise.
Integer inverse_mod(const Integer& a, const Integer& m);

bool is_prime(std::uint64_t p);

}  // namespace diagtor
