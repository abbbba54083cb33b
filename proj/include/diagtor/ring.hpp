#pragma once

#include "diagtor/integer.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace diagtor {

/// Ring elements are carried as rationals; only Q uses non-integral values.
using Scalar = Rational;

enum class RingKind { Integers, Rationals, PrimeField, ModularRing };

/// The coefficient ring R together with the loop parameter delta in R.
class CoefficientRing {
 public:
  static CoefficientRing integers(const Integer& delta = 0);
  static CoefficientRing rationals(const Rational& delta = 0);
  static CoefficientRing prime_field(std::uint32_t p, const Integer& delta = 0);
  static CoefficientRing modular(std::uint32_t m, const Integer& delta = 0);

  /// Grammar: `Z`, `Q`, `Fp:<prime>` (also `F<prime>`), `Zmod:<m>`.
  /// delta is an integer literal reduced into the ring.
  static CoefficientRing parse(std::string_view spec, const Integer& delta = 0);

  RingKind kind() const { return kind_; }
  /// p or m; zero for Z and Q.
  std::uint32_t modulus() const { return modulus_; }
  bool is_field() const { return kind_ == RingKind::Rationals || kind_ == RingKind::PrimeField; }
  bool has_torsion_free_integers() const {
    return kind_ == RingKind::Integers || kind_ == RingKind::Rationals;
  }
  const Scalar& delta() const { return delta_; }

  /// Same ring with a different delta.
  CoefficientRing with_delta(const Integer& delta) const;

  /// Canonical representative; throws InvalidArgument if x is not in the ring.
  Scalar normalize(const Scalar& x) const;
  Integer reduce(const Integer& x) const;

  Scalar add(const Scalar& a, const Scalar& b) const { return normalize(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return normalize(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return normalize(a * b); }
  Scalar pow(const Scalar& a, unsigned e) const;
  bool is_zero(const Scalar& a) const { return normalize(a) == 0; }
  bool is_unit(const Scalar& a) const;
  Scalar inverse(const Scalar& a) const;

  /// delta^e in the ring.
  Scalar delta_power(unsigned e) const { return pow(delta_, e); }
  /// delta^e as an integer representative. Throws for non-integral delta over Q.
  Integer delta_power_integer(unsigned e) const;

  std::string spec() const;
  std::string to_string(const Scalar& x) const;

  friend bool operator==(const CoefficientRing& a, const CoefficientRing& b) {
    return a.kind_ == b.kind_ && a.modulus_ == b.modulus_ && a.delta_ == b.delta_;
  }

 private:
  CoefficientRing(RingKind kind, std::uint32_t modulus, Scalar delta)
      : kind_(kind), modulus_(modulus), delta_(std::move(delta)) {}

  RingKind kind_;
  std::uint32_t modulus_;
  Scalar delta_;
};

}  // namespace diagtor
