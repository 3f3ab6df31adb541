#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace valcalc {

using Rational = mpq_class;

/// Parses "p/q" or "p" into a canonical rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string rational_string(const Rational& q);

/// Exact element of the Laurent ring Q[pi, pi^-1].
///
/// Stored as a sparse map from the power of pi to a nonzero rational.
/// Equality is term-wise; there is no floating point anywhere in here.
class Scalar {
public:
  using Terms = std::map<int, Rational>;

  Scalar() = default;
  Scalar(long v);  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& q);  // NOLINT(google-explicit-constructor)
  Scalar(const Rational& q, int pi_power);

  static Scalar pi(int power = 1) { return Scalar(Rational(1), power); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// A single nonzero term c*pi^k; these are exactly the units of the ring.
  bool is_unit() const { return terms_.size() == 1; }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
  Rational rational_part() const;
  Rational coeff(int pi_power) const;

  Scalar inverse() const;  // throws std::domain_error for non-units
  double to_double() const;

  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }
  Scalar operator-() const;

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// Canonical string, e.g. "17/4", "-3/4", "3/4*pi", "1/2*pi^-1", "1 + 2*pi^2".
  std::string to_string() const;
  static Scalar parse(std::string_view text);

  void add_term(int pi_power, const Rational& q);

private:
  Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace valcalc
