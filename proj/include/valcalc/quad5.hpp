#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "valcalc/scalar.hpp"

namespace valcalc {

/// a + b sqrt(5) with rational a, b.
struct Quad5 {
  Rational a = 0, b = 0;

  Quad5() = default;
  Quad5(Rational a_, Rational b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}  // NOLINT
  static Quad5 golden_ratio() { return Quad5(Rational(1, 2), Rational(1, 2)); }

  bool is_zero() const { return a == 0 && b == 0; }
  bool is_rational() const { return b == 0; }
  double to_double() const { return a.get_d() + b.get_d() * std::sqrt(5.0); }
  Quad5 conjugate() const { return {a, -b}; }
  Quad5 inverse() const {
    const Rational nrm = a * a - 5 * b * b;
    if (nrm == 0) throw std::domain_error("inverse of zero in Q(sqrt 5)");
    return {a / nrm, -b / nrm};
  }

  friend Quad5 operator+(const Quad5& x, const Quad5& y) { return {x.a + y.a, x.b + y.b}; }
  friend Quad5 operator-(const Quad5& x, const Quad5& y) { return {x.a - y.a, x.b - y.b}; }
  friend Quad5 operator-(const Quad5& x) { return {-x.a, -x.b}; }
  friend Quad5 operator*(const Quad5& x, const Quad5& y) {
    return {x.a * y.a + 5 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend Quad5 operator/(const Quad5& x, const Quad5& y) { return x * y.inverse(); }
  friend bool operator==(const Quad5& x, const Quad5& y) { return x.a == y.a && x.b == y.b; }
  Quad5& operator+=(const Quad5& y) { return *this = *this + y; }
  Quad5& operator*=(const Quad5& y) { return *this = *this * y; }
};

/// a + b sqrt(5) with a, b in Q[pi, 1/pi].
struct Scalar5 {
  Scalar a, b;

  Scalar5() = default;
  Scalar5(Scalar a_, Scalar b_ = Scalar()) : a(std::move(a_)), b(std::move(b_)) {}  // NOLINT

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
  /// The rational-in-sqrt(5) part; throws if a sqrt(5) component survives.
  Scalar require_scalar() const {
    if (!b.is_zero()) throw std::logic_error("value has a nonzero sqrt(5) component");
    return a;
  }
  double to_double() const { return a.to_double() + b.to_double() * std::sqrt(5.0); }

  friend Scalar5 operator+(const Scalar5& x, const Scalar5& y) { return {x.a + y.a, x.b + y.b}; }
  friend Scalar5 operator*(const Quad5& q, const Scalar5& x) {
    const Scalar qa(q.a), qb(q.b);
    return {qa * x.a + Scalar(5) * qb * x.b, qa * x.b + qb * x.a};
  }
  Scalar5& operator+=(const Scalar5& y) { return *this = *this + y; }
};

}  // namespace valcalc
