#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "valcalc/scalar.hpp"

namespace valcalc {

constexpr int kMaxDim = 4;

/// Exponent vector over (v_1, .., v_4), packed one byte per variable.
class Monomial {
public:
  constexpr Monomial() = default;
  explicit constexpr Monomial(uint32_t bits) : bits_(bits) {}
  static Monomial from_exponents(std::span<const int> e);
  static Monomial var(int i, int power = 1) { return Monomial(uint32_t(power) << (8 * i)); }

  int exp(int i) const { return int((bits_ >> (8 * i)) & 0xffu); }
  int degree() const { return exp(0) + exp(1) + exp(2) + exp(3); }
  uint32_t bits() const { return bits_; }
  Monomial with_exp(int i, int e) const {
    return Monomial((bits_ & ~(0xffu << (8 * i))) | (uint32_t(e) << (8 * i)));
  }
  std::array<int, kMaxDim> exponents() const { return {exp(0), exp(1), exp(2), exp(3)}; }

  friend Monomial operator*(Monomial a, Monomial b) { return Monomial(a.bits_ + b.bits_); }
  friend auto operator<=>(Monomial a, Monomial b) = default;

private:
  uint32_t bits_ = 0;
};

/// Polynomial in the fiber variable v with exact coefficients.
///
/// A Poly is just a polynomial; it becomes a function on the sphere once it
/// goes through reduce_poly, after which every monomial has e_n <= 1.
class Poly {
public:
  using Terms = std::map<Monomial, Scalar>;

  Poly() = default;
  Poly(const Scalar& c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.emplace(Monomial{}, c);
  }
  static Poly monomial(Monomial m, const Scalar& c = Scalar(1));
  static Poly var(int i) { return monomial(Monomial::var(i)); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  void add_term(Monomial m, const Scalar& c);

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Scalar& s);
  Poly operator-() const;
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Scalar& s) { return a *= s; }
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  Poly derivative(int i) const;
  /// Substitutes v -> M v for a matrix with Scalar entries (row-major dim x dim).
  Poly substitute_linear(int dim, std::span<const Scalar> matrix) const;
  Poly negate_variables() const;  // p(-v)
  double evaluate(std::span<const double> v) const;

private:
  Terms terms_;
};

/// Canonical representative of p modulo (v_1^2+..+v_n^2-1): v_n^2 is rewritten
/// as 1 - sum_{i<n} v_i^2 until every stored monomial has e_n <= 1.
Poly reduce_poly(const Poly& p, int dim);
bool is_reduced(const Poly& p, int dim);

/// Exact integral of v^e over the unit sphere S^{n-1} with its round measure.
Scalar sphere_monomial_integral(std::span<const int> e, int dim);
Scalar sphere_monomial_integral(Monomial m, int dim);
/// Integral of a polynomial over S^{n-1}.
Scalar sphere_integral(const Poly& p, int dim);

/// sum_i v_i^2 - 1
Poly sphere_ideal_generator(int dim);

}  // namespace valcalc
