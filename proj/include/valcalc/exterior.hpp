#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "valcalc/poly.hpp"

namespace valcalc {

/// Index-set pair (I, J) of a basis element dx_I ^ dv_J on SV = R^n x S^{n-1}.
/// Bits 0..3 hold I, bits 4..7 hold J. dx factors always come first.
struct FormKey {
  uint8_t bits = 0;

  static FormKey make(uint8_t dx, uint8_t dv) { return {uint8_t(dx | (dv << 4))}; }
  uint8_t dx() const { return bits & 0x0f; }
  uint8_t dv() const { return bits >> 4; }
  int dx_degree() const { return __builtin_popcount(dx()); }
  int dv_degree() const { return __builtin_popcount(dv()); }
  int degree() const { return dx_degree() + dv_degree(); }
  friend auto operator<=>(FormKey, FormKey) = default;
};

/// Translation-invariant differential form on the sphere bundle SV.
///
/// Invariant: every stored form is tangentially projected
/// (dv_i -> dv_i - v_i sum_j v_j dv_j) and every coefficient is reduced
/// modulo the sphere ideal, so equality of forms is equality of data.
class InvariantForm {
public:
  using Terms = std::map<FormKey, Poly>;

  explicit InvariantForm(int dim = 4);
  /// Canonicalizes an arbitrary ambient representative.
  static InvariantForm from_ambient(int dim, const Terms& raw);
  static InvariantForm zero(int dim) { return InvariantForm(dim); }
  static InvariantForm constant(int dim, const Poly& f);
  static InvariantForm dx(int dim, int i);
  static InvariantForm dv(int dim, int i);

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Degree of a homogeneous form; -1 for zero; throws if mixed.
  int degree() const;
  /// Only the terms of the given bidegree (dx-degree, dv-degree).
  InvariantForm bidegree_part(int k, int l) const;
  /// Max polynomial degree over all coefficients (-1 for zero).
  int poly_degree() const;
  /// Coefficient of dx_I ^ dv_J, or zero.
  Poly coeff(uint8_t dx_mask, uint8_t dv_mask) const;

  InvariantForm& operator+=(const InvariantForm& o);
  InvariantForm& operator-=(const InvariantForm& o);
  InvariantForm& operator*=(const Scalar& s);
  InvariantForm operator-() const;
  friend InvariantForm operator+(InvariantForm a, const InvariantForm& b) { return a += b; }
  friend InvariantForm operator-(InvariantForm a, const InvariantForm& b) { return a -= b; }
  friend InvariantForm operator*(InvariantForm a, const Scalar& s) { return a *= s; }
  friend InvariantForm operator*(const Scalar& s, InvariantForm a) { return a *= s; }
  friend bool operator==(const InvariantForm& a, const InvariantForm& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Multiplies every coefficient by the function f (then reduces).
  InvariantForm times(const Poly& f) const;

private:
  friend class FormBuilder;
  int dim_;
  Terms terms_;
};

/// Constant-coefficient form on the base R^n (phi, or pi_* of an invariant form).
class BaseForm {
public:
  using Terms = std::map<uint8_t, Scalar>;

  explicit BaseForm(int dim = 4) : dim_(dim) {}
  static BaseForm volume(int dim, const Scalar& c = Scalar(1));

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(uint8_t mask, const Scalar& c);
  Scalar coeff(uint8_t mask) const;
  /// Coefficient of dx_1 ^ .. ^ dx_n.
  Scalar top() const;

  BaseForm& operator+=(const BaseForm& o);
  BaseForm& operator*=(const Scalar& s);
  friend BaseForm operator+(BaseForm a, const BaseForm& b) { return a += b; }
  friend BaseForm operator*(BaseForm a, const Scalar& s) { return a *= s; }
  friend bool operator==(const BaseForm& a, const BaseForm& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// pi^* of this form as an invariant form on SV.
  InvariantForm pullback() const;

private:
  int dim_;
  Terms terms_;
};

/// Polynomial vector field sum X^x_i d/dx_i + X^v_i d/dv_i.
class VectorField {
public:
  explicit VectorField(int dim = 4) : dim_(dim), x_(dim), v_(dim) {}

  int dim() const { return dim_; }
  const Poly& x(int i) const { return x_[i]; }
  const Poly& v(int i) const { return v_[i]; }
  Poly& x(int i) { return x_[i]; }
  Poly& v(int i) { return v_[i]; }
  /// sum_i v_i X^v_i vanishes on the sphere.
  bool is_tangent() const;

  /// Reeb field sum v_i d/dx_i of the contact form alpha.
  static VectorField reeb(int dim);
  /// Radial field sum v_i d/dv_i (normal to SV, so not tangent).
  static VectorField radial(int dim);

private:
  int dim_;
  std::vector<Poly> x_, v_;
};

class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Operations ----------------------------------------------------------------

InvariantForm wedge(const InvariantForm& a, const InvariantForm& b);
InvariantForm d(const InvariantForm& a);
/// Interior product; throws std::invalid_argument unless X is tangent to SV.
InvariantForm contract(const VectorField& X, const InvariantForm& a);
/// L_T = i_T d + d i_T for the Reeb field.
InvariantForm lie_T(const InvariantForm& a);

/// Tangential projection of an ambient form followed by coefficient reduction.
InvariantForm::Terms project_raw(int dim, const InvariantForm::Terms& raw);

/// Bundle maps whose pullbacks act on invariant forms.
struct BundleMap {
  enum class Kind { Antipode, BallShift, Linear };
  Kind kind = Kind::Antipode;
  Scalar t;                    // BallShift: (x, v) -> (x + t v, v)
  std::vector<Scalar> matrix;  // Linear: (x, v) -> (A x, A v), row-major

  static BundleMap antipode() { return {}; }
  static BundleMap ball_shift(const Scalar& t) { return {Kind::BallShift, t, {}}; }
  /// Throws std::invalid_argument for non-orthogonal A.
  static BundleMap linear(int dim, std::vector<Scalar> a);
};

InvariantForm pullback(const BundleMap& map, const InvariantForm& a);

/// pi_*: integrates the fiber-degree (n-1) part over S^{n-1}.
BaseForm fiber_integrate(const InvariantForm& a);

/// Hodge star for the product (Sasaki) metric on R^n x S^{n-1}, orientation
/// dx_1 ^ .. ^ dx_n ^ sigma_sph.
InvariantForm hodge_star(const InvariantForm& a);

/// sigma_sph = i_R(dv_1 ^ .. ^ dv_n): the round volume form of the fiber.
InvariantForm sphere_volume_form(int dim);
/// dx_1 ^ .. ^ dx_n ^ sigma_sph.
InvariantForm total_volume_form(int dim);

/// Sign of merging two disjoint sorted index sets (0 if they overlap).
int merge_sign(uint8_t a, uint8_t b);

// Numeric evaluation ---------------------------------------------------------

/// Double-precision copy of a form for pointwise evaluation.
class NumericForm {
public:
  NumericForm() = default;
  explicit NumericForm(int dim) : dim_(dim) {}
  explicit NumericForm(const InvariantForm& f);

  int dim() const { return dim_; }
  /// Coefficient of the basis element `key` at the sphere point v.
  double coeff(FormKey key, std::span<const double> v) const;
  /// Value on k tangent vectors stored back to back, each of length 2n laid
  /// out as (x-part, v-part).
  double evaluate(std::span<const double> v, std::span<const double> vectors, int k) const;
  /// Bound on the sum of |term| in evaluate: |monomials| times Hadamard's bound.
  double magnitude(std::span<const double> v, std::span<const double> vectors, int k) const;
  /// this += a * o
  NumericForm& axpy(double a, const NumericForm& o);
  /// Only the terms of the given bidegree.
  NumericForm bidegree_part(int k, int l) const;

  struct Term {
    FormKey key;
    std::vector<std::pair<std::array<uint8_t, kMaxDim>, double>> poly;
  };
  const std::vector<Term>& terms() const { return terms_; }

  double eval_poly(const Term& t, std::span<const double> v) const;

private:
  int dim_ = 4;
  std::vector<Term> terms_;
};

}  // namespace valcalc
