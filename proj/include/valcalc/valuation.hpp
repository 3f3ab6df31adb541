#pragma once

#include <memory>
#include <string>
#include <vector>

#include "valcalc/contact.hpp"
#include "valcalc/exterior.hpp"
#include "valcalc/quad5.hpp"

namespace valcalc {

/// Smooth translation-invariant valuation represented by (omega, phi):
/// mu(K) = nc(K)(omega) + phi_top * vol(K).
struct ValuationRep {
  InvariantForm omega;
  BaseForm phi;

  explicit ValuationRep(int dim = 4) : omega(dim), phi(dim) {}
  ValuationRep(InvariantForm w, BaseForm p);

  int dim() const { return omega.dim(); }
  bool is_zero() const { return omega.is_zero() && phi.is_zero(); }
  /// Degree-k component: the bidegree (k, n-1-k) part of omega, or phi for k = n.
  ValuationRep component(int k) const;
  /// Degrees with a nonzero component, ascending.
  std::vector<int> degrees() const;
  /// The single degree of a homogeneous valuation; throws otherwise.
  int homogeneous_degree() const;

  ValuationRep& operator+=(const ValuationRep& o);
  ValuationRep& operator-=(const ValuationRep& o);
  ValuationRep& operator*=(const Scalar& s);
  friend ValuationRep operator+(ValuationRep a, const ValuationRep& b) { return a += b; }
  friend ValuationRep operator-(ValuationRep a, const ValuationRep& b) { return a -= b; }
  friend ValuationRep operator*(ValuationRep a, const Scalar& s) { return a *= s; }
  friend ValuationRep operator*(const Scalar& s, ValuationRep a) { return a *= s; }
  friend bool operator==(const ValuationRep& a, const ValuationRep& b) {
    return a.omega == b.omega && a.phi == b.phi;
  }
};

/// sigma: ((-1)^n s^* omega, (-1)^n phi) with s the fiberwise antipode.
ValuationRep euler_verdier(const ValuationRep& mu);
/// Lambda: (L_T omega + i_T pi^* phi, 0).
ValuationRep derivation(const ValuationRep& mu);
/// S: (*(D omega + pi^* phi), 0).
ValuationRep signature(const ValuationRep& mu);
/// Delta = (-1)^n S^2.
ValuationRep laplace(const ValuationRep& mu);

/// Right-hand argument of product_top with its Rumin data precomputed.
class PreparedValuation {
public:
  explicit PreparedValuation(const ValuationRep& mu);
  int dim() const { return dim_; }
  /// D omega + pi^* phi
  const InvariantForm& closed_form() const { return closed_; }
  /// pi_* omega
  const BaseForm& pushforward() const { return push_; }

private:
  int dim_;
  InvariantForm closed_;
  BaseForm push_;
};

/// Coefficient of dx_1..n in (-1)^n pi_*(omega_1 ^ (D omega_2 + pi^* phi_2)) + phi_1 ^ pi_* omega_2,
/// i.e. (mu_1 . sigma mu_2)_n with vol -> 1.
Scalar product_top(const ValuationRep& mu1, const ValuationRep& mu2);
Scalar product_top(const ValuationRep& mu1, const PreparedValuation& mu2);

/// Alesker-Poincare pairing <mu_1, mu_2> = product_top(mu_1, sigma mu_2).
Scalar pairing(const ValuationRep& mu1, const ValuationRep& mu2);
/// Prepares sigma(mu) for repeated pairings against it.
PreparedValuation prepare_for_pairing(const ValuationRep& mu);
Scalar pairing(const ValuationRep& mu1, const PreparedValuation& sigma_mu2);

/// Volume of the unit ball in R^m, exact.
Scalar unit_ball_volume(int m);

/// SO(n)-invariant representative of the k-th intrinsic volume.
ValuationRep intrinsic_volume_rep(int dim, int k);
/// Euler characteristic: omega = sigma_sph / area(S^{n-1}).
inline ValuationRep euler_characteristic_rep(int dim) { return intrinsic_volume_rep(dim, 0); }
inline ValuationRep volume_rep(int dim) { return intrinsic_volume_rep(dim, dim); }

/// A labeled list of valuations, each a Q(sqrt 5)-combination of exact atoms.
/// Irrational directions (the icosahedron) live here as combinations; every
/// pairing is computed on atoms and contracted afterwards.
struct ValuationBasis {
  struct Element {
    std::string label;
    int degree = 0;
    std::vector<std::pair<int, Quad5>> parts;  // (atom index, coefficient)
  };
  std::vector<ValuationRep> atoms;
  std::vector<Element> elements;

  int dim() const { return atoms.empty() ? 0 : atoms.front().dim(); }
  size_t size() const { return elements.size(); }
  /// Adds an atom that is also an element by itself.
  void add_simple(std::string label, const ValuationRep& mu);
};

/// Exact Gram matrix <e_i, e_j> of the basis elements, row-major. Pairs of
/// non-complementary degree are skipped (the pairing is graded).
std::vector<Scalar> gram_matrix(const ValuationBasis& basis, int threads = 1);

}  // namespace valcalc

