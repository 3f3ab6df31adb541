#pragma once

#include <array>
#include <optional>
#include <vector>

#include "valcalc/quad5.hpp"
#include "valcalc/quaternion.hpp"
#include "valcalc/valuation.hpp"

namespace valcalc {

/// Point of RP^2: the line through w = (a, b, c) in span(i, j, k), with
/// entries in Q(sqrt 5). u and -u are identified; the stored w is scaled so
/// that its first nonzero entry is positive.
class ImDirection {
public:
  ImDirection() = default;
  /// Direction of any nonzero vector.
  explicit ImDirection(std::array<Quad5, 3> w);
  /// Exact unit vector; throws std::invalid_argument unless a^2+b^2+c^2 = 1.
  static ImDirection unit(const Rational& a, const Rational& b, const Rational& c);
  /// Direction of a nonzero rational vector (need not be unit).
  static ImDirection along(const Rational& a, const Rational& b, const Rational& c);

  const std::array<Quad5, 3>& w() const { return w_; }
  /// Unit representative as doubles.
  std::array<double, 3> numeric() const;
  /// u u^T as the 6 entries (00, 01, 02, 11, 12, 22).
  std::array<Quad5, 6> projector() const;
  bool has_rational_projector() const;
  /// Exact unit coordinates when they are rational.
  std::optional<std::array<Rational, 3>> exact_unit() const;

private:
  std::array<Quad5, 3> w_{Quad5(1), Quad5(0), Quad5(0)};
};

/// (u . v)^2 = tr(P_u P_v), exact.
Quad5 dot_squared(const ImDirection& u, const ImDirection& v);

/// I_u as a row-major 4x4 matrix over the coordinates of H.
/// I_u^2 = -1, I_u is orthogonal and commutes with the SU(2) action.
std::array<Rational, 16> quaternion_structure(const std::array<Rational, 3>& u);
std::array<double, 16> quaternion_structure(const std::array<double, 3>& u);
/// Matrix of the SU(2) element q acting on H.
std::array<Rational, 16> su2_action(const Quaternion<Rational>& q);
std::array<double, 16> su2_action(const QuaternionD& q);
/// Class of the oriented 2-plane spanned by orthonormal e1, e2: the unit u
/// with I_u e1 = e2.
std::array<double, 3> plane_class(const std::array<double, 4>& e1, const std::array<double, 4>& e2);

struct QuaternionicForms {
  InvariantForm alpha, beta, gamma, Omega;
};

/// alpha, beta_u, gamma_u, Omega_u for an exact unit direction.
QuaternionicForms quaternionic_forms(const std::array<Rational, 3>& u);

/// Symmetric bilinear pieces W_ab with omega_u = sum_ab u_a u_b W_ab,
/// indexed like ImDirection::projector (00, 01, 02, 11, 12, 22; off-diagonal
/// pieces already carry the factor 2).
const std::array<InvariantForm, 6>& z_form_pieces();
/// Same decomposition for the Rumin value (1/2pi) alpha ^ beta_u ^ d gamma_u.
const std::array<InvariantForm, 6>& rumin_golden_pieces();

/// omega_u = 1/(8 pi) beta_u ^ d beta_u + 1/(4 pi) gamma_u ^ Omega_u.
/// Requires a rational projector.
InvariantForm z_form(const ImDirection& u);
/// (1/2pi) alpha ^ beta_u ^ d gamma_u. Requires a rational projector.
InvariantForm rumin_golden(const ImDirection& u);
ValuationRep z_rep(const ImDirection& u);

/// <Z_u, Z_v> through the symbolic pipeline. For rational projectors this is
/// pairing(z_rep(u), z_rep(v)); otherwise the pairings of the pieces W_ab
/// are contracted in Q(sqrt 5) and the result must be sqrt(5)-free.
Scalar gram_zz(const ImDirection& u, const ImDirection& v);
/// 1/4 (1 + (u . v)^2), exact.
Scalar tasaki_density(const ImDirection& u, const ImDirection& v);
double tasaki_density(const std::array<double, 3>& u, const std::array<double, 3>& v);

/// The six classes of icosahedron vertices (0, +-1, +-phi) and cyclic shifts.
std::array<ImDirection, 6> icosahedron_directions();
/// i, j, k, (i+j)/sqrt2, (i+k)/sqrt2, (j+k)/sqrt2.
std::array<ImDirection, 6> alesker_directions();

enum class Su2BasisChoice { Icosahedron, Alesker };

/// [chi, vol1, Z_1..Z_6, vol3, vol] on H = R^4.
ValuationBasis su2_basis(Su2BasisChoice choice = Su2BasisChoice::Icosahedron);

}  // namespace valcalc
