#include "valcalc/su2.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace valcalc {

namespace {

constexpr int kH = 4;

int sign_of(const Quad5& q) {
  const double d = q.to_double();
  if (q.is_zero()) return 0;
  return d > 0 ? 1 : -1;
}

bool rational_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  mpz_class n = q.get_num(), d = q.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  root = Rational(rn, rd);
  root.canonicalize();
  return true;
}

const std::array<std::pair<int, int>, 6> kPairs = {{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}}};

std::array<Rational, 3> axis(int a) {
  std::array<Rational, 3> e{0, 0, 0};
  e[a] = 1;
  return e;
}

const std::array<QuaternionicForms, 3>& axis_forms() {
  static const std::array<QuaternionicForms, 3> forms = {
      quaternionic_forms(axis(0)), quaternionic_forms(axis(1)), quaternionic_forms(axis(2))};
  return forms;
}

template <class Bilinear>
std::array<InvariantForm, 6> symmetric_pieces(Bilinear f) {
  std::array<InvariantForm, 6> out;
  for (int p = 0; p < 6; ++p) {
    const auto [a, b] = kPairs[p];
    out[p] = a == b ? f(a, a) : f(a, b) + f(b, a);
  }
  return out;
}

InvariantForm contract_pieces(const std::array<InvariantForm, 6>& pieces, const ImDirection& u) {
  if (!u.has_rational_projector()) throw std::invalid_argument("direction has an irrational projector");
  const auto P = u.projector();
  InvariantForm out(kH);
  for (int p = 0; p < 6; ++p)
    if (!P[p].is_zero()) out += pieces[p] * Scalar(P[p].a);
  return out;
}

}  // namespace

ImDirection::ImDirection(std::array<Quad5, 3> w) : w_(std::move(w)) {
  int s = 0;
  for (const auto& x : w_)
    if ((s = sign_of(x)) != 0) break;
  if (s == 0) throw std::invalid_argument("zero direction");
  if (s < 0)
    for (auto& x : w_) x = -x;
}

ImDirection ImDirection::unit(const Rational& a, const Rational& b, const Rational& c) {
  if (a * a + b * b + c * c != 1) throw std::invalid_argument("direction is not a unit vector");
  return ImDirection({Quad5(a), Quad5(b), Quad5(c)});
}

ImDirection ImDirection::along(const Rational& a, const Rational& b, const Rational& c) {
  return ImDirection({Quad5(a), Quad5(b), Quad5(c)});
}

std::array<double, 3> ImDirection::numeric() const {
  std::array<double, 3> u{};
  double n = 0;
  for (int i = 0; i < 3; ++i) {
    u[i] = w_[i].to_double();
    n += u[i] * u[i];
  }
  n = std::sqrt(n);
  for (auto& x : u) x /= n;
  return u;
}

std::array<Quad5, 6> ImDirection::projector() const {
  const Quad5 inv = (w_[0] * w_[0] + w_[1] * w_[1] + w_[2] * w_[2]).inverse();
  std::array<Quad5, 6> P;
  for (int p = 0; p < 6; ++p) P[p] = w_[kPairs[p].first] * w_[kPairs[p].second] * inv;
  return P;
}

bool ImDirection::has_rational_projector() const {
  for (const auto& x : projector())
    if (!x.is_rational()) return false;
  return true;
}

std::optional<std::array<Rational, 3>> ImDirection::exact_unit() const {
  for (const auto& x : w_)
    if (!x.is_rational()) return std::nullopt;
  Rational root;
  if (!rational_sqrt(w_[0].a * w_[0].a + w_[1].a * w_[1].a + w_[2].a * w_[2].a, root)) return std::nullopt;
  return std::array<Rational, 3>{w_[0].a / root, w_[1].a / root, w_[2].a / root};
}

Quad5 dot_squared(const ImDirection& u, const ImDirection& v) {
  const auto P = u.projector(), Q = v.projector();
  Quad5 tr;
  for (int p = 0; p < 6; ++p) {
    const Quad5 t = P[p] * Q[p];
    tr += kPairs[p].first == kPairs[p].second ? t : t + t;
  }
  return tr;
}

std::array<Rational, 16> quaternion_structure(const std::array<Rational, 3>& u) {
  return Quaternion<Rational>(0, u[0], u[1], u[2]).left_matrix();
}

std::array<double, 16> quaternion_structure(const std::array<double, 3>& u) {
  return QuaternionD(0, u[0], u[1], u[2]).left_matrix();
}

std::array<Rational, 16> su2_action(const Quaternion<Rational>& q) { return q.conj().right_matrix(); }
std::array<double, 16> su2_action(const QuaternionD& q) { return q.conj().right_matrix(); }

std::array<double, 3> plane_class(const std::array<double, 4>& e1, const std::array<double, 4>& e2) {
  const QuaternionD a(e1[0], e1[1], e1[2], e1[3]), b(e2[0], e2[1], e2[2], e2[3]);
  const QuaternionD u = b * a.conj();
  return {u[1], u[2], u[3]};
}

QuaternionicForms quaternionic_forms(const std::array<Rational, 3>& u) {
  if (u[0] * u[0] + u[1] * u[1] + u[2] * u[2] != 1) throw std::invalid_argument("direction is not a unit vector");
  const auto M = quaternion_structure(u);
  InvariantForm::Terms alpha, beta, gamma, Omega;
  for (int s = 0; s < kH; ++s) {
    alpha[FormKey::make(uint8_t(1u << s), 0)].add_term(Monomial::var(s), Scalar(1));
    for (int t = 0; t < kH; ++t) {
      const Rational& m = M[s * kH + t];
      if (m == 0) continue;
      beta[FormKey::make(uint8_t(1u << t), 0)].add_term(Monomial::var(s), Scalar(m));
      gamma[FormKey::make(0, uint8_t(1u << t))].add_term(Monomial::var(s), Scalar(m));
      if (s < t) Omega[FormKey::make(uint8_t((1u << s) | (1u << t)), 0)].add_term(Monomial(), Scalar(m));
    }
  }
  return {InvariantForm::from_ambient(kH, alpha), InvariantForm::from_ambient(kH, beta),
          InvariantForm::from_ambient(kH, gamma), InvariantForm::from_ambient(kH, Omega)};
}

const std::array<InvariantForm, 6>& z_form_pieces() {
  static const std::array<InvariantForm, 6> pieces = symmetric_pieces([](int a, int b) {
    const auto& fa = axis_forms()[a];
    const auto& fb = axis_forms()[b];
    return wedge(fa.beta, d(fb.beta)) * Scalar(Rational(1, 8), -1) +
           wedge(fa.gamma, fb.Omega) * Scalar(Rational(1, 4), -1);
  });
  return pieces;
}

const std::array<InvariantForm, 6>& rumin_golden_pieces() {
  static const std::array<InvariantForm, 6> pieces = symmetric_pieces([](int a, int b) {
    const auto& fa = axis_forms()[a];
    const auto& fb = axis_forms()[b];
    return wedge(wedge(fa.alpha, fa.beta), d(fb.gamma)) * Scalar(Rational(1, 2), -1);
  });
  return pieces;
}

InvariantForm z_form(const ImDirection& u) { return contract_pieces(z_form_pieces(), u); }
InvariantForm rumin_golden(const ImDirection& u) { return contract_pieces(rumin_golden_pieces(), u); }
ValuationRep z_rep(const ImDirection& u) { return ValuationRep(z_form(u), BaseForm(kH)); }

namespace {

const std::array<Scalar, 36>& piece_gram() {
  static const std::array<Scalar, 36> gram = [] {
    std::array<Scalar, 36> g;
    std::array<ValuationRep, 6> reps;
    std::vector<PreparedValuation> prepared;
    for (int p = 0; p < 6; ++p) {
      reps[p] = ValuationRep(z_form_pieces()[p], BaseForm(kH));
      prepared.push_back(prepare_for_pairing(reps[p]));
    }
    for (int p = 0; p < 6; ++p)
      for (int q = 0; q < 6; ++q) g[p * 6 + q] = pairing(reps[p], prepared[q]);
    return g;
  }();
  return gram;
}

}  // namespace

Scalar gram_zz(const ImDirection& u, const ImDirection& v) {
  if (u.has_rational_projector() && v.has_rational_projector()) return pairing(z_rep(u), z_rep(v));
  const auto P = u.projector(), Q = v.projector();
  Scalar5 sum;
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) sum += (P[p] * Q[q]) * Scalar5(piece_gram()[p * 6 + q]);
  return sum.require_scalar();
}

Scalar tasaki_density(const ImDirection& u, const ImDirection& v) {
  const Quad5 c = dot_squared(u, v);
  if (!c.is_rational()) throw std::logic_error("(u.v)^2 is irrational");
  return Scalar(Rational(1, 4) * (1 + c.a));
}

double tasaki_density(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  const double c = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return 0.25 * (1.0 + c * c);
}

std::array<ImDirection, 6> icosahedron_directions() {
  const Quad5 phi = Quad5::golden_ratio(), one(1), zero(0);
  return {ImDirection({zero, one, phi}), ImDirection({zero, one, -phi}), ImDirection({one, phi, zero}),
          ImDirection({one, -phi, zero}), ImDirection({phi, zero, one}), ImDirection({phi, zero, -one})};
}

std::array<ImDirection, 6> alesker_directions() {
  return {ImDirection::along(1, 0, 0), ImDirection::along(0, 1, 0), ImDirection::along(0, 0, 1),
          ImDirection::along(1, 1, 0), ImDirection::along(1, 0, 1), ImDirection::along(0, 1, 1)};
}

ValuationBasis su2_basis(Su2BasisChoice choice) {
  ValuationBasis basis;
  basis.add_simple("chi", intrinsic_volume_rep(kH, 0));
  basis.add_simple("vol1", intrinsic_volume_rep(kH, 1));
  if (choice == Su2BasisChoice::Alesker) {
    const char* names[] = {"Z_i", "Z_j", "Z_k", "Z_(i+j)/sqrt2", "Z_(i+k)/sqrt2", "Z_(j+k)/sqrt2"};
    const auto dirs = alesker_directions();
    for (int i = 0; i < 6; ++i) basis.add_simple(names[i], z_rep(dirs[i]));
  } else {
    const int first = int(basis.atoms.size());
    for (const auto& w : z_form_pieces()) basis.atoms.emplace_back(w, BaseForm(kH));
    const auto dirs = icosahedron_directions();
    for (int i = 0; i < 6; ++i) {
      ValuationBasis::Element e{"Z_" + std::to_string(i + 1), 2, {}};
      const auto P = dirs[i].projector();
      for (int p = 0; p < 6; ++p)
        if (!P[p].is_zero()) e.parts.emplace_back(first + p, P[p]);
      basis.elements.push_back(std::move(e));
    }
  }
  basis.add_simple("vol3", intrinsic_volume_rep(kH, 3));
  basis.add_simple("vol", intrinsic_volume_rep(kH, 4));
  return basis;
}

}  // namespace valcalc
