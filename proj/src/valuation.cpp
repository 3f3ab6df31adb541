#include "valcalc/valuation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace valcalc {

namespace {

Scalar sign_pow(int n) { return Scalar(n % 2 ? -1L : 1L); }

void check_same_dim(const ValuationRep& a, const ValuationRep& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("valuations of different dimension");
}

}  // namespace

ValuationRep::ValuationRep(InvariantForm w, BaseForm p) : omega(std::move(w)), phi(std::move(p)) {
  if (omega.dim() != phi.dim()) throw DimensionMismatch("omega and phi of different dimension");
  if (!omega.is_zero() && omega.degree() != dim() - 1)
    throw std::invalid_argument("omega must have degree n-1");
  for (const auto& [mask, c] : phi.terms())
    if (__builtin_popcount(mask) != dim()) throw std::invalid_argument("phi must have degree n");
}

ValuationRep ValuationRep::component(int k) const {
  const int n = dim();
  if (k < 0 || k > n) throw std::out_of_range("valuation degree out of range");
  if (k == n) return ValuationRep(InvariantForm(n), phi);
  return ValuationRep(omega.bidegree_part(k, n - 1 - k), BaseForm(n));
}

std::vector<int> ValuationRep::degrees() const {
  std::vector<int> out;
  for (int k = 0; k <= dim(); ++k)
    if (!component(k).is_zero()) out.push_back(k);
  return out;
}

int ValuationRep::homogeneous_degree() const {
  const auto ds = degrees();
  if (ds.size() != 1) throw std::invalid_argument("valuation is not homogeneous");
  return ds[0];
}

ValuationRep& ValuationRep::operator+=(const ValuationRep& o) {
  check_same_dim(*this, o);
  omega += o.omega;
  phi += o.phi;
  return *this;
}

ValuationRep& ValuationRep::operator-=(const ValuationRep& o) {
  check_same_dim(*this, o);
  omega -= o.omega;
  phi += o.phi * Scalar(-1);
  return *this;
}

ValuationRep& ValuationRep::operator*=(const Scalar& s) {
  omega *= s;
  phi *= s;
  return *this;
}

ValuationRep euler_verdier(const ValuationRep& mu) {
  const Scalar s = sign_pow(mu.dim());
  return ValuationRep(pullback(BundleMap::antipode(), mu.omega) * s, mu.phi * s);
}

ValuationRep derivation(const ValuationRep& mu) {
  const int n = mu.dim();
  InvariantForm w = lie_T(mu.omega);
  if (!mu.phi.is_zero()) w += contract(VectorField::reeb(n), mu.phi.pullback());
  return ValuationRep(w, BaseForm(n));
}

ValuationRep signature(const ValuationRep& mu) {
  const int n = mu.dim();
  const InvariantForm closed = rumin(mu.omega).D_omega + mu.phi.pullback();
  return ValuationRep(hodge_star(closed), BaseForm(n));
}

ValuationRep laplace(const ValuationRep& mu) {
  return signature(signature(mu)) * sign_pow(mu.dim());
}

PreparedValuation::PreparedValuation(const ValuationRep& mu)
    : dim_(mu.dim()),
      closed_(rumin(mu.omega).D_omega + mu.phi.pullback()),
      push_(fiber_integrate(mu.omega)) {}

Scalar product_top(const ValuationRep& mu1, const PreparedValuation& mu2) {
  const int n = mu1.dim();
  if (n != mu2.dim()) throw DimensionMismatch("valuations of different dimension");
  Scalar top = fiber_integrate(wedge(mu1.omega, mu2.closed_form())).top() * sign_pow(n);
  // phi_1 is top-degree, so only the 0-form part of pi_* omega_2 contributes.
  top += mu1.phi.top() * mu2.pushforward().coeff(0);
  return top;
}

Scalar product_top(const ValuationRep& mu1, const ValuationRep& mu2) {
  return product_top(mu1, PreparedValuation(mu2));
}

PreparedValuation prepare_for_pairing(const ValuationRep& mu) {
  return PreparedValuation(euler_verdier(mu));
}

Scalar pairing(const ValuationRep& mu1, const PreparedValuation& sigma_mu2) {
  return product_top(mu1, sigma_mu2);
}

Scalar pairing(const ValuationRep& mu1, const ValuationRep& mu2) {
  check_same_dim(mu1, mu2);
  return product_top(mu1, euler_verdier(mu2));
}

Scalar unit_ball_volume(int m) {
  // omega_0 = 1, omega_1 = 2, omega_m = 2 pi / m * omega_{m-2}
  if (m < 0) throw std::invalid_argument("negative dimension");
  Scalar w = (m % 2) ? Scalar(2) : Scalar(1);
  for (int j = (m % 2) ? 3 : 2; j <= m; j += 2) w *= Scalar(Rational(2, j), 1);
  return w;
}

ValuationRep intrinsic_volume_rep(int dim, int k) {
  if (k < 0 || k > dim) throw std::out_of_range("intrinsic volume degree out of range");
  if (k == dim) return ValuationRep(InvariantForm(dim), BaseForm::volume(dim));

  // sum over permutations s of sgn(s) v_{s0} dx_{s1..sk} dv_{s(k+1)..s(n-1)}
  std::vector<int> perm(dim);
  std::iota(perm.begin(), perm.end(), 0);
  InvariantForm::Terms raw;
  do {
    int inversions = 0;
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
        if (perm[a] > perm[b]) ++inversions;
    uint8_t dx = 0, dv = 0;
    int sign = inversions % 2 ? -1 : 1;
    // Sorting the dx and dv blocks individually.
    auto sort_sign = [](std::vector<int> idx) {
      int inv = 0;
      for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = a + 1; b < idx.size(); ++b)
          if (idx[a] > idx[b]) ++inv;
      return inv % 2 ? -1 : 1;
    };
    std::vector<int> xs(perm.begin() + 1, perm.begin() + 1 + k);
    std::vector<int> vs(perm.begin() + 1 + k, perm.end());
    for (int i : xs) dx |= uint8_t(1u << i);
    for (int i : vs) dv |= uint8_t(1u << i);
    sign *= sort_sign(xs) * sort_sign(vs);
    raw[FormKey::make(dx, dv)].add_term(Monomial::var(perm[0]), Scalar(long(sign)));
  } while (std::next_permutation(perm.begin(), perm.end()));

  // On the unit ball this form integrates to (n-1)! * area(S^{n-1}); scale to
  // V_k(B^n) = C(n,k) omega_n / omega_{n-k}.
  mpz_class fact = 1, binom = 1;
  for (int i = 2; i < dim; ++i) fact *= i;
  for (int i = 0; i < k; ++i) binom = binom * (dim - i) / (i + 1);
  const Scalar area = unit_ball_volume(dim) * Scalar(long(dim));
  const Scalar target = unit_ball_volume(dim) * Scalar(Rational(binom)) * unit_ball_volume(dim - k).inverse();
  const Scalar scale = target * (area * Scalar(Rational(fact))).inverse();
  return ValuationRep(InvariantForm::from_ambient(dim, raw) * scale, BaseForm(dim));
}

void ValuationBasis::add_simple(std::string label, const ValuationRep& mu) {
  atoms.push_back(mu);
  elements.push_back({std::move(label), mu.homogeneous_degree(), {{int(atoms.size()) - 1, Quad5(1)}}});
}

std::vector<Scalar> gram_matrix(const ValuationBasis& basis, int threads) {
  const int na = int(basis.atoms.size());
  std::vector<int> atom_degree(na);
  for (int a = 0; a < na; ++a) atom_degree[a] = basis.atoms[a].homogeneous_degree();
  const int n = basis.dim();

  std::vector<std::pair<int, int>> needed;
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < na; ++b)
      if (atom_degree[a] + atom_degree[b] == n) needed.emplace_back(a, b);

  std::vector<PreparedValuation> prepared;
  prepared.reserve(na);
  for (int b = 0; b < na; ++b) prepared.push_back(prepare_for_pairing(basis.atoms[b]));

  std::vector<Scalar> atom_gram(size_t(na) * na);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (size_t i = 0; i < needed.size(); ++i) {
    const auto [a, b] = needed[i];
    atom_gram[size_t(a) * na + b] = pairing(basis.atoms[a], prepared[b]);
  }

  const size_t m = basis.size();
  std::vector<Scalar> gram(m * m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      Scalar5 g;
      for (const auto& [a, ca] : basis.elements[i].parts)
        for (const auto& [b, cb] : basis.elements[j].parts)
          g += (ca * cb) * Scalar5(atom_gram[size_t(a) * na + b]);
      gram[i * m + j] = g.require_scalar();
    }
  return gram;
}

}  // namespace valcalc

