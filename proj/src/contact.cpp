#include "valcalc/contact.hpp"

#include <map>
#include <set>

#include "valcalc/linsolve.hpp"

namespace valcalc {

ContactData ContactData::of(int dim) {
  ContactData c{dim, InvariantForm(dim), VectorField::reeb(dim)};
  for (int i = 0; i < dim; ++i) c.alpha += InvariantForm::dx(dim, i).times(Poly::var(i));
  return c;
}

namespace {

// Canonical monomials (e_n <= 1) of degree <= max_degree with degree % 2 == parity.
std::vector<Monomial> ansatz_monomials(int dim, int max_degree, int parity) {
  std::vector<Monomial> out;
  std::vector<int> e(dim, 0);
  while (true) {
    int deg = 0;
    for (int x : e) deg += x;
    if (deg <= max_degree && deg % 2 == parity && e[dim - 1] <= 1)
      out.push_back(Monomial::from_exponents(e));
    int i = 0;
    while (i < dim) {
      if (++e[i] <= max_degree) break;
      e[i] = 0;
      ++i;
    }
    if (i == dim) break;
  }
  return out;
}

std::vector<uint8_t> masks_of_size(int dim, int k) {
  std::vector<uint8_t> out;
  for (unsigned m = 0; m < (1u << dim); ++m)
    if (__builtin_popcount(m) == k) out.push_back(uint8_t(m));
  return out;
}

int term_parity(FormKey key, Monomial m) { return (m.degree() + key.dv_degree()) % 2; }

// Splits a form into its (dx-degree, dv-degree, parity) blocks.
std::map<std::tuple<int, int, int>, InvariantForm> blocks(const InvariantForm& f) {
  std::map<std::tuple<int, int, int>, InvariantForm::Terms> raw;
  for (const auto& [key, p] : f.terms())
    for (const auto& [m, c] : p.terms()) {
      auto& t = raw[{key.dx_degree(), key.dv_degree(), term_parity(key, m)}];
      t[key].add_term(m, c);
    }
  std::map<std::tuple<int, int, int>, InvariantForm> out;
  for (auto& [k, t] : raw) out.emplace(k, InvariantForm::from_ambient(f.dim(), t));
  return out;
}

// Solves alpha ^ d alpha ^ xi = target for xi of bidegree (p, q) and the given
// parity, with coefficient degree <= max_degree. Returns false if inconsistent.
bool solve_block(const InvariantForm& alpha_dalpha, const InvariantForm& target, int p, int q,
                 int parity, int max_degree, InvariantForm& xi) {
  const int dim = target.dim();
  const auto dxs = masks_of_size(dim, p);
  const auto dvs = masks_of_size(dim, q);
  const auto monos = ansatz_monomials(dim, max_degree, (parity + q) % 2);

  std::vector<std::pair<FormKey, Monomial>> unknowns;
  std::map<std::pair<FormKey, Monomial>, std::vector<std::pair<int, Rational>>> rows;
  for (uint8_t I : dxs)
    for (uint8_t J : dvs) {
      const FormKey key = FormKey::make(I, J);
      InvariantForm::Terms t;
      t[key] = Poly(Scalar(1));
      const InvariantForm image_key = wedge(alpha_dalpha, InvariantForm::from_ambient(dim, t));
      for (Monomial m : monos) {
        const int col = int(unknowns.size());
        unknowns.emplace_back(key, m);
        const InvariantForm image = image_key.times(Poly::monomial(m));
        for (const auto& [k, poly] : image.terms())
          for (const auto& [mm, c] : poly.terms()) {
            if (!c.is_rational()) throw std::logic_error("irrational ansatz coefficient");
            rows[{k, mm}].emplace_back(col, c.coeff(0));
          }
      }
    }
  std::map<std::pair<FormKey, Monomial>, Scalar> rhs;
  for (const auto& [k, poly] : target.terms())
    for (const auto& [m, c] : poly.terms()) {
      rhs[{k, m}] = c;
      rows[{k, m}];
    }

  ExactSolver solver(int(unknowns.size()));
  for (const auto& [where, entries] : rows) {
    auto r = rhs.find(where);
    if (!solver.add_row(entries, r == rhs.end() ? Scalar() : r->second)) return false;
  }
  const auto x = solver.solution();
  InvariantForm::Terms t;
  for (size_t c = 0; c < x.size(); ++c)
    if (!x[c].is_zero()) t[unknowns[c].first].add_term(unknowns[c].second, x[c]);
  xi = InvariantForm::from_ambient(dim, t);
  return true;
}

}  // namespace

RuminResult rumin(const InvariantForm& omega, int degree_cap) {
  const int n = omega.dim();
  if (!omega.is_zero() && omega.degree() != n - 1)
    throw DimensionMismatch("rumin expects a form of degree n-1");
  const ContactData c = ContactData::of(n);
  const InvariantForm d_omega = d(omega);
  const InvariantForm alpha_dalpha = wedge(c.alpha, d(c.alpha));

  RuminResult result{d_omega, InvariantForm(n), 0};
  const InvariantForm target = -wedge(c.alpha, d_omega);
  if (target.is_zero()) return result;

  const int start = std::max(0, d_omega.poly_degree()) + 2;
  for (const auto& [block, rhs] : blocks(target)) {
    const auto [p, q, parity] = block;
    if (p < 2 || q < 1) throw NoRuminSolution("rumin: target has no admissible bidegree");
    InvariantForm xi(n);
    int deg = start;
    while (deg > degree_cap || !solve_block(alpha_dalpha, rhs, p - 2, q - 1, parity, deg, xi)) {
      deg += 2;
      if (deg > std::max(degree_cap, start)) throw NoRuminSolution("no solution at degree cap");
    }
    result.xi += xi;
    result.ansatz_degree = std::max(result.ansatz_degree, deg);
  }
  result.D_omega = d(omega + wedge(c.alpha, result.xi));
  return result;
}

bool verify_zero_valuation(const InvariantForm& omega, const BaseForm& phi) {
  if (!fiber_integrate(omega).is_zero()) return false;
  return (rumin(omega).D_omega + phi.pullback()).is_zero();
}

}  // namespace valcalc
