#include "valcalc/poly.hpp"

#include <cmath>
#include <stdexcept>

namespace valcalc {

Monomial Monomial::from_exponents(std::span<const int> e) {
  if (e.size() > kMaxDim) throw std::invalid_argument("monomial has too many variables");
  uint32_t bits = 0;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 || e[i] > 255) throw std::invalid_argument("monomial exponent out of range");
    bits |= uint32_t(e[i]) << (8 * i);
  }
  return Monomial(bits);
}

Poly Poly::monomial(Monomial m, const Scalar& c) {
  Poly p;
  p.add_term(m, c);
  return p;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

void Poly::add_term(Monomial m, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Poly Poly::derivative(int i) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    int e = m.exp(i);
    if (e == 0) continue;
    r.add_term(m.with_exp(i, e - 1), c * Scalar(long(e)));
  }
  return r;
}

Poly Poly::substitute_linear(int dim, std::span<const Scalar> matrix) const {
  std::vector<Poly> images(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (!matrix[i * dim + j].is_zero()) images[i].add_term(Monomial::var(j), matrix[i * dim + j]);
  Poly r;
  for (const auto& [m, c] : terms_) {
    Poly term(c);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < m.exp(i); ++k) term = term * images[i];
    r += term;
  }
  return r;
}

Poly Poly::negate_variables() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_)
    if (m.degree() % 2) c = -c;
  return r;
}

double Poly::evaluate(std::span<const double> v) const {
  double sum = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = c.to_double();
    for (size_t i = 0; i < v.size(); ++i)
      for (int k = 0; k < m.exp(int(i)); ++k) t *= v[i];
    sum += t;
  }
  return sum;
}

namespace {

// Adds c * (1 - sum_{i<last} v_i^2)^q * base to out.
void add_sphere_power(Poly& out, int last, int q, Monomial base, const Scalar& c) {
  // Enumerate j_0..j_{last-1} with sum <= q; coefficient
  // (-1)^J q! / ((q-J)! prod j_i!).
  std::vector<int> j(last, 0);
  auto factorial = [](int k) {
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  const mpz_class qf = factorial(q);
  while (true) {
    int total = 0;
    for (int x : j) total += x;
    if (total <= q) {
      mpz_class den = factorial(q - total);
      Monomial m = base;
      for (int i = 0; i < last; ++i) {
        den *= factorial(j[i]);
        m = m * Monomial::var(i, 2 * j[i]);
      }
      Rational coef(qf, den);
      coef.canonicalize();
      if (total % 2) coef = -coef;
      out.add_term(m, c * Scalar(coef));
    }
    int i = 0;
    while (i < last) {
      if (++j[i] <= q) break;
      j[i] = 0;
      ++i;
    }
    if (i == last) break;
  }
}

}  // namespace

Poly reduce_poly(const Poly& p, int dim) {
  const int last = dim - 1;
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    const int e = m.exp(last);
    if (e <= 1) {
      out.add_term(m, c);
      continue;
    }
    add_sphere_power(out, last, e / 2, m.with_exp(last, e % 2), c);
  }
  return out;
}

bool is_reduced(const Poly& p, int dim) {
  for (const auto& [m, c] : p.terms())
    if (m.exp(dim - 1) > 1) return false;
  return true;
}

Poly sphere_ideal_generator(int dim) {
  Poly p(Scalar(-1));
  for (int i = 0; i < dim; ++i) p.add_term(Monomial::var(i, 2), Scalar(1));
  return p;
}

namespace {

// Gamma(k/2) for k >= 1 as (rational, half-power of pi): Gamma(k/2) = q * pi^{h/2}.
std::pair<Rational, int> gamma_half(int k) {
  if (k % 2 == 0) {
    mpz_class f = 1;
    for (int i = 2; i < k / 2; ++i) f *= i;
    return {Rational(f), 0};
  }
  // Gamma(m + 1/2) = (2m)! / (4^m m!) sqrt(pi)
  int m = (k - 1) / 2;
  mpz_class num = 1, den = 1;
  for (int i = 2; i <= 2 * m; ++i) num *= i;
  for (int i = 2; i <= m; ++i) den *= i;
  for (int i = 0; i < m; ++i) den *= 4;
  Rational q(num, den);
  q.canonicalize();
  return {q, 1};
}

}  // namespace

Scalar sphere_monomial_integral(std::span<const int> e, int dim) {
  // 2 prod Gamma((e_i+1)/2) / Gamma((|e|+n)/2)
  Rational q = 2;
  int half_pi = 0;
  int total = 0;
  for (int i = 0; i < dim; ++i) {
    const int ei = i < int(e.size()) ? e[i] : 0;
    if (ei % 2) return Scalar();
    auto [g, h] = gamma_half(ei + 1);
    q *= g;
    half_pi += h;
    total += ei;
  }
  auto [g, h] = gamma_half(total + dim);
  q /= g;
  half_pi -= h;
  if (half_pi % 2) throw std::logic_error("sphere integral left a stray sqrt(pi)");
  return Scalar(q, half_pi / 2);
}

Scalar sphere_monomial_integral(Monomial m, int dim) {
  auto e = m.exponents();
  return sphere_monomial_integral(std::span<const int>(e.data(), dim), dim);
}

Scalar sphere_integral(const Poly& p, int dim) {
  Scalar sum;
  for (const auto& [m, c] : p.terms()) sum += c * sphere_monomial_integral(m, dim);
  return sum;
}

}  // namespace valcalc
