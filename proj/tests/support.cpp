#include "support.hpp"

#include <cmath>
#include <sstream>

#include "valcalc/contact.hpp"
#include "valcalc/kinematic.hpp"

namespace valcalc::testing {

Rational random_rational(Rng& rng, int max_num, int max_den) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

Poly random_poly(Rng& rng, int dim, int max_degree, int terms) {
  std::uniform_int_distribution<int> e(0, max_degree);
  Poly p;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> exps(kMaxDim, 0);
    int budget = e(rng);
    for (int i = 0; i < dim && budget > 0; ++i) {
      const int k = std::uniform_int_distribution<int>(0, budget)(rng);
      exps[std::uniform_int_distribution<int>(0, dim - 1)(rng)] += k;
      budget -= k;
    }
    p.add_term(Monomial::from_exponents(exps), Scalar(random_rational(rng)));
  }
  return reduce_poly(p, dim);
}

namespace {

uint8_t random_mask(Rng& rng, int dim, int k) {
  std::vector<int> idx(dim);
  for (int i = 0; i < dim; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  uint8_t m = 0;
  for (int i = 0; i < k; ++i) m |= uint8_t(1u << idx[i]);
  return m;
}

double det(std::vector<double> a, int n) {
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[p * n + c])) p = r;
    if (a[p * n + c] == 0.0) return 0.0;
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
      d = -d;
    }
    d *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return d;
}

// (dx_I ^ dv_J)(X_rows) with the rows given by index into `vectors`.
double basis_value(uint8_t dx, uint8_t dv, int dim, std::span<const double> vectors, const std::vector<int>& rows) {
  std::vector<int> cols;
  for (int i = 0; i < dim; ++i)
    if (dx & (1u << i)) cols.push_back(i);
  for (int i = 0; i < dim; ++i)
    if (dv & (1u << i)) cols.push_back(dim + i);
  const int k = int(rows.size());
  if (int(cols.size()) != k) return 0.0;
  if (k == 0) return 1.0;
  std::vector<double> m(size_t(k) * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) m[r * k + c] = vectors[size_t(rows[r]) * 2 * dim + cols[c]];
  return det(m, k);
}

}  // namespace

InvariantForm random_form(Rng& rng, int dim, int k, int l, int terms, int max_degree) {
  InvariantForm::Terms raw;
  for (int t = 0; t < terms; ++t)
    raw[FormKey::make(random_mask(rng, dim, k), random_mask(rng, dim, l))] += random_poly(rng, dim, max_degree, 2);
  return InvariantForm::from_ambient(dim, raw);
}

ValuationRep random_valuation(Rng& rng, int dim, int max_degree) {
  ValuationRep mu(dim);
  for (int k = 0; k < dim; ++k) mu.omega += random_form(rng, dim, k, dim - 1 - k, 2, max_degree);
  mu.phi = BaseForm::volume(dim, Scalar(random_rational(rng)));
  return mu;
}

std::array<Rational, 3> random_unit3(Rng& rng) {
  const Rational p = random_rational(rng, 7, 5), q = random_rational(rng, 7, 5);
  const Rational s = p * p + q * q;
  return {2 * p / (s + 1), 2 * q / (s + 1), (s - 1) / (s + 1)};
}

Quaternion<Rational> random_unit_quaternion(Rng& rng) {
  const Rational a = random_rational(rng, 7, 5), b = random_rational(rng, 7, 5), c = random_rational(rng, 7, 5);
  const Rational s = a * a + b * b + c * c;
  return Quaternion<Rational>(Rational(2 * a / (s + 1)), Rational(2 * b / (s + 1)), Rational(2 * c / (s + 1)),
                              Rational((s - 1) / (s + 1)));
}

VectorField random_tangent_field(Rng& rng, int dim) {
  VectorField X(dim);
  const Scalar c(random_rational(rng));
  for (int i = 0; i < dim; ++i) X.x(i) = Poly::var(i) * c;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      const Scalar a(random_rational(rng));
      X.v(i) += Poly::var(j) * a;
      X.v(j) -= Poly::var(i) * a;
    }
  return X;
}

SvSample random_sv_sample(Rng& rng, int dim, int k) {
  std::normal_distribution<double> g;
  SvSample s;
  s.v.resize(dim);
  double n2 = 0;
  for (auto& x : s.v) {
    x = g(rng);
    n2 += x * x;
  }
  for (auto& x : s.v) x /= std::sqrt(n2);
  s.vectors.resize(size_t(k) * 2 * dim);
  for (int r = 0; r < k; ++r) {
    double* X = &s.vectors[size_t(r) * 2 * dim];
    for (int i = 0; i < 2 * dim; ++i) X[i] = g(rng);
    double dot = 0;
    for (int i = 0; i < dim; ++i) dot += X[dim + i] * s.v[i];
    for (int i = 0; i < dim; ++i) X[dim + i] -= dot * s.v[i];
  }
  return s;
}

double numeric_d(const InvariantForm& w, std::span<const double> v, std::span<const double> vectors, int k) {
  const int n = w.dim();
  const double h = 0.05;
  double total = 0.0;
  for (const auto& [key, f] : w.terms()) {
    for (int j = 0; j < k; ++j) {
      // directional derivative of f along the fiber part of X_j
      auto at = [&](double t) {
        std::vector<double> p(v.begin(), v.end());
        for (int i = 0; i < n; ++i) p[i] += t * vectors[size_t(j) * 2 * n + n + i];
        return f.evaluate(p);
      };
      // eighth-order central stencil, exact for the polynomial degrees used here
      const double df = ((at(-4 * h) - at(4 * h)) / 280.0 - 4.0 * (at(-3 * h) - at(3 * h)) / 105.0 +
                         (at(-2 * h) - at(2 * h)) / 5.0 - 4.0 * (at(-h) - at(h)) / 5.0) /
                        h;
      std::vector<int> rows;
      for (int r = 0; r < k; ++r)
        if (r != j) rows.push_back(r);
      total += ((j % 2) ? -1.0 : 1.0) * df * basis_value(key.dx(), key.dv(), n, vectors, rows);
    }
  }
  return total;
}

double numeric_wedge(const NumericForm& a, int p, const NumericForm& b, int q, std::span<const double> v,
                     std::span<const double> vectors) {
  const int n = a.dim();
  const int k = p + q;
  double total = 0.0;
  for (uint32_t subset = 0; subset < (1u << k); ++subset) {
    if (__builtin_popcount(subset) != p) continue;
    std::vector<double> first, second;
    int inversions = 0, seen_second = 0;
    for (int r = 0; r < k; ++r) {
      const double* X = &vectors[size_t(r) * 2 * n];
      if (subset & (1u << r)) {
        first.insert(first.end(), X, X + 2 * n);
        inversions += seen_second;
      } else {
        second.insert(second.end(), X, X + 2 * n);
        ++seen_second;
      }
    }
    total += ((inversions % 2) ? -1.0 : 1.0) * a.evaluate(v, first, p) * b.evaluate(v, second, q);
  }
  return total;
}

bool lp_feasible(std::vector<double> A, std::vector<double> b, int m, int n) {
  // tableau: m rows of [A | I | b], objective = sum of artificials
  const int cols = n + m + 1;
  std::vector<double> T(size_t(m + 1) * cols, 0.0);
  std::vector<int> basis(m);
  for (int r = 0; r < m; ++r) {
    const double s = b[r] < 0 ? -1.0 : 1.0;
    for (int c = 0; c < n; ++c) T[r * cols + c] = s * A[r * n + c];
    T[r * cols + n + r] = 1.0;
    T[r * cols + cols - 1] = s * b[r];
    basis[r] = n + r;
  }
  double* obj = &T[size_t(m) * cols];
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < cols; ++c)
      if (c < n || c == cols - 1) obj[c] -= T[r * cols + c];
  const double eps = 1e-11;
  for (int iter = 0; iter < 10000; ++iter) {
    int enter = -1;
    for (int c = 0; c < n + m; ++c)
      if (obj[c] < -eps) {
        enter = c;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    double best = 0;
    for (int r = 0; r < m; ++r) {
      const double a = T[r * cols + enter];
      if (a <= eps) continue;
      const double ratio = T[r * cols + cols - 1] / a;
      if (leave < 0 || ratio < best - eps || (std::abs(ratio - best) <= eps && basis[r] < basis[leave])) {
        leave = r;
        best = ratio;
      }
    }
    if (leave < 0) break;
    const double piv = T[leave * cols + enter];
    for (int c = 0; c < cols; ++c) T[leave * cols + c] /= piv;
    for (int r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double f = T[r * cols + enter];
      if (f == 0) continue;
      for (int c = 0; c < cols; ++c) T[r * cols + c] -= f * T[leave * cols + c];
    }
    basis[leave] = enter;
  }
  return -obj[cols - 1] < 1e-9;
}

bool hulls_intersect(const std::vector<Vec>& P, const std::vector<Vec>& Q) {
  const int d = int(P.front().size());
  const int n = int(P.size() + Q.size());
  const int m = d + 2;
  std::vector<double> A(size_t(m) * n, 0.0), b(m, 0.0);
  for (size_t i = 0; i < P.size(); ++i) {
    for (int c = 0; c < d; ++c) A[c * n + i] = P[i][c];
    A[d * n + i] = 1.0;
  }
  for (size_t j = 0; j < Q.size(); ++j) {
    const size_t col = P.size() + j;
    for (int c = 0; c < d; ++c) A[c * n + col] = -Q[j][c];
    A[(d + 1) * n + col] = 1.0;
  }
  b[d] = b[d + 1] = 1.0;
  return lp_feasible(A, b, m, n);
}

std::vector<Vec> box_vertices(const Box& b) {
  const int n = int(b.center.size());
  std::vector<Vec> out;
  for (int s = 0; s < (1 << n); ++s) {
    Vec p = b.center;
    for (int i = 0; i < n; ++i) {
      const double sign = (s >> i & 1) ? 1.0 : -1.0;
      for (int r = 0; r < n; ++r) p[r] += sign * b.half_extents[i] * b.rotation[r * n + i];
    }
    out.push_back(p);
  }
  return out;
}

namespace {

struct Collector {
  std::vector<PropertyResult> results;
  void add(std::string name, bool ok, std::string detail = "") {
    results.push_back({std::move(name), ok, std::move(detail)});
  }
};

Scalar sign_scalar(int e) { return Scalar(e % 2 ? -1 : 1); }

}  // namespace

std::vector<PropertyResult> exterior_properties(uint64_t seed) {
  Collector out;
  Rng rng(seed);
  for (int n : {3, 4}) {
    const std::string tag = " (n=" + std::to_string(n) + ")";
    bool comm = true, assoc = true, d2 = true, leibniz = true, anti = true;
    for (int t = 0; t < 12; ++t) {
      const int p1 = int(rng() % 2), p2 = int(rng() % 2), q1 = int(rng() % 2), q2 = int(rng() % 2);
      const InvariantForm a = random_form(rng, n, p1, q1), b = random_form(rng, n, p2, q2),
                          c = random_form(rng, n, int(rng() % 2), 0);
      const int da = p1 + q1, db = p2 + q2;
      comm &= wedge(a, b) == wedge(b, a) * sign_scalar(da * db);
      assoc &= wedge(wedge(a, b), c) == wedge(a, wedge(b, c));
      d2 &= d(d(a)).is_zero() && d(d(wedge(a, b))).is_zero();
      leibniz &= d(wedge(a, b)) == wedge(d(a), b) + wedge(a, d(b)) * sign_scalar(da);
      const VectorField X = random_tangent_field(rng, n);
      anti &= contract(X, wedge(a, b)) == wedge(contract(X, a), b) + wedge(a, contract(X, b)) * sign_scalar(da);
    }
    out.add("wedge graded commutativity" + tag, comm);
    out.add("wedge associativity" + tag, assoc);
    out.add("d^2 = 0" + tag, d2);
    out.add("Leibniz rule" + tag, leibniz);
    out.add("interior product antiderivation" + tag, anti);

    bool reduce_ok = true, proj_ok = true;
    for (int t = 0; t < 8; ++t) {
      const Poly p = random_poly(rng, n, 4, 4);
      reduce_ok &= reduce_poly(p, n) == p;
      reduce_ok &= reduce_poly(sphere_ideal_generator(n) * random_poly(rng, n, 2, 3), n).is_zero();
      const InvariantForm a = random_form(rng, n, 1, 1);
      InvariantForm::Terms raw;
      for (int i = 0; i < n; ++i) raw[FormKey::make(0, uint8_t(1u << i))] += Poly::var(i);
      const InvariantForm vdv = InvariantForm::from_ambient(n, raw);
      proj_ok &= vdv.is_zero();
      proj_ok &= InvariantForm::from_ambient(n, a.terms()) == a;
      InvariantForm::Terms wraw;
      for (const auto& [k, c] : a.terms())
        for (int i = 0; i < n; ++i) {
          if (k.dv() & (1u << i)) continue;
          const int s = merge_sign(uint8_t(1u << i), k.dv());
          wraw[FormKey::make(k.dx(), uint8_t(k.dv() | (1u << i)))] += Poly::var(i) * c * Scalar(s);
        }
      // sum v_i dv_i ^ a up to a global sign
      proj_ok &= InvariantForm::from_ambient(n, wraw).is_zero();
    }
    out.add("reduce_poly idempotent and kills the sphere ideal" + tag, reduce_ok);
    out.add("tangential projection idempotent and kills sum v_i dv_i" + tag, proj_ok);

    bool hodge_sym = true, hodge_inv = true;
    const int N = 2 * n - 1;
    for (int t = 0; t < 8; ++t) {
      const int k = int(rng() % 2) + 1, l = int(rng() % 2);
      const InvariantForm a = random_form(rng, n, k, l), b = random_form(rng, n, k, l);
      hodge_sym &= wedge(a, hodge_star(b)) == wedge(b, hodge_star(a));
      hodge_inv &= hodge_star(hodge_star(a)) == a * sign_scalar((k + l) * (N - k - l));
    }
    out.add("Hodge star symmetry a^*b = b^*a" + tag, hodge_sym);
    out.add("Hodge star involution" + tag, hodge_inv);

    bool stokes = true;
    for (int t = 0; t < 6; ++t) {
      const InvariantForm xi = random_form(rng, n, n - 1, n - 2, 3, 3);
      stokes &= fiber_integrate(d(xi)).is_zero();
      const InvariantForm eta = random_form(rng, n, int(rng() % n), n - 2, 3, 3);
      stokes &= fiber_integrate(d(eta)).is_zero();
    }
    out.add("fiber Stokes: pi_* d = 0" + tag, stokes);

    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int p = int(rng() % 2) + 1, q = int(rng() % 2);
      const InvariantForm a = random_form(rng, n, p, 0), b = random_form(rng, n, 0, q + 1);
      const int deg = p + q + 1;
      const SvSample s = random_sv_sample(rng, n, deg + 1);
      const std::span<const double> first(s.vectors.data(), size_t(deg) * 2 * n);
      auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
      worst = std::max(worst, rel(NumericForm(wedge(a, b)).evaluate(s.v, first, deg),
                                  numeric_wedge(NumericForm(a), p, NumericForm(b), q + 1, s.v, first)));
      worst = std::max(worst, rel(NumericForm(d(wedge(a, b))).evaluate(s.v, s.vectors, deg + 1),
                                  numeric_d(wedge(a, b), s.v, s.vectors, deg + 1)));
      const VectorField X = random_tangent_field(rng, n);
      std::vector<double> Xv(2 * n);
      for (int i = 0; i < n; ++i) {
        Xv[i] = X.x(i).evaluate(s.v);
        Xv[n + i] = X.v(i).evaluate(s.v);
      }
      std::vector<double> withX(Xv);
      withX.insert(withX.end(), first.begin(), first.begin() + size_t(deg - 1) * 2 * n);
      worst = std::max(worst, rel(NumericForm(contract(X, wedge(a, b))).evaluate(s.v, first, deg - 1),
                                  NumericForm(wedge(a, b)).evaluate(s.v, withX, deg)));
      std::vector<double> mv(s.v), flipped(first.begin(), first.end());
      for (auto& x : mv) x = -x;
      for (int r = 0; r < deg; ++r)
        for (int i = 0; i < n; ++i) flipped[size_t(r) * 2 * n + n + i] *= -1.0;
      worst = std::max(worst, rel(NumericForm(pullback(BundleMap::antipode(), wedge(a, b))).evaluate(s.v, first, deg),
                                  NumericForm(wedge(a, b)).evaluate(mv, flipped, deg)));
    }
    std::ostringstream os;
    os << "max relative deviation " << worst;
    out.add("symbolic vs numeric oracle at 20 points" + tag, worst < 1e-9, os.str());
  }
  return out.results;
}

std::vector<PropertyResult> rumin_properties(uint64_t seed) {
  Collector out;
  Rng rng(seed);
  for (int n : {3, 4}) {
    const std::string tag = " (n=" + std::to_string(n) + ")";
    const ContactData C = ContactData::of(n);
    bool vertical = true, closed = true, linear = true, shift = true;
    for (int t = 0; t < 4; ++t) {
      const int k = int(rng() % n);
      const InvariantForm w1 = random_form(rng, n, k, n - 1 - k), w2 = random_form(rng, n, k, n - 1 - k);
      const RuminResult r1 = rumin(w1), r2 = rumin(w2);
      vertical &= wedge(C.alpha, contract(C.reeb, r1.D_omega)) == r1.D_omega;
      closed &= d(r1.D_omega).is_zero();
      const Scalar a(random_rational(rng)), b(random_rational(rng));
      linear &= rumin(w1 * a + w2 * b).D_omega == r1.D_omega * a + r2.D_omega * b;
      const InvariantForm theta = random_form(rng, n, std::max(0, k - 2), n - 1 - k);
      const InvariantForm xi2 = r1.xi + wedge(C.alpha, theta);
      shift &= d(w1 + wedge(C.alpha, xi2)) == r1.D_omega;
    }
    out.add("Rumin differential is vertical" + tag, vertical);
    out.add("d(D omega) = 0" + tag, closed);
    out.add("Rumin differential is linear" + tag, linear);
    out.add("D omega independent of the xi solution" + tag, shift);
  }
  return out.results;
}

std::vector<PropertyResult> pairing_properties(uint64_t seed) {
  Collector out;
  Rng rng(seed);
  const ValuationBasis basis = su2_basis(Su2BasisChoice::Alesker);
  std::vector<PreparedValuation> prepared;
  for (const auto& a : basis.atoms) prepared.push_back(prepare_for_pairing(a));
  bool symmetric = true, graded = true;
  const int n = basis.dim();
  for (size_t i = 0; i < basis.atoms.size(); ++i)
    for (size_t j = i; j < basis.atoms.size(); ++j) {
      const Scalar ij = pairing(basis.atoms[i], prepared[j]);
      const Scalar ji = pairing(basis.atoms[j], prepared[i]);
      symmetric &= ij == ji;
      if (basis.atoms[i].homogeneous_degree() + basis.atoms[j].homogeneous_degree() != n) graded &= ij.is_zero();
    }
  out.add("pairing symmetric on the Alesker basis", symmetric);
  out.add("pairing vanishes off complementary degrees", graded);

  bool kernel = true;
  for (size_t i = 0; i < basis.atoms.size(); ++i) {
    const int k = std::max(0, std::min(n - 2, int(rng() % n)));
    const InvariantForm eta = random_form(rng, n, k, n - 2 - k, 2, 2);
    ValuationRep shifted = basis.atoms[i];
    shifted.omega += d(eta);
    kernel &= fiber_integrate(d(eta)).is_zero();
    for (size_t j = 0; j < basis.atoms.size(); ++j) kernel &= pairing(shifted, prepared[j]) == pairing(basis.atoms[i], prepared[j]);
  }
  out.add("adding exact d eta changes no pairing", kernel);
  return out.results;
}

std::vector<PropertyResult> kinematic_properties(uint64_t seed) {
  Collector out;
  Rng rng(seed);
  for (auto choice : {Su2BasisChoice::Icosahedron, Su2BasisChoice::Alesker}) {
    const ValuationBasis basis = su2_basis(choice);
    const std::vector<Scalar> G = gram_matrix(basis);
    const KinematicTensor T = kinematic_tensor(basis);
    const size_t m = basis.size();
    bool identity = true;
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < m; ++j) {
        Scalar s;
        for (size_t l = 0; l < m; ++l) s += T.at(i, l) * G[l * m + j];
        identity &= s == Scalar(i == j ? 1 : 0);
      }
    out.add(std::string("tensor x Gram = identity (") + (choice == Su2BasisChoice::Alesker ? "Alesker" : "icosahedron") +
                " basis)",
            identity);
  }
  const ValuationBasis ico = su2_basis(Su2BasisChoice::Icosahedron), ale = su2_basis(Su2BasisChoice::Alesker);
  const KinematicTensor Ti = kinematic_tensor(ico), Ta = kinematic_tensor(ale);
  const BasisEvaluator Ei(ico), Ea(ale);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  std::vector<ConvexBody> bodies;
  bodies.push_back(Ball{{0, 0, 0, 0}, 0.7});
  bodies.push_back(make_box({U(rng), U(rng), U(rng), U(rng)}, {0.5, 0.3, 0.2, 0.4}));
  bodies.push_back(Simplex{{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0.2, 0.1, 0.3, 1}}});
  {
    const double c = std::cos(0.4), s = std::sin(0.4);
    bodies.push_back(make_box({0, 0, 0, 0}, {0.6, 0.6, 0.05, 0.05}, {c, 0, -s, 0, 0, c, 0, -s, s, 0, c, 0, 0, s, 0, c}));
  }
  std::vector<std::vector<double>> ei, ea;
  for (const auto& K : bodies) {
    ei.push_back(Ei.evaluate(K));
    ea.push_back(Ea.evaluate(K));
  }
  double basis_dev = 0, sym_dev = 0, trans_dev = 0;
  for (size_t a = 0; a < bodies.size(); ++a)
    for (size_t b = 0; b < bodies.size(); ++b) {
      const double ri = rhs_kinematic(Ti, ei[a], ei[b]);
      const double ra = rhs_kinematic(Ta, ea[a], ea[b]);
      basis_dev = std::max(basis_dev, std::abs(ri - ra) / std::abs(ri));
      sym_dev = std::max(sym_dev, std::abs(ri - rhs_kinematic(Ti, ei[b], ei[a])) / std::abs(ri));
    }
  for (size_t a = 0; a < bodies.size(); ++a) {
    const ConvexBody moved = transform(bodies[a], identity_matrix(4), {0.3, -1.2, 0.7, 2.0});
    const double r0 = rhs_kinematic(Ti, ei[a], ei[0]);
    trans_dev = std::max(trans_dev, std::abs(rhs_kinematic(Ti, Ei.evaluate(moved), ei[0]) - r0) / std::abs(r0));
  }
  std::ostringstream os;
  os << "max relative deviation " << basis_dev;
  out.add("rhs_kinematic independent of the basis", basis_dev < 1e-9, os.str());
  out.add("rhs_kinematic symmetric in K, L", sym_dev < 1e-9);
  out.add("rhs_kinematic translation invariant", trans_dev < 1e-8);
  return out.results;
}

}  // namespace valcalc::testing
