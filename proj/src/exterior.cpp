#include "valcalc/exterior.hpp"

#include <algorithm>
#include <cmath>

#include "valcalc/numeric.hpp"

namespace valcalc {

namespace {

using Terms = InvariantForm::Terms;

void check_dim(int dim) {
  if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("dimension must be between 2 and 4");
}

void raw_add(Terms& t, FormKey key, const Poly& p, int sign = 1) {
  if (p.is_zero() || sign == 0) return;
  auto [it, inserted] = t.emplace(key, sign > 0 ? p : -p);
  if (!inserted) {
    if (sign > 0)
      it->second += p;
    else
      it->second -= p;
    if (it->second.is_zero()) t.erase(it);
  }
}

int popcount(uint8_t m) { return __builtin_popcount(m); }

// Sign and key of (I1,J1) ^ (I2,J2); sign 0 when the product vanishes.
std::pair<int, FormKey> key_product(FormKey a, FormKey b) {
  const int sx = merge_sign(a.dx(), b.dx());
  if (!sx) return {0, {}};
  const int sv = merge_sign(a.dv(), b.dv());
  if (!sv) return {0, {}};
  const int swap = (a.dv_degree() * b.dx_degree()) % 2 ? -1 : 1;
  return {sx * sv * swap, FormKey::make(a.dx() | b.dx(), a.dv() | b.dv())};
}

Terms raw_wedge(const Terms& a, const Terms& b) {
  Terms r;
  for (const auto& [ka, pa] : a)
    for (const auto& [kb, pb] : b) {
      auto [s, k] = key_product(ka, kb);
      if (s) raw_add(r, k, pa * pb, s);
    }
  return r;
}

Terms raw_reduce(int dim, const Terms& t) {
  Terms r;
  for (const auto& [k, p] : t) {
    Poly q = reduce_poly(p, dim);
    if (!q.is_zero()) r.emplace(k, std::move(q));
  }
  return r;
}

// Interior product with an arbitrary polynomial field; no projection.
Terms raw_contract(int dim, const VectorField& X, const Terms& t) {
  Terms r;
  for (const auto& [key, p] : t) {
    int pos = 0;
    const uint8_t I = key.dx(), J = key.dv();
    for (int i = 0; i < dim; ++i) {
      if (!(I & (1u << i))) continue;
      const Poly& comp = X.x(i);
      if (!comp.is_zero())
        raw_add(r, FormKey::make(uint8_t(I & ~(1u << i)), J), p * comp, pos % 2 ? -1 : 1);
      ++pos;
    }
    for (int j = 0; j < dim; ++j) {
      if (!(J & (1u << j))) continue;
      const Poly& comp = X.v(j);
      if (!comp.is_zero())
        raw_add(r, FormKey::make(I, uint8_t(J & ~(1u << j))), p * comp, pos % 2 ? -1 : 1);
      ++pos;
    }
  }
  return r;
}

// rho ^ t with rho = sum_j v_j dv_j
Terms raw_rho_wedge(int dim, const Terms& t) {
  Terms r;
  for (const auto& [key, p] : t)
    for (int j = 0; j < dim; ++j) {
      if (key.dv() & (1u << j)) continue;
      // dv_j ^ dx_I ^ dv_J = (-1)^{|I|} dx_I ^ dv_j ^ dv_J
      int s = merge_sign(uint8_t(1u << j), key.dv());
      if (key.dx_degree() % 2) s = -s;
      raw_add(r, FormKey::make(key.dx(), uint8_t(key.dv() | (1u << j))), p * Poly::var(j), s);
    }
  return r;
}

Terms raw_d(int dim, const Terms& t) {
  Terms r;
  for (const auto& [key, p] : t)
    for (int j = 0; j < dim; ++j) {
      if (key.dv() & (1u << j)) continue;
      Poly dp = p.derivative(j);
      if (dp.is_zero()) continue;
      int s = merge_sign(uint8_t(1u << j), key.dv());
      if (key.dx_degree() % 2) s = -s;
      raw_add(r, FormKey::make(key.dx(), uint8_t(key.dv() | (1u << j))), dp, s);
    }
  return r;
}

}  // namespace

int merge_sign(uint8_t a, uint8_t b) {
  if (a & b) return 0;
  int inversions = 0;
  for (int j = 0; j < 8; ++j)
    if (b & (1u << j)) inversions += popcount(uint8_t(a & ~((2u << j) - 1)));
  return inversions % 2 ? -1 : 1;
}

Terms project_raw(int dim, const Terms& raw) {
  Terms reduced = raw_reduce(dim, raw);
  Terms radial = raw_contract(dim, VectorField::radial(dim), reduced);
  if (radial.empty()) return reduced;
  Terms correction = raw_rho_wedge(dim, radial);
  for (const auto& [k, p] : correction) raw_add(reduced, k, p, -1);
  return raw_reduce(dim, reduced);
}

// InvariantForm ---------------------------------------------------------------

InvariantForm::InvariantForm(int dim) : dim_(dim) { check_dim(dim); }

InvariantForm InvariantForm::from_ambient(int dim, const Terms& raw) {
  InvariantForm f(dim);
  f.terms_ = project_raw(dim, raw);
  return f;
}

InvariantForm InvariantForm::constant(int dim, const Poly& p) {
  Terms t;
  raw_add(t, FormKey{}, p);
  return from_ambient(dim, t);
}

InvariantForm InvariantForm::dx(int dim, int i) {
  InvariantForm f(dim);
  f.terms_.emplace(FormKey::make(uint8_t(1u << i), 0), Poly(Scalar(1)));
  return f;
}

InvariantForm InvariantForm::dv(int dim, int i) {
  Terms t;
  raw_add(t, FormKey::make(0, uint8_t(1u << i)), Poly(Scalar(1)));
  return from_ambient(dim, t);
}

int InvariantForm::degree() const {
  int deg = -1;
  for (const auto& [k, p] : terms_) {
    if (deg >= 0 && k.degree() != deg) throw std::logic_error("form is not homogeneous");
    deg = k.degree();
  }
  return deg;
}

InvariantForm InvariantForm::bidegree_part(int k, int l) const {
  InvariantForm f(dim_);
  for (const auto& [key, p] : terms_)
    if (key.dx_degree() == k && key.dv_degree() == l) f.terms_.emplace(key, p);
  return f;
}

int InvariantForm::poly_degree() const {
  int deg = -1;
  for (const auto& [k, p] : terms_) deg = std::max(deg, p.degree());
  return deg;
}

Poly InvariantForm::coeff(uint8_t dx_mask, uint8_t dv_mask) const {
  auto it = terms_.find(FormKey::make(dx_mask, dv_mask));
  return it == terms_.end() ? Poly() : it->second;
}

InvariantForm& InvariantForm::operator+=(const InvariantForm& o) {
  if (o.dim_ != dim_) throw DimensionMismatch("adding forms of different dimension");
  for (const auto& [k, p] : o.terms_) raw_add(terms_, k, p);
  return *this;
}

InvariantForm& InvariantForm::operator-=(const InvariantForm& o) {
  if (o.dim_ != dim_) throw DimensionMismatch("subtracting forms of different dimension");
  for (const auto& [k, p] : o.terms_) raw_add(terms_, k, p, -1);
  return *this;
}

InvariantForm& InvariantForm::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, p] : terms_) p *= s;
  return *this;
}

InvariantForm InvariantForm::operator-() const {
  InvariantForm r = *this;
  for (auto& [k, p] : r.terms_) p = -p;
  return r;
}

InvariantForm InvariantForm::times(const Poly& f) const {
  InvariantForm r(dim_);
  for (const auto& [k, p] : terms_) raw_add(r.terms_, k, p * f);
  r.terms_ = raw_reduce(dim_, r.terms_);
  return r;
}

// BaseForm ----------------------------------------------------------------------

BaseForm BaseForm::volume(int dim, const Scalar& c) {
  BaseForm f(dim);
  f.add_term(uint8_t((1u << dim) - 1), c);
  return f;
}

void BaseForm::add_term(uint8_t mask, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(mask, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Scalar BaseForm::coeff(uint8_t mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Scalar() : it->second;
}

Scalar BaseForm::top() const { return coeff(uint8_t((1u << dim_) - 1)); }

BaseForm& BaseForm::operator+=(const BaseForm& o) {
  if (o.dim_ != dim_) throw DimensionMismatch("adding base forms of different dimension");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

BaseForm& BaseForm::operator*=(const Scalar& s) {
  if (s.is_zero()) terms_.clear();
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

InvariantForm BaseForm::pullback() const {
  InvariantForm::Terms t;
  for (const auto& [m, c] : terms_) raw_add(t, FormKey::make(m, 0), Poly(c));
  return InvariantForm::from_ambient(dim_, t);
}

// VectorField ---------------------------------------------------------------------

bool VectorField::is_tangent() const {
  Poly s;
  for (int i = 0; i < dim_; ++i) s += v_[i] * Poly::var(i);
  return reduce_poly(s, dim_).is_zero();
}

VectorField VectorField::reeb(int dim) {
  VectorField T(dim);
  for (int i = 0; i < dim; ++i) T.x(i) = Poly::var(i);
  return T;
}

VectorField VectorField::radial(int dim) {
  VectorField R(dim);
  for (int i = 0; i < dim; ++i) R.v(i) = Poly::var(i);
  return R;
}

// Operations -------------------------------------------------------------------------

InvariantForm wedge(const InvariantForm& a, const InvariantForm& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("wedge of forms of different dimension");
  // Products of projected forms stay projected; only coefficients need reducing.
  return InvariantForm::from_ambient(a.dim(), raw_wedge(a.terms(), b.terms()));
}

InvariantForm d(const InvariantForm& a) { return InvariantForm::from_ambient(a.dim(), raw_d(a.dim(), a.terms())); }

InvariantForm contract(const VectorField& X, const InvariantForm& a) {
  if (X.dim() != a.dim()) throw DimensionMismatch("contracting with a field of different dimension");
  if (!X.is_tangent()) throw std::invalid_argument("vector field is not tangent to the sphere bundle");
  return InvariantForm::from_ambient(a.dim(), raw_contract(a.dim(), X, a.terms()));
}

InvariantForm lie_T(const InvariantForm& a) {
  const VectorField T = VectorField::reeb(a.dim());
  return contract(T, d(a)) + d(contract(T, a));
}

BundleMap BundleMap::linear(int dim, std::vector<Scalar> a) {
  if (int(a.size()) != dim * dim) throw std::invalid_argument("linear map has wrong size");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Scalar s;
      for (int k = 0; k < dim; ++k) s += a[k * dim + i] * a[k * dim + j];
      if (s != Scalar(i == j ? 1 : 0)) throw std::invalid_argument("linear bundle map must be orthogonal");
    }
  BundleMap m;
  m.kind = Kind::Linear;
  m.matrix = std::move(a);
  return m;
}

InvariantForm pullback(const BundleMap& map, const InvariantForm& a) {
  const int dim = a.dim();
  // Images of the coordinate 1-forms.
  std::vector<Terms> dx_img(dim), dv_img(dim);
  for (int i = 0; i < dim; ++i) {
    switch (map.kind) {
      case BundleMap::Kind::Antipode:
        raw_add(dx_img[i], FormKey::make(uint8_t(1u << i), 0), Poly(Scalar(1)));
        raw_add(dv_img[i], FormKey::make(0, uint8_t(1u << i)), Poly(Scalar(-1)));
        break;
      case BundleMap::Kind::BallShift:
        raw_add(dx_img[i], FormKey::make(uint8_t(1u << i), 0), Poly(Scalar(1)));
        raw_add(dx_img[i], FormKey::make(0, uint8_t(1u << i)), Poly(map.t));
        raw_add(dv_img[i], FormKey::make(0, uint8_t(1u << i)), Poly(Scalar(1)));
        break;
      case BundleMap::Kind::Linear:
        if (int(map.matrix.size()) != dim * dim) throw DimensionMismatch("linear map dimension");
        for (int j = 0; j < dim; ++j) {
          const Scalar& c = map.matrix[i * dim + j];
          raw_add(dx_img[i], FormKey::make(uint8_t(1u << j), 0), Poly(c));
          raw_add(dv_img[i], FormKey::make(0, uint8_t(1u << j)), Poly(c));
        }
        break;
    }
  }
  Terms out;
  for (const auto& [key, p] : a.terms()) {
    Poly coeff = p;
    if (map.kind == BundleMap::Kind::Antipode) coeff = p.negate_variables();
    if (map.kind == BundleMap::Kind::Linear) coeff = p.substitute_linear(dim, map.matrix);
    Terms acc;
    raw_add(acc, FormKey{}, coeff);
    for (int i = 0; i < dim; ++i)
      if (key.dx() & (1u << i)) acc = raw_wedge(acc, dx_img[i]);
    for (int j = 0; j < dim; ++j)
      if (key.dv() & (1u << j)) acc = raw_wedge(acc, dv_img[j]);
    for (const auto& [k, q] : acc) raw_add(out, k, q);
  }
  return InvariantForm::from_ambient(dim, out);
}

BaseForm fiber_integrate(const InvariantForm& a) {
  const int dim = a.dim();
  const uint8_t all = uint8_t((1u << dim) - 1);
  BaseForm out(dim);
  for (const auto& [key, p] : a.terms()) {
    if (key.dv_degree() != dim - 1) continue;
    const int missing = __builtin_ctz(uint8_t(all & ~key.dv()));
    // Fiber density: coefficient of dv_1..dv_n in rho ^ (p dv_J).
    const int s = merge_sign(uint8_t(1u << missing), key.dv());
    Poly density = p * Poly::var(missing);
    out.add_term(key.dx(), sphere_integral(density, dim) * Scalar(long(s)));
  }
  return out;
}

InvariantForm sphere_volume_form(int dim) {
  Terms t;
  const uint8_t all = uint8_t((1u << dim) - 1);
  for (int i = 0; i < dim; ++i)
    raw_add(t, FormKey::make(0, uint8_t(all & ~(1u << i))), Poly::var(i), i % 2 ? -1 : 1);
  return InvariantForm::from_ambient(dim, t);
}

InvariantForm total_volume_form(int dim) {
  Terms base;
  raw_add(base, FormKey::make(uint8_t((1u << dim) - 1), 0), Poly(Scalar(1)));
  return InvariantForm::from_ambient(dim, raw_wedge(base, sphere_volume_form(dim).terms()));
}

InvariantForm hodge_star(const InvariantForm& a) {
  const int dim = a.dim();
  const Terms vol = total_volume_form(dim).terms();
  // Raised coordinate 1-forms: dx_i -> d/dx_i, dv_i -> sum_l (delta_il - v_i v_l) d/dv_l.
  std::vector<VectorField> raised_x, raised_v;
  for (int i = 0; i < dim; ++i) {
    VectorField X(dim);
    X.x(i) = Poly(Scalar(1));
    raised_x.push_back(X);
    VectorField V(dim);
    for (int l = 0; l < dim; ++l) {
      Poly c = -(Poly::var(i) * Poly::var(l));
      if (l == i) c += Poly(Scalar(1));
      V.v(l) = c;
    }
    raised_v.push_back(V);
  }
  std::map<FormKey, Terms> basis_star;
  Terms out;
  for (const auto& [key, p] : a.terms()) {
    auto it = basis_star.find(key);
    if (it == basis_star.end()) {
      // *(t_1 ^ .. ^ t_k) = i_{t_k#} .. i_{t_1#} vol
      Terms acc = vol;
      for (int i = 0; i < dim; ++i)
        if (key.dx() & (1u << i)) acc = raw_contract(dim, raised_x[i], acc);
      for (int j = 0; j < dim; ++j)
        if (key.dv() & (1u << j)) acc = raw_reduce(dim, raw_contract(dim, raised_v[j], acc));
      it = basis_star.emplace(key, project_raw(dim, acc)).first;
    }
    for (const auto& [k, q] : it->second) raw_add(out, k, q * p);
  }
  return InvariantForm::from_ambient(dim, out);
}

// NumericForm --------------------------------------------------------------------------

NumericForm::NumericForm(const InvariantForm& f) : dim_(f.dim()) {
  for (const auto& [key, p] : f.terms()) {
    Term t{key, {}};
    for (const auto& [m, c] : p.terms()) {
      std::array<uint8_t, kMaxDim> e{};
      for (int i = 0; i < kMaxDim; ++i) e[i] = uint8_t(m.exp(i));
      t.poly.emplace_back(e, c.to_double());
    }
    terms_.push_back(std::move(t));
  }
}

double NumericForm::eval_poly(const Term& t, std::span<const double> v) const {
  double sum = 0.0;
  for (const auto& [e, c] : t.poly) {
    double m = c;
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < e[i]; ++k) m *= v[i];
    sum += m;
  }
  return sum;
}

double NumericForm::coeff(FormKey key, std::span<const double> v) const {
  for (const auto& t : terms_)
    if (t.key == key) return eval_poly(t, v);
  return 0.0;
}

NumericForm NumericForm::bidegree_part(int k, int l) const {
  NumericForm r;
  r.dim_ = dim_;
  for (const auto& t : terms_)
    if (t.key.dx_degree() == k && t.key.dv_degree() == l) r.terms_.push_back(t);
  return r;
}

double NumericForm::evaluate(std::span<const double> v, std::span<const double> vectors, int k) const {
  const int stride = 2 * dim_;
  double sum = 0.0;
  std::array<double, 64> m{};
  for (const auto& t : terms_) {
    if (t.key.degree() != k) continue;
    int row = 0;
    for (int i = 0; i < dim_; ++i)
      if (t.key.dx() & (1u << i)) {
        for (int c = 0; c < k; ++c) m[row * k + c] = vectors[c * stride + i];
        ++row;
      }
    for (int j = 0; j < dim_; ++j)
      if (t.key.dv() & (1u << j)) {
        for (int c = 0; c < k; ++c) m[row * k + c] = vectors[c * stride + dim_ + j];
        ++row;
      }
    const double det = determinant(std::span<const double>(m.data(), size_t(k) * k), k);
    if (det != 0.0) sum += det * eval_poly(t, v);
  }
  return sum;
}

double NumericForm::magnitude(std::span<const double> v, std::span<const double> vectors, int k) const {
  const int stride = 2 * dim_;
  double sum = 0.0;
  for (const auto& t : terms_) {
    if (t.key.degree() != k) continue;
    double bound = 1.0;
    auto row_norm = [&](int comp) {
      double r = 0.0;
      for (int c = 0; c < k; ++c) r += vectors[c * stride + comp] * vectors[c * stride + comp];
      bound *= std::sqrt(r);
    };
    for (int i = 0; i < dim_; ++i)
      if (t.key.dx() & (1u << i)) row_norm(i);
    for (int j = 0; j < dim_; ++j)
      if (t.key.dv() & (1u << j)) row_norm(dim_ + j);
    if (bound == 0.0) continue;
    double mono = 0.0;
    for (const auto& [e, c] : t.poly) {
      double m = std::abs(c);
      for (int i = 0; i < dim_; ++i)
        for (int q = 0; q < e[i]; ++q) m *= std::abs(v[i]);
      mono += m;
    }
    sum += bound * mono;
  }
  return sum;
}

NumericForm& NumericForm::axpy(double a, const NumericForm& o) {
  if (terms_.empty()) dim_ = o.dim_;
  if (o.dim_ != dim_) throw DimensionMismatch("numeric forms of different dimension");
  for (const auto& ot : o.terms_) {
    auto it = std::find_if(terms_.begin(), terms_.end(), [&](const Term& t) { return t.key == ot.key; });
    if (it == terms_.end()) {
      terms_.push_back({ot.key, {}});
      it = terms_.end() - 1;
    }
    for (const auto& [e, c] : ot.poly) {
      auto jt = std::find_if(it->poly.begin(), it->poly.end(), [&](const auto& q) { return q.first == e; });
      if (jt == it->poly.end())
        it->poly.emplace_back(e, a * c);
      else
        jt->second += a * c;
    }
  }
  return *this;
}

}  // namespace valcalc
