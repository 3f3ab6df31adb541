#include "valcalc/bodies.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>

#include "valcalc/numeric.hpp"

namespace valcalc {

namespace {

constexpr double kGeomTol = 1e-9;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

Vec axpy(double a, const Vec& x, Vec y) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
  return y;
}

Vec scaled(const Vec& x, double a) {
  Vec y = x;
  for (auto& c : y) c *= a;
  return y;
}

Vec sub(const Vec& a, const Vec& b) { return axpy(-1.0, b, a); }

// Gram-Schmidt; vectors within tolerance of the running span are dropped.
std::vector<Vec> orthonormalize(const std::vector<Vec>& vs) {
  std::vector<Vec> out;
  for (const Vec& v : vs) {
    Vec w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& e : out) w = axpy(-dot(w, e), e, w);
    const double n = norm(w);
    if (n > kGeomTol * std::max(1.0, norm(v))) out.push_back(scaled(w, 1.0 / n));
  }
  return out;
}

// Orthonormal basis of the orthogonal complement of span(basis) in R^n.
std::vector<Vec> complement(const std::vector<Vec>& basis, int n) {
  std::vector<Vec> all = basis;
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    all.push_back(e);
  }
  auto full = orthonormalize(all);
  return std::vector<Vec>(full.begin() + long(basis.size()), full.end());
}

double gram_volume(const std::vector<Vec>& vs) {
  const int k = int(vs.size());
  if (k == 0) return 1.0;
  std::vector<double> g(size_t(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g[i * k + j] = dot(vs[i], vs[j]);
  return std::sqrt(std::max(0.0, determinant(g, k)));
}

Vec column(const Vec& m, int n, int j) {
  Vec c(n);
  for (int i = 0; i < n; ++i) c[i] = m[i * n + j];
  return c;
}

Vec mat_vec(const Vec& A, const Vec& x) {
  const int n = int(x.size());
  Vec y(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[i] += A[i * n + j] * x[j];
  return y;
}

Vec identity(int n) {
  Vec I(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) I[i * n + i] = 1.0;
  return I;
}

void check_orthogonal(const Vec& A, int n, const char* what) {
  if (int(A.size()) != n * n) throw InvalidBody(std::string(what) + ": matrix has wrong size");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += A[k * n + i] * A[k * n + j];
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > kGeomTol) throw InvalidBody(std::string(what) + ": not orthogonal");
    }
}

Vec polygon_point(const PlanarPolygon& P, const std::array<double, 2>& xy) {
  return axpy(xy[1], P.frame[1], axpy(xy[0], P.frame[0], P.base));
}

// Face data before the orthant splitting of the complement of the affine hull.
struct RawFace {
  int dim;
  std::vector<Vec> frame;
  double volume;
  std::vector<Vec> generators;  // outward facet normals inside the hull
};

struct RawLattice {
  std::vector<Vec> hull_complement;
  std::vector<RawFace> faces;
};

RawLattice raw_lattice(const Box& B) {
  const int n = int(B.center.size());
  RawLattice L;
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    if (B.half_extents[i] > 0)
      active.push_back(i);
    else
      L.hull_complement.push_back(column(B.rotation, n, i));
  }
  const int m = int(active.size());
  int combos = 1;
  for (int i = 0; i < m; ++i) combos *= 3;
  for (int code = 0; code < combos; ++code) {
    RawFace f{0, {}, 1.0, {}};
    int c = code;
    for (int i : active) {
      const int s = c % 3 - 1;
      c /= 3;
      const Vec axis = column(B.rotation, n, i);
      if (s == 0) {
        f.frame.push_back(axis);
        f.volume *= 2.0 * B.half_extents[i];
      } else {
        f.generators.push_back(scaled(axis, double(s)));
      }
    }
    f.dim = int(f.frame.size());
    L.faces.push_back(std::move(f));
  }
  return L;
}

RawLattice raw_lattice(const Simplex& S) {
  const auto& p = S.vertices;
  const int n = int(p[0].size());
  const int m = int(p.size()) - 1;
  std::vector<Vec> edges;
  for (int i = 1; i <= m; ++i) edges.push_back(sub(p[i], p[0]));
  const auto U = orthonormalize(edges);
  RawLattice L;
  L.hull_complement = complement(U, n);

  std::vector<Vec> normals(m + 1);
  if (m >= 1)
    for (int j = 0; j <= m; ++j) {
      const int anchor = j == 0 ? 1 : 0;
      std::vector<Vec> dirs;
      for (int i = 0; i <= m; ++i)
        if (i != j && i != anchor) dirs.push_back(sub(p[i], p[anchor]));
      const auto Bj = orthonormalize(dirs);
      Vec nu = sub(p[j], p[anchor]);
      for (const Vec& e : Bj) nu = axpy(-dot(nu, e), e, nu);
      normals[j] = scaled(nu, -1.0 / norm(nu));
    }

  for (unsigned mask = 1; mask < (1u << (m + 1)); ++mask) {
    std::vector<int> in;
    for (int i = 0; i <= m; ++i)
      if (mask & (1u << i)) in.push_back(i);
    std::vector<Vec> dirs;
    for (size_t a = 1; a < in.size(); ++a) dirs.push_back(sub(p[in[a]], p[in[0]]));
    RawFace f;
    f.dim = int(dirs.size());
    f.frame = orthonormalize(dirs);
    double fact = 1.0;
    for (int i = 2; i <= f.dim; ++i) fact *= i;
    f.volume = gram_volume(dirs) / fact;
    for (int j = 0; j <= m; ++j)
      if (!(mask & (1u << j))) f.generators.push_back(normals[j]);
    L.faces.push_back(std::move(f));
  }
  return L;
}

RawLattice raw_lattice(const PlanarPolygon& P) {
  const int n = int(P.base.size());
  const int m = int(P.vertices.size());
  RawLattice L;
  L.hull_complement = complement({P.frame[0], P.frame[1]}, n);
  std::vector<Vec> normals(m);
  std::vector<double> lengths(m);
  double area = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto& a = P.vertices[i];
    const auto& b = P.vertices[(i + 1) % m];
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    lengths[i] = std::hypot(dx, dy);
    normals[i] = axpy(-dx / lengths[i], P.frame[1], scaled(P.frame[0], dy / lengths[i]));
    area += 0.5 * (a[0] * b[1] - a[1] * b[0]);
  }
  for (int i = 0; i < m; ++i) L.faces.push_back({0, {}, 1.0, {normals[(i + m - 1) % m], normals[i]}});
  for (int i = 0; i < m; ++i) {
    const Vec e = sub(polygon_point(P, P.vertices[(i + 1) % m]), polygon_point(P, P.vertices[i]));
    L.faces.push_back({1, {scaled(e, 1.0 / lengths[i])}, lengths[i], {normals[i]}});
  }
  L.faces.push_back({2, {P.frame[0], P.frame[1]}, area, {}});
  return L;
}

// Gauss-Legendre nodes and weights on [0, 1].
struct Rule {
  std::vector<double> x, w;
};

template <int N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (size_t i = 0; i < a.size(); ++i) {
    r.x.push_back(0.5 * (1.0 + a[i]));
    r.w.push_back(0.5 * w[i]);
    if (a[i] != 0.0) {
      r.x.push_back(0.5 * (1.0 - a[i]));
      r.w.push_back(0.5 * w[i]);
    }
  }
  return r;
}

const Rule& coarse_rule() {
  static const Rule r = make_rule<7>();
  return r;
}

const Rule& fine_rule() {
  static const Rule r = make_rule<11>();
  return r;
}

using Arr = std::array<double, kMaxDim>;
using Frame = std::array<Arr, kMaxDim>;
// density(v, q, |q|, magnitude): the integrand, or a bound on its term sizes
using Density = std::function<double(const Arr&, const Frame&, int, bool)>;

Arr to_arr(const Vec& v) {
  Arr a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

// Integrates density(v, tangent frame) over a spherical simplex; the tangent
// frame q is oriented so that det[v, a, q] > 0 for the face frame a.
class SimplexIntegrator {
public:
  SimplexIntegrator(const SphericalSimplex& s, const std::vector<Vec>& face_frame, double tol, int max_depth,
                    Density density)
      : tol_(tol), max_depth_(max_depth), density_(std::move(density)) {
    n_ = int(s.vertices[0].size());
    r_ = int(s.vertices.size());
    const std::vector<Vec> E = orthonormalize(s.vertices);
    if (int(E.size()) != r_) throw InvalidBody("degenerate spherical simplex");
    vol_w_ = gram_volume(s.vertices);
    for (int i = 0; i < r_; ++i) {
      W_[i] = to_arr(s.vertices[i]);
      E_[i] = to_arr(E[i]);
    }
    na_ = int(face_frame.size());
    for (int i = 0; i < na_; ++i) a_[i] = to_arr(face_frame[i]);
  }

  double integrate() {
    const int d = r_ - 1;
    if (d == 0) return value_at(W_[0]);
    std::vector<double> lo(d, 0.0), hi(d, 1.0);
    return cell(lo, hi, 0);
  }

private:
  double value_at(const Arr& x, bool magnitude = false) const {
    double len2 = 0.0;
    for (int i = 0; i < n_; ++i) len2 += x[i] * x[i];
    const double inv = 1.0 / std::sqrt(len2);
    Arr v{};
    for (int i = 0; i < n_; ++i) v[i] = x[i] * inv;
    // Orthonormal basis of span(W) orthogonal to v, by a Householder reflection.
    Arr h{};
    for (int i = 0; i < r_; ++i)
      for (int c = 0; c < n_; ++c) h[i] += E_[i][c] * v[c];
    h[0] += h[0] >= 0 ? 1.0 : -1.0;
    double hh = 0.0;
    for (int i = 0; i < r_; ++i) hh += h[i] * h[i];
    Frame q{};
    const int nq = r_ - 1;
    for (int j = 1; j < r_; ++j)
      for (int i = 0; i < r_; ++i) {
        const double Hij = (i == j ? 1.0 : 0.0) - 2.0 * h[i] * h[j] / hh;
        for (int c = 0; c < n_; ++c) q[j - 1][c] += Hij * E_[i][c];
      }
    if (magnitude) return std::abs(density_(v, q, nq, true));
    std::array<double, kMaxDim * kMaxDim> m{};
    int row = 0;
    auto put = [&](const Arr& u) {
      for (int c = 0; c < n_; ++c) m[row * n_ + c] = u[c];
      ++row;
    };
    put(v);
    for (int i = 0; i < na_; ++i) put(a_[i]);
    for (int i = 0; i < nq; ++i) put(q[i]);
    const double det = determinant(std::span<const double>(m.data(), size_t(n_) * n_), n_);
    double sign = det >= 0 ? 1.0 : -1.0;
    if (nq > 0 && sign < 0) {
      for (int c = 0; c < n_; ++c) q[0][c] = -q[0][c];
      sign = 1.0;
    }
    return sign * density_(v, q, nq, false);
  }

  // Integral over the Duffy image of [lo, hi]^d with the given rule;
  // also accumulates the integral of |f|.
  std::pair<double, double> apply(const Rule& rule, const std::vector<double>& lo, const std::vector<double>& hi,
                                  bool magnitude = false) const {
    const int d = r_ - 1;
    const int p = int(rule.x.size());
    std::array<int, kMaxDim> idx{};
    double sum = 0.0, abs_sum = 0.0;
    double cell_vol = 1.0;
    for (int i = 0; i < d; ++i) cell_vol *= hi[i] - lo[i];
    Arr u{}, lambda{};
    while (true) {
      double w = cell_vol;
      for (int i = 0; i < d; ++i) {
        u[i] = lo[i] + (hi[i] - lo[i]) * rule.x[idx[i]];
        w *= rule.w[idx[i]];
      }
      double rest = 1.0, jac = 1.0;
      for (int i = 0; i < d; ++i) {
        lambda[i] = rest * u[i];
        for (int e = 0; e < d - 1 - i; ++e) jac *= 1.0 - u[i];
        rest *= 1.0 - u[i];
      }
      lambda[d] = rest;
      Arr x{};
      for (int j = 0; j < r_; ++j)
        for (int c = 0; c < n_; ++c) x[c] += lambda[j] * W_[j][c];
      double len2 = 0.0;
      for (int c = 0; c < n_; ++c) len2 += x[c] * x[c];
      const double f = value_at(x, magnitude) * jac * vol_w_ / std::pow(len2, 0.5 * r_) * w;
      sum += f;
      abs_sum += std::abs(f);
      int i = 0;
      while (i < d) {
        if (++idx[i] < p) break;
        idx[i] = 0;
        ++i;
      }
      if (i == d) break;
    }
    return {sum, abs_sum};
  }

  double cell(const std::vector<double>& lo, const std::vector<double>& hi, int depth) const {
    const auto [q1, a1] = apply(coarse_rule(), lo, hi);
    const auto [q2, a2] = apply(fine_rule(), lo, hi);
    (void)a1;
    if (std::abs(q2 - q1) <= tol_ * a2) return q2;
    // Terms that cancel exactly leave only rounding noise, which no refinement removes.
    if (std::abs(q2 - q1) <= kNoiseFloor * apply(fine_rule(), lo, hi, true).second) return q2;
    if (depth >= max_depth_) throw NonConvergence("spherical quadrature did not reach the tolerance");
    const int d = r_ - 1;
    double total = 0.0;
    for (unsigned child = 0; child < (1u << d); ++child) {
      std::vector<double> clo(d), chi(d);
      for (int i = 0; i < d; ++i) {
        const double mid = 0.5 * (lo[i] + hi[i]);
        clo[i] = (child & (1u << i)) ? mid : lo[i];
        chi[i] = (child & (1u << i)) ? hi[i] : mid;
      }
      total += cell(clo, chi, depth + 1);
    }
    return total;
  }

  static constexpr double kNoiseFloor = 1e-12;
  Frame W_{}, E_{}, a_{};
  int na_ = 0;
  double tol_;
  int max_depth_;
  Density density_;
  int n_ = 0, r_ = 0;
  double vol_w_ = 1.0;
};

double resolve_tolerance(const EvalOptions& opt) {
  return opt.tolerance > 0 ? opt.tolerance : default_quadrature_tolerance();
}

// Integral of the pulled-back form over one face piece: the face frame a
// enters as (a, 0), the fiber frame q as (t q, q).
double face_integral(const NumericForm& omega, const FaceLatticeEntry& face, double t, double tol, int max_depth) {
  const int n = omega.dim();
  const int k = face.dim;
  NumericForm part = t == 0.0 ? omega.bidegree_part(k, n - 1 - k) : omega;
  if (part.terms().empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : face.normal_region) {
    SimplexIntegrator integ(s, face.frame, tol, max_depth, [&](const Arr& v, const Frame& q, int nq, bool magnitude) {
      std::array<double, 32> vecs{};
      int c = 0;
      for (const Vec& a : face.frame) {
        for (int i = 0; i < n; ++i) vecs[c * 2 * n + i] = a[i];
        ++c;
      }
      for (int j = 0; j < nq; ++j) {
        for (int i = 0; i < n; ++i) {
          vecs[c * 2 * n + i] = t * q[j][i];
          vecs[c * 2 * n + n + i] = q[j][i];
        }
        ++c;
      }
      const std::span<const double> vs(v.data(), size_t(n));
      const std::span<const double> span(vecs.data(), size_t(c) * 2 * n);
      return magnitude ? part.magnitude(vs, span, c) : part.evaluate(vs, span, c);
    });
    total += integ.integrate();
  }
  return face.volume * total;
}

double region_measure(const FaceLatticeEntry& face, double tol, int max_depth) {
  double total = 0.0;
  for (const auto& s : face.normal_region) {
    SimplexIntegrator integ(s, face.frame, tol, max_depth, [](const Arr&, const Frame&, int, bool) { return 1.0; });
    total += std::abs(integ.integrate());
  }
  return total;
}

// Parallel over faces with results summed in face order.
template <class F>
double sum_over_faces(const std::vector<FaceLatticeEntry>& faces, int threads, F&& f) {
  std::vector<double> parts(faces.size(), 0.0);
  if (threads <= 1) {
    for (size_t i = 0; i < faces.size(); ++i) parts[i] = f(faces[i]);
  } else {
    bool failed = false;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (size_t i = 0; i < faces.size(); ++i) {
      try {
        parts[i] = f(faces[i]);
      } catch (const NonConvergence&) {
#pragma omp atomic write
        failed = true;
      }
    }
    if (failed) throw NonConvergence("spherical quadrature did not reach the tolerance");
  }
  double total = 0.0;
  for (double p : parts) total += p;
  return total;
}

double steiner_volume(const ConvexBody& K, const std::vector<FaceLatticeEntry>& faces, double t, double tol,
                      int max_depth) {
  const int n = body_dim(K);
  double vol = body_volume(K);
  for (const auto& f : faces) {
    if (f.normal_region.empty()) continue;
    const int r = n - f.dim;
    vol += f.volume * region_measure(f, tol, max_depth) * std::pow(t, r) / r;
  }
  return vol;
}

}  // namespace

int body_dim(const ConvexBody& K) {
  return std::visit(
      [](const auto& b) -> int {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) return int(b.center.size());
        if constexpr (std::is_same_v<T, Box>) return int(b.center.size());
        if constexpr (std::is_same_v<T, Simplex>) return b.vertices.empty() ? 0 : int(b.vertices[0].size());
        if constexpr (std::is_same_v<T, PlanarPolygon>) return int(b.base.size());
      },
      K);
}

void validate(const ConvexBody& K) {
  const int n = body_dim(K);
  if (n < 1 || n > kMaxDim) throw InvalidBody("body dimension must be between 1 and 4");
  std::visit(
      [n](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          if (!(b.radius >= 0)) throw InvalidBody("ball radius must be nonnegative");
        } else if constexpr (std::is_same_v<T, Box>) {
          if (int(b.half_extents.size()) != n) throw InvalidBody("box half_extents has wrong size");
          for (double h : b.half_extents)
            if (!(h >= 0)) throw InvalidBody("box half_extents must be nonnegative");
          check_orthogonal(b.rotation, n, "box rotation");
        } else if constexpr (std::is_same_v<T, Simplex>) {
          if (int(b.vertices.size()) > n + 1) throw InvalidBody("simplex has more than n+1 vertices");
          for (const auto& p : b.vertices)
            if (int(p.size()) != n) throw InvalidBody("simplex vertex has wrong dimension");
          std::vector<Vec> edges;
          for (size_t i = 1; i < b.vertices.size(); ++i) edges.push_back(sub(b.vertices[i], b.vertices[0]));
          if (orthonormalize(edges).size() != edges.size()) throw InvalidBody("simplex vertices are affinely dependent");
        } else if constexpr (std::is_same_v<T, PlanarPolygon>) {
          if (n < 2) throw InvalidBody("polygon needs dimension >= 2");
          for (const auto& f : b.frame)
            if (int(f.size()) != n) throw InvalidBody("polygon frame has wrong dimension");
          if (std::abs(dot(b.frame[0], b.frame[0]) - 1) > kGeomTol || std::abs(dot(b.frame[1], b.frame[1]) - 1) > kGeomTol ||
              std::abs(dot(b.frame[0], b.frame[1])) > kGeomTol)
            throw InvalidBody("polygon frame is not orthonormal");
          const size_t m = b.vertices.size();
          if (m < 3) throw InvalidBody("polygon needs at least 3 vertices");
          for (size_t i = 0; i < m; ++i) {
            const auto& a = b.vertices[i];
            const auto& c = b.vertices[(i + 1) % m];
            const auto& e = b.vertices[(i + 2) % m];
            const double cross = (c[0] - a[0]) * (e[1] - c[1]) - (c[1] - a[1]) * (e[0] - c[0]);
            if (!(cross > 0)) throw InvalidBody("polygon is not strictly convex and counterclockwise");
          }
        }
      },
      K);
}

Box make_box(Vec center, Vec half_extents) {
  const int n = int(center.size());
  return Box{std::move(center), std::move(half_extents), identity(n)};
}

Box make_box(Vec center, Vec half_extents, Vec rotation) {
  return Box{std::move(center), std::move(half_extents), std::move(rotation)};
}

Simplex make_point(Vec p) { return Simplex{{std::move(p)}}; }

PlanarPolygon regular_polygon(const std::array<Vec, 2>& frame, int m, double radius, Vec base) {
  if (base.empty()) base.assign(frame[0].size(), 0.0);
  PlanarPolygon P{frame, {}, std::move(base)};
  for (int i = 0; i < m; ++i) {
    const double a = 2.0 * M_PI * i / m;
    P.vertices.push_back({radius * std::cos(a), radius * std::sin(a)});
  }
  return P;
}

ConvexBody transform(const ConvexBody& K, const Vec& A, const Vec& t) {
  return std::visit(
      [&](const auto& b) -> ConvexBody {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return Ball{axpy(1.0, t, mat_vec(A, b.center)), b.radius};
        } else if constexpr (std::is_same_v<T, Box>) {
          const int n = int(b.center.size());
          Vec R(size_t(n) * n, 0.0);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k) R[i * n + j] += A[i * n + k] * b.rotation[k * n + j];
          return Box{axpy(1.0, t, mat_vec(A, b.center)), b.half_extents, R};
        } else if constexpr (std::is_same_v<T, Simplex>) {
          Simplex s;
          for (const auto& p : b.vertices) s.vertices.push_back(axpy(1.0, t, mat_vec(A, p)));
          return s;
        } else {
          return PlanarPolygon{{mat_vec(A, b.frame[0]), mat_vec(A, b.frame[1])}, b.vertices,
                               axpy(1.0, t, mat_vec(A, b.base))};
        }
      },
      K);
}

std::vector<FaceLatticeEntry> face_lattice(const ConvexBody& K) {
  validate(K);
  const int n = body_dim(K);
  RawLattice raw = std::visit(
      [](const auto& b) -> RawLattice {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>)
          throw InvalidBody("balls have no face lattice");
        else
          return raw_lattice(b);
      },
      K);
  const int c = int(raw.hull_complement.size());
  std::vector<FaceLatticeEntry> out;
  for (auto& f : raw.faces) {
    FaceLatticeEntry e{f.dim, f.frame, f.volume, {}};
    if (f.dim < n)
      for (unsigned signs = 0; signs < (1u << c); ++signs) {
        SphericalSimplex s{f.generators};
        for (int j = 0; j < c; ++j) s.vertices.push_back(scaled(raw.hull_complement[j], (signs & (1u << j)) ? -1.0 : 1.0));
        e.normal_region.push_back(std::move(s));
      }
    out.push_back(std::move(e));
  }
  return out;
}

double body_volume(const ConvexBody& K) {
  const int n = body_dim(K);
  return std::visit(
      [n](const auto& b) -> double {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return unit_ball_volume(n).to_double() * std::pow(b.radius, n);
        } else if constexpr (std::is_same_v<T, Box>) {
          double v = 1.0;
          for (double h : b.half_extents) v *= 2.0 * h;
          return v;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          if (int(b.vertices.size()) != n + 1) return 0.0;
          std::vector<Vec> edges;
          for (int i = 1; i <= n; ++i) edges.push_back(sub(b.vertices[i], b.vertices[0]));
          double fact = 1.0;
          for (int i = 2; i <= n; ++i) fact *= i;
          return gram_volume(edges) / fact;
        } else {
          if (n != 2) return 0.0;
          double area = 0.0;
          const size_t m = b.vertices.size();
          for (size_t i = 0; i < m; ++i) {
            const auto& a = b.vertices[i];
            const auto& c = b.vertices[(i + 1) % m];
            area += 0.5 * (a[0] * c[1] - a[1] * c[0]);
          }
          return area;
        }
      },
      K);
}

Scalar ball_value_exact(const ValuationRep& mu) {
  const int n = mu.dim();
  // v -> (v, v): dx_I ^ dv_J -> dv_I ^ dv_J
  InvariantForm::Terms raw;
  for (const auto& [key, p] : mu.omega.terms()) {
    const int s = merge_sign(key.dx(), key.dv());
    if (s == 0) continue;
    raw[FormKey::make(0, uint8_t(key.dx() | key.dv()))] += s > 0 ? p : -p;
  }
  Scalar value = fiber_integrate(InvariantForm::from_ambient(n, raw)).coeff(0);
  return value + mu.phi.top() * unit_ball_volume(n);
}

NumericValuation::NumericValuation(const ValuationRep& mu) : omega_(mu.omega), phi_(mu.phi.top().to_double()) {
  for (int k = 0; k <= mu.dim(); ++k) ball_.push_back(ball_value_exact(mu.component(k)).to_double());
}

NumericValuation::NumericValuation(const ValuationBasis& basis, const ValuationBasis::Element& element)
    : omega_(basis.dim()) {
  const int n = basis.dim();
  std::vector<Scalar5> ball(n + 1);
  for (const auto& [a, c] : element.parts) {
    const ValuationRep& mu = basis.atoms[a];
    omega_.axpy(c.to_double(), NumericForm(mu.omega));
    phi_ += c.to_double() * mu.phi.top().to_double();
    for (int k = 0; k <= n; ++k) ball[k] += c * Scalar5(ball_value_exact(mu.component(k)));
  }
  for (const auto& b : ball) ball_.push_back(b.to_double());
}

double NumericValuation::ball_value(double radius) const {
  double v = 0.0;
  for (size_t k = 0; k < ball_.size(); ++k) v += ball_[k] * std::pow(radius, double(k));
  return v;
}

double default_quadrature_tolerance() {
  if (const char* s = std::getenv("VALCALC_QUAD_TOL")) {
    char* end = nullptr;
    const double t = std::strtod(s, &end);
    if (end != s && t > 0) return t;
  }
  return 1e-9;
}

double evaluate(const NumericValuation& mu, const ConvexBody& K, const EvalOptions& opt) {
  return evaluate_tube(mu, K, 0.0, opt);
}

double evaluate(const ValuationRep& mu, const ConvexBody& K, const EvalOptions& opt) {
  return evaluate(NumericValuation(mu), K, opt);
}

double evaluate_tube(const NumericValuation& mu, const ConvexBody& K, double t, const EvalOptions& opt) {
  if (body_dim(K) != mu.dim()) throw DimensionMismatch("body and valuation of different dimension");
  if (const auto* b = std::get_if<Ball>(&K)) return mu.ball_value(b->radius + t);
  const double tol = resolve_tolerance(opt);
  const auto faces = face_lattice(K);
  double value = sum_over_faces(faces, opt.threads, [&](const FaceLatticeEntry& f) {
    return face_integral(mu.omega(), f, t, tol, opt.max_depth);
  });
  if (mu.phi() != 0.0) value += mu.phi() * (t == 0.0 ? body_volume(K) : steiner_volume(K, faces, t, tol, opt.max_depth));
  return value;
}

double evaluate_tube(const ValuationRep& mu, const ConvexBody& K, double t, const EvalOptions& opt) {
  return evaluate_tube(NumericValuation(mu), K, t, opt);
}

double klain(const NumericValuation& mu, const std::vector<Vec>& frame, const EvalOptions& opt) {
  const int n = mu.dim();
  const int k = int(frame.size());
  auto basis = orthonormalize(frame);
  if (int(basis.size()) != k) throw InvalidBody("klain frame is degenerate");
  for (const auto& c : complement(basis, n)) basis.push_back(c);
  Vec R(size_t(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R[i * n + j] = basis[j][i];
  Vec h(n, 0.0);
  for (int i = 0; i < k; ++i) h[i] = 0.5;
  return evaluate(mu, make_box(Vec(n, 0.0), h, R), opt);
}

double klain(const ValuationRep& mu, const std::vector<Vec>& frame, const EvalOptions& opt) {
  return klain(NumericValuation(mu), frame, opt);
}

Vec support_point(const ConvexBody& K, const Vec& xi) {
  return std::visit(
      [&](const auto& b) -> Vec {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Ball>) {
          const double n = norm(xi);
          return n > 0 ? axpy(b.radius / n, xi, b.center) : b.center;
        } else if constexpr (std::is_same_v<T, Box>) {
          const int n = int(b.center.size());
          Vec p = b.center;
          for (int i = 0; i < n; ++i) {
            const Vec axis = column(b.rotation, n, i);
            const double s = dot(axis, xi) >= 0 ? 1.0 : -1.0;
            p = axpy(s * b.half_extents[i], axis, p);
          }
          return p;
        } else if constexpr (std::is_same_v<T, Simplex>) {
          size_t best = 0;
          for (size_t i = 1; i < b.vertices.size(); ++i)
            if (dot(b.vertices[i], xi) > dot(b.vertices[best], xi)) best = i;
          return b.vertices[best];
        } else {
          size_t best = 0;
          double bv = -INFINITY;
          for (size_t i = 0; i < b.vertices.size(); ++i) {
            const double v = dot(polygon_point(b, b.vertices[i]), xi);
            if (v > bv) {
              bv = v;
              best = i;
            }
          }
          return polygon_point(b, b.vertices[best]);
        }
      },
      K);
}

double support(const ConvexBody& K, const Vec& xi) {
  if (const auto* b = std::get_if<Ball>(&K)) return dot(b->center, xi) + b->radius * norm(xi);
  return dot(support_point(K, xi), xi);
}

namespace {

// Closest point to the origin of conv(points), by checking the affine hull of
// every subset; returns the minimizing subset.
std::pair<Vec, std::vector<Vec>> closest_on_simplex(const std::vector<Vec>& pts) {
  const int m = int(pts.size());
  const int n = int(pts[0].size());
  double best = INFINITY;
  Vec best_p;
  std::vector<Vec> best_set;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int k = int(idx.size());
    // minimize |p0 + sum_j mu_j (p_j - p0)|
    std::vector<Vec> e;
    for (int j = 1; j < k; ++j) e.push_back(sub(pts[idx[j]], pts[idx[0]]));
    std::vector<double> lam(k, 0.0);
    if (k == 1) {
      lam[0] = 1.0;
    } else {
      const int r = k - 1;
      std::vector<double> G(size_t(r) * r), rhs(r);
      for (int a = 0; a < r; ++a) {
        for (int b = 0; b < r; ++b) G[a * r + b] = dot(e[a], e[b]);
        rhs[a] = -dot(e[a], pts[idx[0]]);
      }
      // Solve by Cramer's rule (r <= 4).
      const double det = determinant(G, r);
      if (std::abs(det) < 1e-18) continue;
      double sum = 0.0;
      for (int a = 0; a < r; ++a) {
        std::vector<double> Ga = G;
        for (int b = 0; b < r; ++b) Ga[b * r + a] = rhs[b];
        lam[a + 1] = determinant(Ga, r) / det;
        sum += lam[a + 1];
      }
      lam[0] = 1.0 - sum;
    }
    bool inside = true;
    for (double l : lam)
      if (l < -1e-12) inside = false;
    if (!inside) continue;
    Vec p(n, 0.0);
    for (int j = 0; j < k; ++j) p = axpy(lam[j], pts[idx[j]], p);
    const double d = dot(p, p);
    if (d < best - 1e-18 || (d <= best + 1e-18 && k < int(best_set.size()))) {
      best = d;
      best_p = p;
      best_set.clear();
      for (int i : idx) best_set.push_back(pts[i]);
    }
  }
  return {best_p, best_set};
}

// Core body (balls shrunk to their centers) and margin.
std::pair<ConvexBody, double> core(const ConvexBody& K) {
  if (const auto* b = std::get_if<Ball>(&K)) return {make_point(b->center), b->radius};
  return {K, 0.0};
}

}  // namespace

Intersection intersection_test(const ConvexBody& K, const ConvexBody& L, int max_iterations) {
  if (body_dim(K) != body_dim(L)) throw DimensionMismatch("bodies of different dimension");
  const auto [Kc, rK] = core(K);
  const auto [Lc, rL] = core(L);
  const double margin = rK + rL;
  const int n = body_dim(K);
  auto support_diff = [&](const Vec& d) { return sub(support_point(Kc, d), support_point(Lc, scaled(d, -1.0))); };

  Vec d(n, 0.0);
  d[0] = 1.0;
  Vec v = support_diff(d);
  std::vector<Vec> simplex{v};
  for (int iter = 0; iter < max_iterations; ++iter) {
    const double vv = dot(v, v);
    if (vv <= 1e-24) return Intersection::Intersecting;
    const double vn = std::sqrt(vv);
    const Vec w = support_diff(scaled(v, -1.0));
    const double vw = dot(v, w);
    if (vw > margin * vn + 1e-12 * std::max(1.0, vn)) return Intersection::Disjoint;
    if (vv - vw <= 1e-12 * std::max(vv, 1e-12)) return vn <= margin + 1e-12 ? Intersection::Intersecting : Intersection::Disjoint;
    simplex.push_back(w);
    auto [p, s] = closest_on_simplex(simplex);
    if (s.empty()) return Intersection::Indeterminate;
    if (dot(p, p) >= vv * (1.0 - 1e-14)) return vn <= margin + 1e-12 ? Intersection::Intersecting : Intersection::Disjoint;
    v = std::move(p);
    simplex = std::move(s);
    if (int(simplex.size()) == n + 1) return Intersection::Intersecting;
  }
  return Intersection::Indeterminate;
}

bool intersects(const ConvexBody& K, const ConvexBody& L) {
  const auto r = intersection_test(K, L);
  if (r == Intersection::Indeterminate) throw std::runtime_error("intersection test reached its iteration cap");
  return r == Intersection::Intersecting;
}

}  // namespace valcalc
