#include "valcalc/kinematic.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace valcalc {

std::vector<Scalar> invert_exact(const std::vector<Scalar>& m, size_t n) {
  if (m.size() != n * n) throw std::invalid_argument("matrix has wrong size");
  std::vector<Scalar> a = m, inv(n * n);
  for (size_t i = 0; i < n; ++i) inv[i * n + i] = Scalar(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = n;
    for (size_t r = col; r < n; ++r)
      if (a[r * n + col].is_unit()) {
        piv = r;
        break;
      }
    if (piv == n) {
      for (size_t r = col; r < n; ++r)
        if (!a[r * n + col].is_zero()) throw SingularMatrix("no unit pivot available (entry is not a single term)");
      throw SingularMatrix("matrix is singular");
    }
    if (piv != col)
      for (size_t j = 0; j < n; ++j) {
        std::swap(a[col * n + j], a[piv * n + j]);
        std::swap(inv[col * n + j], inv[piv * n + j]);
      }
    const Scalar p = a[col * n + col].inverse();
    for (size_t j = 0; j < n; ++j) {
      a[col * n + j] *= p;
      inv[col * n + j] *= p;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r * n + col].is_zero()) continue;
      const Scalar f = a[r * n + col];
      for (size_t j = 0; j < n; ++j) {
        a[r * n + j] -= f * a[col * n + j];
        inv[r * n + j] -= f * inv[col * n + j];
      }
    }
  }
  return inv;
}

KinematicTensor kinematic_tensor(const ValuationBasis& basis, int threads) {
  KinematicTensor t;
  for (const auto& e : basis.elements) t.labels.push_back(e.label);
  t.c = invert_exact(gram_matrix(basis, threads), basis.size());
  return t;
}

BasisEvaluator::BasisEvaluator(const ValuationBasis& basis) {
  for (const auto& e : basis.elements) elements_.emplace_back(basis, e);
}

std::vector<double> BasisEvaluator::evaluate(const ConvexBody& K, const EvalOptions& opt) const {
  std::vector<double> out;
  for (const auto& mu : elements_) out.push_back(valcalc::evaluate(mu, K, opt));
  return out;
}

double rhs_kinematic(const KinematicTensor& tensor, const std::vector<double>& eval_K,
                     const std::vector<double>& eval_L) {
  const size_t n = tensor.size();
  if (eval_K.size() != n || eval_L.size() != n) throw std::invalid_argument("evaluation vector has wrong size");
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!tensor.at(i, j).is_zero()) sum += tensor.at(i, j).to_double() * eval_K[i] * eval_L[j];
  return sum;
}

double rhs_kinematic(const ConvexBody& K, const ConvexBody& L, const EvalOptions& opt) {
  static const ValuationBasis basis = su2_basis(Su2BasisChoice::Icosahedron);
  static const KinematicTensor tensor = kinematic_tensor(basis);
  static const BasisEvaluator evaluator(basis);
  return rhs_kinematic(tensor, evaluator.evaluate(K, opt), evaluator.evaluate(L, opt));
}

QuaternionD haar_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  while (true) {
    QuaternionD q(g(rng), g(rng), g(rng), g(rng));
    const double n = std::sqrt(q.norm2());
    if (n < 1e-300) continue;
    for (auto& c : q.c) c /= n;
    return q;
  }
}

RigidMotion haar_sample(std::mt19937_64& rng, const Vec& lo, const Vec& hi) {
  RigidMotion m{haar_quaternion(rng), Vec(lo.size())};
  for (size_t i = 0; i < lo.size(); ++i) m.t[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
  return m;
}

std::mt19937_64 substream(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{uint32_t(seed), uint32_t(seed >> 32), uint32_t(stream), uint32_t(stream >> 32)};
  return std::mt19937_64(seq);
}

namespace {

struct ChunkSums {
  double sum = 0.0, sum_sq = 0.0;
  uint64_t count = 0, rejected = 0;
};

// Bounding box of K - L: coordinate i ranges over [-h_{K-L}(-e_i), h_{K-L}(e_i)].
void difference_box(const ConvexBody& K, const ConvexBody& L, Vec& lo, Vec& hi) {
  const int n = body_dim(K);
  lo.assign(n, 0.0);
  hi.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    Vec e(n, 0.0);
    e[i] = 1.0;
    Vec me(n, 0.0);
    me[i] = -1.0;
    hi[i] = support(K, e) + support(L, me);
    lo[i] = -(support(K, me) + support(L, e));
  }
}

Vec action_matrix(const QuaternionD& q) {
  const auto a = su2_action(q);
  return Vec(a.begin(), a.end());
}

ChunkSums kinematic_chunk(const ConvexBody& K, const ConvexBody& L, uint64_t seed, uint64_t chunk, uint64_t count) {
  auto rng = substream(seed, chunk);
  const int n = body_dim(K);
  const Vec zero(n, 0.0);
  ChunkSums s;
  Vec lo, hi;
  for (uint64_t i = 0; i < count; ++i) {
    const QuaternionD q = haar_quaternion(rng);
    const ConvexBody qL = transform(L, action_matrix(q), zero);
    difference_box(K, qL, lo, hi);
    double box = 1.0;
    Vec t(n);
    for (int c = 0; c < n; ++c) {
      box *= hi[c] - lo[c];
      t[c] = std::uniform_real_distribution<double>(lo[c], hi[c])(rng);
    }
    const auto r = intersection_test(K, transform(qL, identity_matrix(n), t));
    ++s.count;
    if (r == Intersection::Indeterminate) {
      ++s.rejected;
      continue;
    }
    const double score = r == Intersection::Intersecting ? box : 0.0;
    s.sum += score;
    s.sum_sq += score * score;
  }
  return s;
}

bool in_convex_polygon(const std::vector<std::array<double, 2>>& P, double x, double y) {
  const size_t m = P.size();
  for (size_t i = 0; i < m; ++i) {
    const auto& a = P[i];
    const auto& b = P[(i + 1) % m];
    if ((b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]) < 0) return false;
  }
  return true;
}

ChunkSums poincare_chunk(const PlanarPolygon& M1, const PlanarPolygon& M2, uint64_t seed, uint64_t chunk,
                         uint64_t count) {
  auto rng = substream(seed, chunk);
  const int n = 4;
  const Vec zero(n, 0.0);
  ChunkSums s;
  Vec lo, hi;
  for (uint64_t i = 0; i < count; ++i) {
    const QuaternionD q = haar_quaternion(rng);
    const auto qM2 = std::get<PlanarPolygon>(transform(M2, action_matrix(q), zero));
    difference_box(M1, qM2, lo, hi);
    double box = 1.0;
    Vec t(n);
    for (int c = 0; c < n; ++c) {
      box *= hi[c] - lo[c];
      t[c] = std::uniform_real_distribution<double>(lo[c], hi[c])(rng);
    }
    // b1 + x f1 + y f2 = b2' + t + s g1 + w g2
    Eigen::Matrix4d A;
    Eigen::Vector4d rhs;
    for (int r = 0; r < n; ++r) {
      A(r, 0) = M1.frame[0][r];
      A(r, 1) = M1.frame[1][r];
      A(r, 2) = -qM2.frame[0][r];
      A(r, 3) = -qM2.frame[1][r];
      rhs(r) = qM2.base[r] + t[r] - M1.base[r];
    }
    ++s.count;
    const Eigen::JacobiSVD<Eigen::Matrix4d> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(3) <= 0 || sv(0) / sv(3) > 1e12) {
      ++s.rejected;
      continue;
    }
    const Eigen::Vector4d x = svd.solve(rhs);
    const bool hit = in_convex_polygon(M1.vertices, x(0), x(1)) && in_convex_polygon(qM2.vertices, x(2), x(3));
    const double score = hit ? box : 0.0;
    s.sum += score;
    s.sum_sq += score * score;
  }
  return s;
}

template <class ChunkFn>
MCReport run_chunks(uint64_t N, uint64_t seed, double exact, const MCOptions& opt, double max_reject_rate,
                    ChunkFn&& fn) {
  const uint64_t chunk = std::max<uint64_t>(opt.chunk, 1);
  const uint64_t nchunks = (N + chunk - 1) / chunk;
  std::vector<ChunkSums> parts(nchunks);
  if (opt.threads <= 1) {
    for (uint64_t c = 0; c < nchunks; ++c) parts[c] = fn(c, std::min(chunk, N - c * chunk));
  } else {
#pragma omp parallel for schedule(dynamic) num_threads(opt.threads)
    for (uint64_t c = 0; c < nchunks; ++c) parts[c] = fn(c, std::min(chunk, N - c * chunk));
  }
  ChunkSums total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
    total.count += p.count;
    total.rejected += p.rejected;
  }
  if (double(total.rejected) > max_reject_rate * double(total.count))
    throw NonConvergence("too many rejected Monte Carlo samples");
  MCReport r;
  r.samples = total.count;
  r.seed = seed;
  r.exact = exact;
  r.rejected = total.rejected;
  const double Nd = double(total.count);
  r.estimate = total.sum / Nd;
  const double var = std::max(0.0, (total.sum_sq - Nd * r.estimate * r.estimate) / (Nd - 1.0));
  r.standard_error = std::sqrt(var / Nd);
  r.z_score = r.standard_error > 0 ? (r.estimate - exact) / r.standard_error : 0.0;
  return r;
}

}  // namespace

Vec identity_matrix(int n) {
  Vec I(size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) I[i * n + i] = 1.0;
  return I;
}

MCReport mc_principal_kinematic(const ConvexBody& K, const ConvexBody& L, uint64_t N, uint64_t seed, double exact,
                                const MCOptions& opt) {
  validate(K);
  validate(L);
  return run_chunks(N, seed, exact, opt, 1e-4,
                    [&](uint64_t c, uint64_t count) { return kinematic_chunk(K, L, seed, c, count); });
}

MCReport mc_principal_kinematic_serial(const ConvexBody& K, const ConvexBody& L, uint64_t N, uint64_t seed,
                                       double exact) {
  return mc_principal_kinematic(K, L, N, seed, exact, MCOptions{1});
}

MCReport mc_poincare(const PlanarPolygon& M1, const PlanarPolygon& M2, uint64_t N, uint64_t seed,
                     const MCOptions& opt) {
  validate(M1);
  validate(M2);
  if (body_dim(M1) != 4 || body_dim(M2) != 4) throw InvalidBody("Poincare estimator needs polygons in R^4");
  return run_chunks(N, seed, poincare_exact(M1, M2), opt, 1e-3,
                    [&](uint64_t c, uint64_t count) { return poincare_chunk(M1, M2, seed, c, count); });
}

MCReport mc_poincare_serial(const PlanarPolygon& M1, const PlanarPolygon& M2, uint64_t N, uint64_t seed) {
  return mc_poincare(M1, M2, N, seed, MCOptions{1});
}

double polygon_area(const PlanarPolygon& P) {
  double area = 0.0;
  const size_t m = P.vertices.size();
  for (size_t i = 0; i < m; ++i) {
    const auto& a = P.vertices[i];
    const auto& b = P.vertices[(i + 1) % m];
    area += 0.5 * (a[0] * b[1] - a[1] * b[0]);
  }
  return area;
}

double poincare_exact(const PlanarPolygon& M1, const PlanarPolygon& M2) {
  auto cls = [](const PlanarPolygon& P) {
    return plane_class({P.frame[0][0], P.frame[0][1], P.frame[0][2], P.frame[0][3]},
                       {P.frame[1][0], P.frame[1][1], P.frame[1][2], P.frame[1][3]});
  };
  return polygon_area(M1) * polygon_area(M2) * tasaki_density(cls(M1), cls(M2));
}

}  // namespace valcalc
