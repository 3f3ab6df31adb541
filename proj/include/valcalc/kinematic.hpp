#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "valcalc/bodies.hpp"
#include "valcalc/quaternion.hpp"
#include "valcalc/su2.hpp"

namespace valcalc {

class SingularMatrix : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exact inverse of a square matrix over Q[pi, 1/pi] by Gauss-Jordan.
/// Pivots are restricted to unit entries (single-term Scalars); throws
/// SingularMatrix if no unit pivot is available in a column.
std::vector<Scalar> invert_exact(const std::vector<Scalar>& m, size_t n);

/// c_ij = (Gram^{-1})_ij over a labeled basis.
struct KinematicTensor {
  std::vector<std::string> labels;
  std::vector<Scalar> c;  // row-major
  size_t size() const { return labels.size(); }
  const Scalar& at(size_t i, size_t j) const { return c[i * size() + j]; }
};

KinematicTensor kinematic_tensor(const ValuationBasis& basis, int threads = 1);

/// phi_i(K) for every basis element.
class BasisEvaluator {
public:
  explicit BasisEvaluator(const ValuationBasis& basis);
  std::vector<double> evaluate(const ConvexBody& K, const EvalOptions& opt = {}) const;

private:
  std::vector<NumericValuation> elements_;
};

/// sum_ij c_ij phi_i(K) phi_j(L).
double rhs_kinematic(const KinematicTensor& tensor, const std::vector<double>& eval_K,
                     const std::vector<double>& eval_L);
/// Same with the icosahedron SU(2) basis.
double rhs_kinematic(const ConvexBody& K, const ConvexBody& L, const EvalOptions& opt = {});

struct RigidMotion {
  QuaternionD q;  // rotation part, acting through su2_action
  Vec t;
};

/// Haar-uniform unit quaternion: four standard normals, normalized.
QuaternionD haar_quaternion(std::mt19937_64& rng);
/// q Haar-distributed, t uniform in the box [lo, hi].
RigidMotion haar_sample(std::mt19937_64& rng, const Vec& lo, const Vec& hi);

/// Generator for substream `stream` of a seeded run.
std::mt19937_64 substream(uint64_t seed, uint64_t stream);

struct MCReport {
  double estimate = 0.0;
  double standard_error = 0.0;
  uint64_t samples = 0;
  uint64_t seed = 0;
  double exact = 0.0;
  double z_score = 0.0;
  uint64_t rejected = 0;  // indeterminate or degenerate samples
};

struct MCOptions {
  int threads = 1;
  /// Samples per substream; fixed so that results do not depend on threads.
  uint64_t chunk = 1u << 14;
};

/// Estimates the integral of chi(K cap gL) over SU(2) x| H: per sample a Haar
/// q, t uniform in the bounding box of K - qL, score box volume * [hit].
MCReport mc_principal_kinematic(const ConvexBody& K, const ConvexBody& L, uint64_t N, uint64_t seed, double exact,
                                const MCOptions& opt = {});
/// Plain loop reference for the same estimator and streams.
MCReport mc_principal_kinematic_serial(const ConvexBody& K, const ConvexBody& L, uint64_t N, uint64_t seed,
                                       double exact);

/// Estimates the integral of #(M1 cap gM2) for two polygons in R^4.
MCReport mc_poincare(const PlanarPolygon& M1, const PlanarPolygon& M2, uint64_t N, uint64_t seed,
                     const MCOptions& opt = {});
MCReport mc_poincare_serial(const PlanarPolygon& M1, const PlanarPolygon& M2, uint64_t N, uint64_t seed);

/// area(M1) area(M2) 1/4 (1 + (u . v)^2) with u, v the plane classes.
double poincare_exact(const PlanarPolygon& M1, const PlanarPolygon& M2);
double polygon_area(const PlanarPolygon& P);

/// Row-major n x n identity.
Vec identity_matrix(int n);

}  // namespace valcalc
