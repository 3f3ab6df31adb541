#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "valcalc/bodies.hpp"
#include "valcalc/su2.hpp"

namespace valcalc::testing {

using Rng = std::mt19937_64;

Rational random_rational(Rng& rng, int max_num = 5, int max_den = 4);
/// Random reduced polynomial of degree <= max_degree with `terms` monomials.
Poly random_poly(Rng& rng, int dim, int max_degree, int terms);
/// Random form of bidegree (k, l).
InvariantForm random_form(Rng& rng, int dim, int k, int l, int terms = 3, int max_degree = 2);
/// Random (n-1)-form over all bidegrees plus a random multiple of the volume form.
ValuationRep random_valuation(Rng& rng, int dim, int max_degree = 2);
/// Exact rational unit vector in span(i, j, k) by inverse stereographic projection.
std::array<Rational, 3> random_unit3(Rng& rng);
/// Exact rational unit quaternion.
Quaternion<Rational> random_unit_quaternion(Rng& rng);
/// Random tangent field of SV: T-multiples plus skew rotations of the fiber.
VectorField random_tangent_field(Rng& rng, int dim);

/// Random point of SV and k tangent vectors, as NumericForm::evaluate wants them.
struct SvSample {
  std::vector<double> v;
  std::vector<double> vectors;  // k blocks of length 2n
};
SvSample random_sv_sample(Rng& rng, int dim, int k);

/// Numeric d of a form at a point, by central differences of the coefficients.
double numeric_d(const InvariantForm& w, std::span<const double> v, std::span<const double> vectors, int k);
/// Numeric wedge from the shuffle formula.
double numeric_wedge(const NumericForm& a, int p, const NumericForm& b, int q, std::span<const double> v,
                     std::span<const double> vectors);

/// Phase-one simplex: is {x >= 0 : A x = b} nonempty? A is m x n row-major.
bool lp_feasible(std::vector<double> A, std::vector<double> b, int m, int n);
/// Do the convex hulls of two point sets meet?
bool hulls_intersect(const std::vector<Vec>& P, const std::vector<Vec>& Q);
std::vector<Vec> box_vertices(const Box& b);

struct PropertyResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

/// Randomized invariants shared by the unit tests and the acceptance run.
std::vector<PropertyResult> exterior_properties(uint64_t seed);
std::vector<PropertyResult> rumin_properties(uint64_t seed);
std::vector<PropertyResult> pairing_properties(uint64_t seed);
std::vector<PropertyResult> kinematic_properties(uint64_t seed);

}  // namespace valcalc::testing
