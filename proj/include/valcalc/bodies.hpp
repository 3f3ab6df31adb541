#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "valcalc/exterior.hpp"
#include "valcalc/valuation.hpp"

namespace valcalc {

using Vec = std::vector<double>;

struct Ball {
  Vec center;
  double radius = 1.0;
};

/// center + sum_i s_i h_i r_i with |s_i| <= 1, r_i the columns of `rotation`
/// (row-major n x n, orthogonal). Zero half-extents give lower-dimensional boxes.
struct Box {
  Vec center;
  Vec half_extents;
  Vec rotation;
};

/// Convex hull of at most n+1 affinely independent points.
struct Simplex {
  std::vector<Vec> vertices;
};

/// Convex polygon base + x f1 + y f2, vertices counterclockwise in (f1, f2).
struct PlanarPolygon {
  std::array<Vec, 2> frame;
  std::vector<std::array<double, 2>> vertices;
  Vec base;
};

using ConvexBody = std::variant<Ball, Box, Simplex, PlanarPolygon>;

class InvalidBody : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NonConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

int body_dim(const ConvexBody& K);
/// Throws InvalidBody when a structural invariant fails.
void validate(const ConvexBody& K);

Box make_box(Vec center, Vec half_extents);
Box make_box(Vec center, Vec half_extents, Vec rotation);
Simplex make_point(Vec p);
/// Regular m-gon of radius r centered at `base` in the plane of the frame.
PlanarPolygon regular_polygon(const std::array<Vec, 2>& frame, int m, double radius = 1.0, Vec base = {});

/// Image of K under x -> A x + t for orthogonal A (row-major).
ConvexBody transform(const ConvexBody& K, const Vec& A, const Vec& t);

/// Spherical simplex given by up to n unit vectors spanning a pointed cone.
struct SphericalSimplex {
  std::vector<Vec> vertices;
};

struct FaceLatticeEntry {
  int dim = 0;
  std::vector<Vec> frame;  // orthonormal basis of the face's direction space
  double volume = 0.0;     // k-volume (1 for vertices)
  std::vector<SphericalSimplex> normal_region;
};

/// Faces of a polytope with their normal regions. Balls are rejected.
std::vector<FaceLatticeEntry> face_lattice(const ConvexBody& K);

/// n-volume (0 for lower-dimensional bodies).
double body_volume(const ConvexBody& K);

/// Double-precision copy of a valuation. Keeps the exact unit-ball values
/// per degree so that balls are evaluated through the symbolic path.
class NumericValuation {
public:
  explicit NumericValuation(const ValuationRep& mu);
  /// sum_i c_i atom_i for one element of a basis.
  NumericValuation(const ValuationBasis& basis, const ValuationBasis::Element& element);

  int dim() const { return omega_.dim(); }
  const NumericForm& omega() const { return omega_; }
  double phi() const { return phi_; }
  /// mu(B_r): sum_k ball_k r^k from exact values on the unit ball.
  double ball_value(double radius) const;

private:
  NumericForm omega_;
  double phi_ = 0.0;
  std::vector<double> ball_;  // degree k -> mu_k(B_1)
};

/// Exact value on the unit ball: pullback by v -> (v, v) and fiber integration.
Scalar ball_value_exact(const ValuationRep& mu);

struct EvalOptions {
  int threads = 1;
  /// Relative quadrature tolerance; VALCALC_QUAD_TOL overrides the default.
  double tolerance = 0.0;
  int max_depth = 8;
};
double default_quadrature_tolerance();

double evaluate(const NumericValuation& mu, const ConvexBody& K, const EvalOptions& opt = {});
double evaluate(const ValuationRep& mu, const ConvexBody& K, const EvalOptions& opt = {});
/// mu(K + tB) through the pulled-back form on nc(K) and the Steiner volume.
/// Negative t gives the polynomial continuation in t.
double evaluate_tube(const NumericValuation& mu, const ConvexBody& K, double t, const EvalOptions& opt = {});
double evaluate_tube(const ValuationRep& mu, const ConvexBody& K, double t, const EvalOptions& opt = {});

/// Klain value of an even degree-k valuation on the k-plane with the given
/// orthonormal frame: its value on the unit k-cube of that plane.
double klain(const NumericValuation& mu, const std::vector<Vec>& frame, const EvalOptions& opt = {});
double klain(const ValuationRep& mu, const std::vector<Vec>& frame, const EvalOptions& opt = {});

double support(const ConvexBody& K, const Vec& xi);
/// A point of K maximizing <xi, .>.
Vec support_point(const ConvexBody& K, const Vec& xi);

enum class Intersection { Disjoint, Intersecting, Indeterminate };
/// GJK on the Minkowski difference with balls as point cores plus margins.
Intersection intersection_test(const ConvexBody& K, const ConvexBody& L, int max_iterations = 200);
/// Throws std::runtime_error if the test is indeterminate.
bool intersects(const ConvexBody& K, const ConvexBody& L);

}  // namespace valcalc
