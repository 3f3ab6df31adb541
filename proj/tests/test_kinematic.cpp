#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "valcalc/kinematic.hpp"

using namespace valcalc;

TEST_SUITE("kinematic") {

TEST_CASE("exact inverse") {
  const Scalar pi = Scalar::pi();
  const std::vector<Scalar> m{Scalar(0), pi, Scalar(2), Scalar(0)};
  const auto inv = invert_exact(m, 2);
  CHECK(inv == std::vector<Scalar>{Scalar(0), Scalar(Rational(1, 2)), pi.inverse(), Scalar(0)});
  CHECK_THROWS_AS(invert_exact({pi + Scalar(1)}, 1), SingularMatrix);
  CHECK_THROWS_AS(invert_exact({Scalar(1), Scalar(2), Scalar(2), Scalar(4)}, 2), SingularMatrix);
}

TEST_CASE("kinematic tensor entries") {
  const KinematicTensor T = kinematic_tensor(su2_basis());
  REQUIRE(T.size() == 10);
  CHECK(T.at(0, 9) == Scalar(1));
  CHECK(T.at(1, 8) == Scalar(Rational(4, 3), -1));
  for (size_t i = 2; i < 8; ++i)
    for (size_t j = 2; j < 8; ++j) CHECK(T.at(i, j) == Scalar(i == j ? Rational(17, 4) : Rational(-3, 4)));
}

TEST_CASE("randomized tensor properties") {
  for (const auto& r : testing::kinematic_properties(17)) {
    INFO(r.name << " " << r.detail);
    CHECK(r.ok);
  }
}

TEST_CASE("Haar quaternions") {
  testing::Rng rng(1);
  double m2 = 0, m4 = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    const QuaternionD q = haar_quaternion(rng);
    CHECK_MESSAGE(std::abs(q.norm2() - 1) < 1e-12, "not unit");
    m2 += q[0] * q[0];
    m4 += q[0] * q[0] * q[0] * q[0];
  }
  // uniform on S^3: E[w^2] = 1/4, E[w^4] = 1/8
  CHECK(m2 / N == doctest::Approx(0.25).epsilon(0.01));
  CHECK(m4 / N == doctest::Approx(0.125).epsilon(0.02));
}

TEST_CASE("Monte Carlo determinism and scaling") {
  const ConvexBody K = Ball{{0, 0, 0, 0}, 0.5};
  const ConvexBody L = make_box({0, 0, 0, 0}, {0.4, 0.3, 0.2, 0.1});
  const double exact = rhs_kinematic(K, L);
  const MCReport a = mc_principal_kinematic(K, L, 40000, 5, exact);
  const MCReport b = mc_principal_kinematic_serial(K, L, 40000, 5, exact);
  MCOptions two;
  two.threads = 2;
  const MCReport c = mc_principal_kinematic(K, L, 40000, 5, exact, two);
  CHECK(a.estimate == b.estimate);
  CHECK(a.estimate == c.estimate);
  CHECK(a.standard_error == c.standard_error);
  const MCReport d = mc_principal_kinematic(K, L, 80000, 6, exact);
  CHECK(a.standard_error / d.standard_error == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
  CHECK(std::abs(a.z_score) < 4);
  CHECK(std::abs(d.z_score) < 4);
}

TEST_CASE("Poincare estimator") {
  const PlanarPolygon M1 = regular_polygon({Vec{1, 0, 0, 0}, Vec{0, 1, 0, 0}}, 5);
  const PlanarPolygon M2 = regular_polygon({Vec{1, 0, 0, 0}, Vec{0, 0.6, 0.8, 0}}, 4, 0.7);
  const MCReport r = mc_poincare(M1, M2, 50000, 3);
  CHECK(r.exact == doctest::Approx(polygon_area(M1) * polygon_area(M2) * 0.25 * (1 + 0.36)).epsilon(1e-12));
  CHECK(std::abs(r.z_score) < 4);
  CHECK(mc_poincare_serial(M1, M2, 50000, 3).estimate == r.estimate);
  CHECK_THROWS_AS(mc_poincare(regular_polygon({Vec{1, 0, 0}, Vec{0, 1, 0}}, 4), M2, 10, 1), InvalidBody);
}

}
