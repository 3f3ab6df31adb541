#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "valcalc/contact.hpp"

using namespace valcalc;

namespace {

std::array<Rational, 3> rotate(const Quaternion<Rational>& q, const std::array<Rational, 3>& u) {
  const Quaternion<Rational> w(Rational(0), u[0], u[1], u[2]);
  const Quaternion<Rational> r = q * w * q.conj();
  return {r[1], r[2], r[3]};
}

ImDirection dir(const std::array<Rational, 3>& u) { return ImDirection::along(u[0], u[1], u[2]); }

}  // namespace

TEST_SUITE("su2") {

TEST_CASE("quaternionic structures") {
  testing::Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const auto u = testing::random_unit3(rng);
    const auto I = quaternion_structure(u);
    const auto A = su2_action(testing::random_unit_quaternion(rng));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Rational sq = 0, ot = 0, c1 = 0, c2 = 0;
        for (int l = 0; l < 4; ++l) {
          sq += I[i * 4 + l] * I[l * 4 + j];
          ot += I[i * 4 + l] * I[j * 4 + l];
          c1 += I[i * 4 + l] * A[l * 4 + j];
          c2 += A[i * 4 + l] * I[l * 4 + j];
        }
        CHECK(sq == Rational(i == j ? -1 : 0));
        CHECK(ot == Rational(i == j ? 1 : 0));
        CHECK(c1 == c2);
      }
  }
}

TEST_CASE("plane classes") {
  const auto c = plane_class({1, 0, 0, 0}, {0, 1, 0, 0});
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(std::abs(c[1]) + std::abs(c[2]) < 1e-15);
  const auto I = quaternion_structure(std::array<double, 3>{0, 0, 1});
  const std::array<double, 4> e1{0.5, 0.5, 0.5, 0.5};
  std::array<double, 4> e2{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) e2[i] += I[i * 4 + j] * e1[j];
  const auto k = plane_class(e1, e2);
  CHECK(k[2] == doctest::Approx(1.0));
}

TEST_CASE("Lie derivative identities") {
  testing::Rng rng(4);
  for (int t = 0; t < 3; ++t) {
    const auto f = quaternionic_forms(testing::random_unit3(rng));
    CHECK(lie_T(f.beta) == f.gamma);
    CHECK(lie_T(f.gamma).is_zero());
    CHECK(lie_T(lie_T(f.Omega)) == d(f.gamma));
    CHECK(wedge(f.gamma, d(f.gamma)) == sphere_volume_form(4) * Scalar(2));
  }
}

TEST_CASE("SU(2) invariance of omega_u") {
  testing::Rng rng(6);
  const ImDirection u = dir(testing::random_unit3(rng));
  const InvariantForm w = z_form(u);
  for (int t = 0; t < 5; ++t) {
    const auto A = su2_action(testing::random_unit_quaternion(rng));
    CHECK(pullback(BundleMap::linear(4, std::vector<Scalar>(A.begin(), A.end())), w) == w);
  }
}

TEST_CASE("gram_zz symmetries") {
  testing::Rng rng(10);
  for (int t = 0; t < 3; ++t) {
    const auto a = testing::random_unit3(rng), b = testing::random_unit3(rng);
    const Scalar g = gram_zz(dir(a), dir(b));
    CHECK(g == tasaki_density(dir(a), dir(b)));
    CHECK(gram_zz(dir(b), dir(a)) == g);
    CHECK(gram_zz(ImDirection::along(-a[0], -a[1], -a[2]), dir(b)) == g);
    const auto q = testing::random_unit_quaternion(rng);
    CHECK(gram_zz(dir(rotate(q, a)), dir(rotate(q, b))) == g);
  }
}

TEST_CASE("icosahedron directions") {
  const auto D = icosahedron_directions();
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const Quad5 c = dot_squared(D[i], D[j]);
      CHECK(c == Quad5(i == j ? Rational(1) : Rational(1, 5)));
      const auto a = D[i].numeric(), b = D[j].numeric();
      const double dn = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
      CHECK(std::abs(dn * dn - c.to_double()) < 1e-12);
    }
  CHECK(gram_zz(D[0], D[0]) == Scalar(Rational(1, 2)));
  CHECK(gram_zz(D[0], D[3]) == Scalar(Rational(3, 10)));
}

TEST_CASE("Z_u on the unit ball and Klain values") {
  const ImDirection i = ImDirection::unit(1, 0, 0);
  CHECK(ball_value_exact(z_rep(i)) == Scalar::pi());
  const ValuationRep Z = z_rep(i);
  CHECK(klain(Z, {{1, 0, 0, 0}, {0, 1, 0, 0}}) == doctest::Approx(0.5).epsilon(1e-9));
  testing::Rng rng(12);
  std::normal_distribution<double> g;
  for (int t = 0; t < 4; ++t) {
    std::array<double, 4> e1{}, e2{};
    double n1 = 0;
    for (auto& x : e1) {
      x = g(rng);
      n1 += x * x;
    }
    for (auto& x : e1) x /= std::sqrt(n1);
    double dot = 0, n2 = 0;
    for (auto& x : e2) x = g(rng);
    for (int k = 0; k < 4; ++k) dot += e1[k] * e2[k];
    for (int k = 0; k < 4; ++k) e2[k] -= dot * e1[k];
    for (auto x : e2) n2 += x * x;
    for (auto& x : e2) x /= std::sqrt(n2);
    const double expect = tasaki_density({1, 0, 0}, plane_class(e1, e2));
    CHECK(klain(Z, {Vec(e1.begin(), e1.end()), Vec(e2.begin(), e2.end())}) == doctest::Approx(expect).epsilon(1e-6));
  }
  CHECK(klain(euler_characteristic_rep(4), {}) == doctest::Approx(1.0));
}

TEST_CASE("Rumin golden value for a random direction") {
  testing::Rng rng(13);
  const ImDirection u = dir(testing::random_unit3(rng));
  CHECK(rumin(z_form(u)).D_omega == rumin_golden(u));
}

}
