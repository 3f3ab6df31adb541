#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace valcalc;

namespace {

double ball_volume(int m) { return std::pow(M_PI, m / 2.0) / std::tgamma(m / 2.0 + 1.0); }

double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

}  // namespace

TEST_SUITE("valuation") {

TEST_CASE("pairing of intrinsic volumes") {
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k <= n; ++k) {
      const double oracle = binom(n, k) * ball_volume(n) / (ball_volume(k) * ball_volume(n - k));
      const Scalar p = pairing(intrinsic_volume_rep(n, k), intrinsic_volume_rep(n, n - k));
      CHECK(p.is_unit());
      CHECK(p.to_double() == doctest::Approx(oracle).epsilon(1e-14));
      if (k + 1 <= n && 2 * k + 1 != n)
        CHECK(pairing(intrinsic_volume_rep(n, k), intrinsic_volume_rep(n, n - k - 1)).is_zero());
    }
  CHECK(pairing(euler_characteristic_rep(4), volume_rep(4)) == Scalar(1));
}

TEST_CASE("intrinsic volumes: derivation and Euler-Verdier") {
  const int n = 4;
  std::vector<ValuationRep> V;
  for (int k = 0; k <= n; ++k) V.push_back(intrinsic_volume_rep(n, k));
  for (int k = 1; k <= n; ++k) {
    // Lambda V_k = (n-k+1) omega_{n-k+1} / omega_{n-k} V_{k-1}
    const Scalar c = Scalar(n - k + 1) * unit_ball_volume(n - k + 1) * unit_ball_volume(n - k).inverse();
    const ValuationRep L = derivation(V[k]);
    for (int j = 0; j <= n; ++j) CHECK(pairing(L, V[j]) == c * pairing(V[k - 1], V[j]));
  }
  for (int k = 0; k <= n; ++k) {
    const ValuationRep s = euler_verdier(V[k]);
    for (int j = 0; j <= n; ++j) CHECK(pairing(s, V[j]) == Scalar(k % 2 ? -1 : 1) * pairing(V[k], V[j]));
  }
}

TEST_CASE("components and degrees") {
  const ValuationRep mu = intrinsic_volume_rep(4, 1) + intrinsic_volume_rep(4, 3) * Scalar(2) + volume_rep(4);
  CHECK(mu.degrees() == std::vector<int>{1, 3, 4});
  CHECK(mu.component(3) == intrinsic_volume_rep(4, 3) * Scalar(2));
  CHECK(mu.component(2).is_zero());
  CHECK_THROWS(mu.homogeneous_degree());
}

TEST_CASE("pairing properties on the Alesker basis") {
  for (const auto& r : testing::pairing_properties(3)) {
    INFO(r.name << " " << r.detail);
    CHECK(r.ok);
  }
}

TEST_CASE("self-adjointness on random valuations in R^3") {
  testing::Rng rng(123);
  const int n = 3;
  for (int t = 0; t < 3; ++t) {
    const ValuationRep a = testing::random_valuation(rng, n), b = testing::random_valuation(rng, n);
    CHECK(pairing(derivation(a), b) == pairing(a, derivation(b)));
    CHECK(pairing(signature(a), b) == pairing(a, signature(b)));
    CHECK(pairing(euler_verdier(a), b) == Scalar(-1) * pairing(a, euler_verdier(b)));
    CHECK(pairing(a, b) == pairing(b, a));
  }
}

TEST_CASE("prepared pairing agrees with the direct one") {
  testing::Rng rng(8);
  const ValuationRep a = testing::random_valuation(rng, 4), b = testing::random_valuation(rng, 4);
  CHECK(pairing(a, prepare_for_pairing(b)) == pairing(a, b));
  CHECK(product_top(a, euler_verdier(b)) == pairing(a, b));
}

TEST_CASE("gram matrix is threading independent") {
  const ValuationBasis basis = su2_basis(Su2BasisChoice::Alesker);
  CHECK(gram_matrix(basis, 1) == gram_matrix(basis, 2));
}

}
