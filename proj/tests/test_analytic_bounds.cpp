#include <doctest.h>

#include <cmath>

#include "snf/analytic_bounds.hpp"
#include "snf/errors.hpp"
#include "snf/poly_xy.hpp"
#include "support/random.hpp"

using namespace snf;
using snf::test::cd;

TEST_CASE("tail sum examples") {
  const double R = std::exp(-4.0);
  CHECK(bound_tail_sum(2, 0, R) == doctest::Approx(4.0 * std::exp(3.0)));
  CHECK(bound_tail_sum(2, 0, R) == doctest::Approx(80.342).epsilon(1e-4));
  CHECK(std::abs(oracle_tail_sum(2, 0, R, 20000) - 1.0 / ((1 - R) * (1 - R))) < 1e-14);

  const double b4 = bound_tail_sum(2, 4, R);
  CHECK(b4 == doctest::Approx(4.0 * std::exp(3.0) * std::exp(-12.0)));
  // closed form for m = 2: sum_{l >= N} (l+1) R^l = R^N (N + 1 - N R) / (1 - R)^2
  const double exact = std::pow(R, 4) * (5 - 4 * R) / ((1 - R) * (1 - R));
  CHECK(std::abs(oracle_tail_sum(2, 4, R, 20000) - exact) <= 1e-12 * exact);
  CHECK(oracle_tail_sum(2, 4, R, 20000) <= b4);

  CHECK(bound_tail_sum(3, 2, 0.0) >= 0.0);
  CHECK(oracle_tail_sum(3, 2, 0.0, 100) == 0.0);
  CHECK(oracle_tail_sum(3, 0, 0.0, 100) == 1.0);
  CHECK_THROWS_AS(bound_tail_sum(2, 0, 0.1), DomainError);
  CHECK_THROWS_AS(bound_tail_sum(1, 0, 0.01), DomainError);
}

TEST_CASE("weighted sum examples") {
  CHECK(bound_weighted_sum(2, 0.0, 0.5) == doctest::Approx(32.0 * std::exp(7.0)));
  CHECK(std::abs(oracle_weighted_sum(2, 0.0, 0.5, 20000) - 4.0) < 1e-12);
  // sum_l (l+1) l 2^{-l} = 8
  CHECK(std::abs(oracle_weighted_sum(2, 1.0, 0.5, 20000) - 8.0) < 1e-12);
  CHECK(oracle_weighted_sum(2, 1.0, 0.5, 20000) <= bound_weighted_sum(2, 1.0, 0.5));
  CHECK_NOTHROW(bound_weighted_sum(2, 0.0, 0.5));
  CHECK_THROWS_AS(bound_weighted_sum(2, 0.0, 0.6), DomainError);
  CHECK_THROWS_AS(bound_weighted_sum(2, 0.0, 0.0), DomainError);
}

TEST_CASE("oracle closed forms and cutoff certification") {
  CHECK(std::abs(oracle_tail_sum(2, 0, 0.25, 20000) - 16.0 / 9.0) < 1e-12);
  CHECK(std::abs(oracle_weighted_sum(3, 0.0, 0.5, 20000) - 8.0) < 1e-12);
  CHECK_THROWS_AS(oracle_tail_sum(2, 50, 0.25, 10), CutoffInsufficient);
  // a cutoff too short to push the tail below 1e-12 of the partial sum
  CHECK_THROWS_AS(oracle_weighted_sum(2, 0.0, 0.01, 50), CutoffInsufficient);
}

TEST_CASE("oracle matches the closed form (1/(1-R))^m on random inputs") {
  snf::test::Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = rng.integer(1, 5);
    const double R = rng.uniform(0.0, 0.9);
    const double exact = std::pow(1.0 - R, -m);
    CHECK(std::abs(oracle_tail_sum(m, 0, R, 20000) - exact) <= 1e-12 * exact);
  }
}

TEST_CASE("inequalities hold on the full parameter grids") {
  for (int m : {2, 3, 4}) {
    for (int N : {0, 1, 2, 5, 8})
      for (double R : {std::exp(-4.0), std::exp(-5.0), 0.01}) {
        auto r = check_tail_sum(m, N, R);
        CHECK_MESSAGE(r.satisfied, "tail m=" << m << " N=" << N << " R=" << R);
        CHECK(r.satisfied == (r.oracle_value <= r.bound_value));
      }
    for (double mu : {0.0, 1.0, 3.0})
      for (double delta : {0.5, 0.25, 0.1}) {
        auto r = check_weighted_sum(m, mu, delta);
        CHECK_MESSAGE(r.satisfied, "weighted m=" << m << " mu=" << mu << " delta=" << delta);
      }
  }
}

TEST_CASE("lie bound algebra") {
  const double R = 0.7, d = 0.2;
  CHECK(lie_bound(1, 2.0, 3.0, R, d) == doctest::Approx(6.0 / (R * d * R * d)));
  CHECK(lie_bound(0, 2.0, 3.0, R, d) == doctest::Approx(3.0 * std::exp(-2.0)));
  CHECK(lie_bound(2, 0.0, 3.0, R, d) == 0.0);
  CHECK_THROWS_AS(lie_bound(1, 1.0, 1.0, R, 0.3), DomainError);
  CHECK_THROWS_AS(lie_bound(1, 1.0, 1.0, R, 0.0), DomainError);
}

TEST_CASE("exact iterated brackets respect the lie bound") {
  snf::test::Rng rng(52);
  const int N = 14;
  for (int trial = 0; trial < 100; ++trial) {
    PolyXYd F(1, N), G(1, N);
    for (int i = 0; i < 3; ++i) {
      F.add_term(rng.index(1, 0, 0, 4), TimeCoeffd(rng.complex()));
      G.add_term(rng.index(1, 0, 0, 4), TimeCoeffd(rng.complex()));
    }
    const int s = rng.integer(1, 3);
    const double d = rng.coin() ? 0.125 : 0.25;
    const double R = rng.uniform(0.2, 1.0);
    PolyXYd LsF = F;
    for (int k = 0; k < s; ++k) LsF = poly_poisson(LsF, G);
    REQUIRE(max_degree(F) + 2 * s <= N);  // nothing truncated
    const double lhs = LsF.is_zero() ? 0.0 : taylor_norm(LsF, (1 - 2 * d) * R, 0.0);
    const double rhs = lie_bound(s, taylor_norm(G, (1 - d) * R, 0.0), taylor_norm(F, (1 - d) * R, 0.0), R, d);
    CHECK(lhs <= rhs);
  }
}
