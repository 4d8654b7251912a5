#include <doctest.h>

#include <cmath>

#include "snf/normalizer.hpp"
#include "support/random.hpp"

using namespace snf;
using snf::test::cd;

namespace {

NormalizationConfig config(int n, int N, RegimeConfig regime, double R0 = 0.5) {
  NormalizationConfig c;
  c.n = n;
  c.n_trunc = N;
  c.R0 = R0;
  c.regime = regime;
  return c;
}

RegimeConfig decay(double a) { return RegimeConfig{DecayMode{a}}; }
RegimeConfig nonresonant(double gamma, double tau) { return RegimeConfig{NonResonantMode{gamma, tau}}; }

CVector<double> lambda1(cd l) {
  CVector<double> v(1);
  v(0) = l;
  return v;
}

ExtendedHamiltonian<double> canonical_decay(int N) {
  PolyXYd f(1, N);
  f.add_term(MultiIndex({2}, {1}), TimeCoeffd::exponential(1.0, -0.5));
  return {lambda1(-1.0), f};
}

ExtendedHamiltonian<double> canonical_bounded(int N) {
  PolyXYd f(1, N);
  f.add_term(MultiIndex({2}, {1}), TimeCoeffd::from_terms({{1.0, 0, 0.0}, {0.5, 0, -1.0}}));
  f.add_term(MultiIndex({3}, {1}), TimeCoeffd(cd(1)));
  return {lambda1(-1.0), f};
}

}  // namespace

TEST_CASE("iteration budget") {
  CHECK(iteration_budget(3) == 1);
  CHECK(iteration_budget(4) == 2);
  CHECK(iteration_budget(8) == 4);
  CHECK(iteration_budget(10) == 4);
  CHECK(iteration_budget(17) == 5);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config(1, 2, decay(0.5)).validate(), DomainError);
  CHECK_THROWS_AS(config(1, 5, decay(0.5), 0.6).validate(), DomainError);
  CHECK_THROWS_AS(config(1, 5, decay(0.5), 0.0).validate(), DomainError);
  auto c = config(1, 5, decay(0.5));
  c.max_iterations = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("zero perturbation needs no iterations") {
  ExtendedHamiltonian<double> H(lambda1(-1.0), PolyXYd(1, 6));
  auto res = normalize(H, config(1, 6, decay(0.5)));
  CHECK(res.success);
  CHECK(res.chain.empty());
  CHECK(res.records.empty());
}

TEST_CASE("x^2 y at truncation 3 takes one step") {
  PolyXYd f(1, 3);
  f.add_term(MultiIndex({2}, {1}), TimeCoeffd(cd(1)));
  auto res = normalize(ExtendedHamiltonian<double>(lambda1(1.0), f), config(1, 3, nonresonant(1.0, 1.0)));
  CHECK(res.success);
  CHECK(res.records.size() == 1);
  CHECK(min_degree(res.chain.generators[0].chi) == 3);
}

TEST_CASE("x^2 y alone is removed in a single step at any truncation") {
  // {x^2 y, x^2 y} = 0, so the first remainder already vanishes
  for (int N : {3, 5, 10, 17}) {
    auto res = normalize(canonical_decay(N), config(1, N, decay(0.5)));
    CHECK(res.records.size() == 1);
    CHECK(res.final_remainder.is_zero());
    CHECK(res.records.size() <= static_cast<std::size_t>(iteration_budget(N)));
  }
}

TEST_CASE("one-dimensional perturbations follow m -> 2m - 1") {
  // with n = 1 every bracket of two Ly monomials of degrees p, q has degree p + q - 2 and
  // the two lowest-degree parts of f_j and chi_j are proportional, so the s = 1 term of
  // degree 2m - 2 cancels
  const std::vector<int> expected = {3, 5, 9};
  for (int N : {3, 5, 10, 17}) {
    auto res = normalize(canonical_bounded(N), config(1, N, nonresonant(1.0, 1.0)));
    REQUIRE(res.success);
    std::vector<int> mins;
    for (const auto& r : res.records) mins.push_back(r.min_deg);
    int m = 3;
    std::vector<int> predicted;
    while (m <= N) {
      predicted.push_back(m);
      m = 2 * m - 1;
    }
    CHECK(mins == predicted);
  }
}

TEST_CASE("generic two-dimensional perturbations follow m -> 2m - 2") {
  CVector<double> lam(2);
  lam << -1.0, -2.3;
  PolyXYd f(2, 10);
  f.add_term(MultiIndex({2, 0}, {0, 1}), TimeCoeffd(cd(1)));
  f.add_term(MultiIndex({0, 2}, {1, 0}), TimeCoeffd::exponential(0.7, -1.0));
  f.add_term(MultiIndex({1, 1}, {1, 0}), TimeCoeffd(cd(0.4)));
  auto res = normalize(ExtendedHamiltonian<double>(lam, f), config(2, 10, nonresonant(1.0, 2.0)));
  REQUIRE(res.success);
  std::vector<int> mins;
  for (const auto& r : res.records) mins.push_back(r.min_deg);
  CHECK(mins == std::vector<int>{3, 4, 6, 10});
  CHECK(res.records.size() == static_cast<std::size_t>(iteration_budget(10)));
}

TEST_CASE("degree law lower bound and termination budget on random inputs") {
  snf::test::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 3);
    const int N = rng.integer(3, n == 3 ? 6 : 8);
    CVector<double> lam(n);
    for (int l = 0; l < n; ++l) lam(l) = cd(rng.uniform(-2, 2), rng.uniform(-1, 1));
    auto f = rng.poly(n, N, 3, 2, 1, N, -2.0, -0.6);
    auto res = normalize(ExtendedHamiltonian<double>(lam, f), config(n, N, decay(0.5)));
    CHECK(res.success);
    CHECK(res.records.size() <= static_cast<std::size_t>(iteration_budget(N)));
    for (std::size_t j = 0; j + 1 < res.records.size(); ++j)
      CHECK(res.records[j + 1].min_deg >= 2 * res.records[j].min_deg - 2);
    for (const auto& r : res.remainders) CHECK(is_qx_ly(r));
  }
}

TEST_CASE("remainders stay linear in y in the non-resonant regime") {
  snf::test::Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(1, 2);
    CVector<double> lam(n);
    for (int l = 0; l < n; ++l) lam(l) = cd(-rng.uniform(0.8, 1.2) * (l + 1), rng.uniform(-1, 1));
    const double tau = n;
    auto rep = check_nonresonance<double>(lam, 7, 1.0, tau);
    auto f = rng.ly_poly(n, 7, 3, 5, -1.5, 0.0);
    auto res = normalize(ExtendedHamiltonian<double>(lam, f),
                         config(n, 7, nonresonant(std::max(1.0, rep.worst_ratio), tau)));
    CHECK(res.success);
    for (const auto& r : res.remainders) CHECK(is_ly(r));
    for (const auto& g : res.chain.generators) CHECK(is_ly(g.chi));
  }
}

TEST_CASE("pushing H through the chain leaves h alone") {
  snf::test::Rng rng(43);
  CHECK(transform_hamiltonian(canonical_decay(8), normalize(canonical_decay(8), config(1, 8, decay(0.5))).chain)
            .is_zero());
  CHECK(transform_hamiltonian(canonical_bounded(8),
                              normalize(canonical_bounded(8), config(1, 8, nonresonant(1.0, 1.0))).chain)
            .is_zero());
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(1, 2);
    CVector<double> lam(n);
    for (int l = 0; l < n; ++l) lam(l) = cd(rng.uniform(-2, 2), rng.uniform(-1, 1));
    auto f = rng.poly(n, 7, 3, 2, 1, 5, -2.0, -0.6);
    ExtendedHamiltonian<double> H(lam, f);
    auto res = normalize(H, config(n, 7, decay(0.5)));
    CHECK(transform_hamiltonian(H, res.chain).is_zero());
  }
}

TEST_CASE("each generator maps h + f_j to h + f_{j+1}") {
  auto H = canonical_bounded(10);
  auto res = normalize(H, config(1, 10, nonresonant(1.0, 1.0)));
  for (std::size_t j = 0; j < res.chain.size(); ++j) {
    TransformChain<double> one{{res.chain.generators[j]}, H.lambda, 10};
    auto next = transform_hamiltonian(ExtendedHamiltonian<double>(H.lambda, res.remainders[j]), one);
    CHECK(snf::test::poly_distance(next, res.remainders[j + 1]) < 1e-12);
  }
}

TEST_CASE("the bracket with h is minus lie_h") {
  snf::test::Rng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.integer(1, 3);
    auto lam = rng.vector(n, 2.0);
    auto chi = rng.poly(n, 6, 4, 2, 1, 6);
    CHECK(snf::test::poly_distance(bracket_with_h(chi, lam), poly_scale(lie_h(chi, lam), cd(-1))) < 1e-13);
  }
}

TEST_CASE("non-resonance failure is reported before any solve") {
  PolyXYd f(1, 6);
  f.add_term(MultiIndex({2}, {1}), TimeCoeffd(cd(1)));
  CHECK_THROWS_AS(normalize(ExtendedHamiltonian<double>(lambda1(cd(0, 1)), f), config(1, 6, nonresonant(1.0, 1.0))),
                  NonresonanceViolated);
  PolyXYd g(1, 6);
  g.add_term(MultiIndex({2}, {2}), TimeCoeffd(cd(1)));
  CHECK_THROWS_AS(normalize(ExtendedHamiltonian<double>(lambda1(-1.0), g), config(1, 6, nonresonant(1.0, 1.0))),
                  NotLy);
}

TEST_CASE("iteration cap") {
  auto c = config(1, 10, nonresonant(1.0, 1.0));
  c.max_iterations = 2;
  CHECK_THROWS_AS(normalize(canonical_bounded(10), c), MaxIterationsExceeded);
}

TEST_CASE("theory track is attached only when the seed is admissible") {
  auto res = normalize(canonical_decay(8), config(1, 8, decay(0.5)));
  CHECK_FALSE(res.theory.has_value());
  CHECK(std::isnan(res.records[0].epsilon_theory));
  CHECK(res.eps0_measured == doctest::Approx(0.125));

  auto small = normalize(canonical_decay(8), config(1, 8, decay(0.5), 1e-14));
  REQUIRE(small.theory.has_value());
  CHECK(small.records[0].epsilon_theory == small.eps0_measured);
}

TEST_CASE("measured norms stay below the theoretical epsilon sequence") {
  for (double R0 : {1e-14, 1e-16, 1e-18}) {
    auto res = normalize(canonical_bounded(10), config(1, 10, nonresonant(1.0, 1.0), R0));
    REQUIRE(res.theory.has_value());
    for (const auto& r : res.records) {
      REQUIRE(r.R_j > 0.0);
      CHECK(r.measured_norm <= r.epsilon_theory * (1 + 1e-12));
    }
  }
}
