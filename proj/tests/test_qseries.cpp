#include <doctest.h>

#include <chrono>
#include <random>

#include "pqlift/qseries.hpp"

using namespace pqlift;

namespace {

// q * prod (1 - q^n)^24 by repeated multiplication with (1 - q^n).
std::vector<Integer> naive_delta(std::size_t prec) {
  std::vector<Integer> c(prec, 0);
  if (prec > 1) c[1] = 1;
  for (std::size_t n = 1; n < prec; ++n) {
    for (int rep = 0; rep < 24; ++rep) {
      for (std::size_t i = prec - 1; i >= n; --i) {
        c[i] -= c[i - n];
        if (i == n) break;
      }
    }
  }
  return c;
}

Integer naive_sigma(int e, std::int64_t n) {
  Integer s = 0;
  for (std::int64_t d = 1; d <= n; ++d) {
    if (n % d == 0) {
      Integer t;
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(e));
      s += t;
    }
  }
  return s;
}

}  // namespace

TEST_CASE("series arithmetic") {
  RationalSeries a(std::vector<Rational>{1, 1, 0});
  RationalSeries b(std::vector<Rational>{1, -1, 0});
  CHECK((a * b).coefficients() == std::vector<Rational>{1, 0, -1});
  const auto D = delta(20);
  CHECK(D * RationalSeries::constant(1, 20) == D);
  CHECK(eisenstein(4, 10).pow(3)[1] == 720);
  CHECK((eisenstein(4, 10) * delta(10)).weight() == 16);
  CHECK_FALSE((eisenstein(4, 10) + delta(10)).weight());
  CHECK((RationalSeries(std::vector<Rational>{1, 2, 3}) * RationalSeries(std::vector<Rational>{1, 1})).precision() == 2);
}

TEST_CASE("QuadElem") {
  const QuadElem x(Rational(1, 2), Rational(3), 5);
  const QuadElem y(Rational(2), Rational(-1, 3), 5);
  CHECK((x * y).a() == Rational(1) + Rational(-5));
  CHECK(x.norm() == Rational(1, 4) - 45);
  CHECK(x.trace() == 1);
  CHECK(x * x.conjugate() == QuadElem(x.norm()));
  CHECK((x + QuadElem(3L)).a() == Rational(7, 2));
  CHECK_THROWS_AS(x + QuadElem(Rational(1), Rational(1), 7), InvalidInput);
  CHECK_THROWS_AS(QuadElem(Rational(1), Rational(1), 9), InvalidInput);
}

TEST_CASE("eisenstein") {
  CHECK(eisenstein(4, 5)[1] == 240);
  CHECK(eisenstein(12, 5)[1] == Rational(65520, 691));
  for (int k : {2, 4, 6, 8, 10, 12, 24}) {
    const auto E = eisenstein(k, 30);
    CHECK(E[0] == 1);
    const Rational f = eisenstein_factor(k);
    for (std::size_t n = 1; n < 30; ++n) {
      REQUIRE(E[n] == f * Rational(naive_sigma(k - 1, static_cast<std::int64_t>(n))));
      REQUIRE(Rational(f).get_den() % E[n].get_den() == 0);
    }
  }
  CHECK_THROWS_AS(eisenstein(3, 5), InvalidInput);
}

TEST_CASE("delta") {
  const auto D = delta(80);
  const auto naive = naive_delta(80);
  CHECK(D[0] == 0);
  CHECK(D[1] == 1);
  CHECK(D[2] == -24);
  CHECK(D[3] == 252);
  for (std::size_t n = 0; n < 80; ++n) REQUIRE(D[n] == Rational(naive[n]));
  CHECK(D.weight() == 12);
}

TEST_CASE("discriminant identity") {
  for (std::size_t prec : {10u, 30u, 60u}) {
    const auto E4 = eisenstein(4, prec), E6 = eisenstein(6, prec), D = delta(prec);
    CHECK(E4.pow(3) - E6.pow(2) == D.scaled(1728));
    CHECK(D * E4.pow(3) - D * E6.pow(2) == (D * D).scaled(1728));
  }
}

TEST_CASE("hasse invariant") {
  auto t0 = std::chrono::steady_clock::now();
  const auto r = hasse_invariant_check(5, 7, 200);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 1.0);
  CHECK(r.passes);
  CHECK(r.weight == 12);
  CHECK(r.factor == Rational(65520, 691));
  CHECK(hasse_invariant_check(5, 7, 50).passes);
  const auto s = hasse_invariant_check(3, 5, 50);
  CHECK(s.passes);
  CHECK(s.factor == 240);
  const auto t = hasse_invariant_check(3, 7, 200);
  CHECK(t.passes);
  CHECK(t.factor == -504);
  const auto bad = hasse_invariant_check(5, 7, 50, 14);
  CHECK_FALSE(bad.passes);
  CHECK(bad.first_offending == 1u);
}

TEST_CASE("split prime ideals") {
  const std::int64_t D = 144169;
  CHECK(sqrt_mod(D, 5) == std::vector<std::int64_t>{2, 3});
  CHECK(sqrt_mod(D, 7).size() == 2);
  CHECK_THROWS_AS(SplitPrimeIdeal(5, 1, D), InvalidInput);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> pick(-1000, 1000);
  for (std::int64_t ell : {5, 7}) {
    for (std::int64_t r : sqrt_mod(D, ell)) {
      const SplitPrimeIdeal I(ell, r, D);
      for (int i = 0; i < 200; ++i) {
        const QuadElem x(Rational(pick(rng)), Rational(pick(rng)), D);
        const QuadElem y(Rational(pick(rng)), Rational(pick(rng)), D);
        REQUIRE(I.reduce(x) == I.conjugate().reduce(x.conjugate()));
        REQUIRE(I.reduce(x * y) == mul_mod(I.reduce(x), I.reduce(y), ell));
      }
    }
  }
}

TEST_CASE("reduce_rational") {
  CHECK(reduce_rational(Rational(1, 2), 5) == 3);
  CHECK(reduce_rational(Rational(-3), 7) == 4);
  CHECK_THROWS_AS(reduce_rational(Rational(1, 5), 5), InvalidInput);
}

TEST_CASE("weight-24 example") {
  const auto r = weight24_example(60);
  CHECK(r.alpha_norm == -36000);
  CHECK(r.norm_divisible_by_5);
  CHECK_FALSE(r.norm_divisible_by_7);
  CHECK(r.q_congruent_1_mod_5);
  CHECK(r.alpha.a() == Rational(-13, 2));
  CHECK(r.alpha_prime == r.alpha.conjugate());
  CHECK(r.p7.root() == sqrt_mod(144169, 7).front());
  CHECK(r.p5.reduce(r.alpha) == 0);
  REQUIRE(r.congruences.size() == 4);
  for (const auto& c : r.congruences) {
    CHECK(c.verdict.holds);
    CHECK(c.verdict.sturm_bound == 2);
    CHECK(c.verdict.residues_lhs.size() == 10);
  }
  CHECK(r.all_pass);
  CHECK_FALSE(r.literal_control.verdict.holds);
  CHECK_THROWS_AS(weight24_example(9), InvalidInput);
}

TEST_CASE("weight-24 congruences are stable in the precision") {
  for (std::size_t prec = 10; prec <= 60; prec += 10) CHECK(weight24_example(prec).all_pass);
}

TEST_CASE("sturm_congruence") {
  const auto r = weight24_example(20);
  const auto Delta = to_quadratic(delta(20));
  const auto E4 = to_quadratic(eisenstein(4, 20));
  const QuadElem alpha = r.alpha;
  const auto f = (Delta * Delta).scaled(QuadElem(24L) * alpha) + E4.pow(3) * Delta;
  const auto fp = (Delta * Delta).scaled(QuadElem(24L) * alpha.conjugate()) + E4.pow(3) * Delta;
  CHECK(sturm_congruence(f, f, r.p5, 10).holds);
  CHECK(sturm_congruence(Delta.with_weight(24), f, r.p5, 10).holds);
  CHECK(sturm_congruence(Delta.with_weight(24), fp, r.p5_prime, 10).holds);
  // Negative control at 7: Delta matches f there, not f'.
  CHECK_FALSE(sturm_congruence(Delta.with_weight(24), fp, r.p7, 10).holds);
  CHECK_THROWS_AS(sturm_congruence(f, f, r.p5, 30), InvalidInput);
  CHECK_THROWS_AS(sturm_congruence(delta(20), eisenstein(4, 20), 7, 10), InvalidInput);
  CHECK(sturm_congruence(eisenstein(4, 20), RationalSeries::constant(1, 20), 5, 20).holds);
}
