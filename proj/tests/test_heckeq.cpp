#include <doctest.h>

#include <numeric>
#include <random>

#include "pqlift/heckeq.hpp"

using namespace pqlift;

namespace {

GroupCharacter unit_char(std::int64_t ell, int a, std::vector<QmodZ> images) {
  return GroupCharacter(FinAbGroup::units_mod_prime_power(ell, a), std::move(images));
}

DirichletCharacter dir(std::vector<GroupCharacter> cs) { return DirichletCharacter(std::move(cs)); }

// theta_ell^k as a Dirichlet character at ell.
DirichletCharacter theta(std::int64_t ell, std::int64_t k) {
  return dir({unit_char(ell, 1, {QmodZ(k, ell - 1)})});
}

}  // namespace

TEST_CASE("teichmuller normalisation") {
  CHECK(teichmuller_value(2, 5) == QmodZ(1, 4));
  CHECK(teichmuller_value(3, 7) == QmodZ(1, 6));
  CHECK(teichmuller_value(1, 7).is_zero());
  // Multiplicative and of order dividing p - 1.
  for (std::int64_t p : {3, 5, 7, 11, 13}) {
    for (std::int64_t x = 1; x < p; ++x) {
      for (std::int64_t y = 1; y < p; ++y) {
        REQUIRE(teichmuller_value(x * y % p, p) == teichmuller_value(x, p) + teichmuller_value(y, p));
      }
    }
  }
  const auto t = teichmuller_character(5, 2);
  for (std::int64_t x = 1; x < 25; ++x) {
    if (x % 5 != 0) CHECK(t.evaluate_unit(x) == teichmuller_value(x % 5, 5));
  }
}

TEST_CASE("restrict_to_inertia") {
  GlobalCharQ rho(dir({unit_char(5, 1, {QmodZ(1, 2)})}), 7);
  CHECK(restrict_to_inertia(rho, 7).base().is_trivial());
  GlobalCharQ cyc(theta(5, 2), 5);
  CHECK(restrict_to_inertia(cyc, 5).base() == unit_char(5, 1, {QmodZ(2, 4)}));
  GlobalCharQ r175(dir({unit_char(5, 2, {QmodZ(1, 4)}), unit_char(7, 1, {QmodZ(1, 3)})}), 11);
  const auto at5 = restrict_to_inertia(r175, 5).base();
  CHECK(at5.group().unit_label()->modulus() == 25);
  for (std::int64_t x : {2, 3, 7, 24}) CHECK(at5.evaluate_unit(x) == QmodZ(1, 4).times(*discrete_log(teichmuller_value(x % 5, 5), QmodZ(1, 4))));
}

TEST_CASE("extract_invariants") {
  SUBCASE("theta_5^2 and trivial") {
    const auto inv = extract_invariants(GlobalCharQ(theta(5, 2), 5), GlobalCharQ(DirichletCharacter(), 7));
    CHECK(inv.k_p == Congruence(2, 4));
    CHECK(inv.a_p == Congruence(0, 4));
    CHECK(inv.A_p == 4);
    CHECK(inv.B_q == 6);
    CHECK(inv.psi_prime_p.is_trivial());
  }
  SUBCASE("order-20 component at 5") {
    // rho' on (Z/25)^*: generator 2 -> 1/20 = tame 1/4-part plus wild 1/5-part.
    const auto chr = unit_char(5, 2, {QmodZ(1, 20)});
    const auto inv = extract_invariants(GlobalCharQ(DirichletCharacter(), 5), GlobalCharQ(dir({chr}), 7));
    CHECK(inv.psi_prime_p.order() == 5);
    const QmodZ tame = prime_to_component(QmodZ(1, 20), 5);
    CHECK(inv.a_p == Congruence(*discrete_log(tame, QmodZ(1, 4)), 4));
  }
  SUBCASE("trivial") {
    const auto inv = extract_invariants(GlobalCharQ(DirichletCharacter(), 5), GlobalCharQ(DirichletCharacter(), 7));
    CHECK(inv.k_p == Congruence(0, 4));
    CHECK(inv.k_q == Congruence(0, 6));
    CHECK(inv.a_p == Congruence(0, 4));
    CHECK(inv.b_q == Congruence(0, 6));
  }
  CHECK_THROWS_AS(extract_invariants(GlobalCharQ(dir({unit_char(11, 1, {QmodZ(1, 2)})}), 5),
                                     GlobalCharQ(DirichletCharacter(), 7)),
                  InvalidInput);
}

TEST_CASE("check_necessary") {
  const GlobalCharQ triv5(DirichletCharacter(), 5), triv7(DirichletCharacter(), 7);
  CHECK(check_necessary(triv5, triv7).passes);
  const GlobalCharQ bad(dir({unit_char(13, 1, {QmodZ(1, 3)})}), 5);
  const auto r = check_necessary(bad, triv7);
  CHECK_FALSE(r.passes);
  CHECK(r.first_failure() == 13);
  const auto c11 = unit_char(11, 1, {QmodZ(1, 2)});
  CHECK(check_necessary(GlobalCharQ(dir({c11}), 5), GlobalCharQ(dir({c11}), 7)).passes);
  CHECK_THROWS_AS(twist_to_unramified(bad, triv7), NecessaryConditionFailure);
}

TEST_CASE("twist_to_unramified") {
  const auto c11 = unit_char(11, 1, {QmodZ(1, 2)});
  const GlobalCharQ rho(dir({c11, unit_char(5, 1, {QmodZ(1, 4)})}), 5);
  const GlobalCharQ rho_prime(dir({c11}), 7);
  const auto tw = twist_to_unramified(rho, rho_prime);
  CHECK(tw.eps.component(11) == c11);
  CHECK(tw.rho0.character().component(11).is_trivial());
  CHECK(tw.rho_prime0.character().component(11).is_trivial());
  CHECK(tw.rho0.character().component(5) == unit_char(5, 1, {QmodZ(1, 4)}));

  // At 13: rho has order 12 (prime to 5), rho' its prime-to-7 reduction.
  const auto c13 = unit_char(13, 1, {QmodZ(1, 12)});
  const GlobalCharQ r13(dir({c13}), 5);
  const GlobalCharQ r13p(dir({reduce_mod(c13, 7).base()}), 7);
  const auto tw13 = twist_to_unramified(r13, r13p);
  CHECK(tw13.eps.component(13) == c13);
  CHECK(tw13.rho0.character().is_trivial());
}

TEST_CASE("conductor_bound") {
  const GlobalCharQ triv5(DirichletCharacter(), 5), triv7(DirichletCharacter(), 7);
  CHECK(conductor_bound(triv5, triv7) == 35);
  const GlobalCharQ wild(dir({unit_char(5, 2, {QmodZ(1, 5)})}), 7);
  CHECK(conductor_bound(triv5, wild) == 25 * 7);
  CHECK(conductor_bound(GlobalCharQ(theta(7, 1), 5), GlobalCharQ(theta(5, 1), 7)) == 35);
  CHECK_THROWS_AS(conductor_bound(GlobalCharQ(dir({unit_char(11, 1, {QmodZ(1, 2)})}), 5), triv7), InvalidInput);
}

TEST_CASE("decide_prop_q examples") {
  auto s = decide_prop_q(GlobalCharQ(theta(5, 3), 5), GlobalCharQ(theta(7, 3), 7));
  REQUIRE(s);
  CHECK(s->k_class == Congruence(3, 12));
  CHECK(s->certificate.local_chars.empty());
  CHECK_FALSE(decide_prop_q(GlobalCharQ(theta(5, 1), 5), GlobalCharQ(theta(7, 2), 7)));
  auto t = decide_prop_q(GlobalCharQ(DirichletCharacter(), 5), GlobalCharQ(DirichletCharacter(), 7));
  REQUIRE(t);
  CHECK(t->k_class == Congruence(0, 12));
  CHECK(t->certificate.local_chars.empty());
}

TEST_CASE("reduce_hecke_q of Nm") {
  const auto [r3, r5] = reduce_hecke_q(DirichletCharacter(), 1, 3, 5);
  CHECK(r3.character() == theta(3, 1));
  CHECK(r5.character() == theta(5, 1));
}

TEST_CASE("brute_force_oracle_q examples") {
  auto w = brute_force_oracle_q(GlobalCharQ(theta(3, 1), 3), GlobalCharQ(theta(5, 1), 5), 1, 1, 0, 8);
  REQUIRE(w);
  CHECK(w->eps.is_trivial());
  CHECK(w->eps_prime.is_trivial());
  CHECK(w->k == 1);
  CHECK_FALSE(brute_force_oracle_q(GlobalCharQ(theta(5, 1), 5), GlobalCharQ(theta(7, 2), 7), 2, 2, 0, 47));
  auto z = brute_force_oracle_q(GlobalCharQ(DirichletCharacter(), 3), GlobalCharQ(DirichletCharacter(), 5), 1, 1, 0, 3);
  REQUIRE(z);
  CHECK(z->k == 0);
}

TEST_CASE("round trip at (3,5), exhaustive over 9 and 25") {
  const auto E = enumerate_characters(FinAbGroup::units_mod_prime_power(3, 2));
  const auto F = enumerate_characters(FinAbGroup::units_mod_prime_power(5, 2));
  for (const auto& e : E) {
    for (const auto& f : F) {
      const auto chi = dir({e, f});
      for (std::int64_t k = 0; k < 4; ++k) {
        const auto [r, rp] = reduce_hecke_q(chi, k, 3, 5);
        auto s = decide_prop_q(r, rp);
        REQUIRE(s);
        REQUIRE(s->k_class.contains(k));
        // The certificate reduces back to the same pair.
        const auto [cr, crp] = reduce_hecke_q(s->certificate.finite_part(), s->k, 3, 5);
        REQUIRE(cr == r);
        REQUIRE(crp == rp);
        REQUIRE(conductor_bound(r, rp) % s->certificate.conductor == 0);
      }
    }
  }
}

TEST_CASE("verdict depends only on inertial restrictions") {
  // Adding the same unramified-at-pq twist to both sides changes nothing after twisting.
  const auto E = enumerate_characters(FinAbGroup::units_mod_prime_power(5, 1));
  const auto F = enumerate_characters(FinAbGroup::units_mod_prime_power(7, 1));
  const auto c11 = unit_char(11, 1, {QmodZ(1, 10)});
  for (const auto& a : E) {
    for (const auto& b : F) {
      const GlobalCharQ r(dir({reduce_mod(a, 5).base(), reduce_mod(b, 5).base()}), 5);
      const GlobalCharQ rp(dir({reduce_mod(a, 7).base(), reduce_mod(b, 7).base()}), 7);
      const GlobalCharQ r2(dir({reduce_mod(a, 5).base(), reduce_mod(b, 5).base(), reduce_mod(c11, 5).base()}), 5);
      const GlobalCharQ rp2(dir({reduce_mod(a, 7).base(), reduce_mod(b, 7).base(), reduce_mod(c11, 7).base()}), 7);
      const auto x = lift_q(r, rp);
      const auto y = lift_q(r2, rp2);
      REQUIRE(x.solution.has_value() == y.solution.has_value());
      if (x.solution) REQUIRE(x.solution->k_class == y.solution->k_class);
      REQUIRE(y.twist);
      for (std::int64_t ell : y.twist->rho0.character().primes()) REQUIRE((ell == 5 || ell == 7));
    }
  }
}

TEST_CASE("lift_q with ramification outside pq") {
  const auto c11 = unit_char(11, 1, {QmodZ(1, 2)});
  const GlobalCharQ rho(DirichletCharacter(theta(5, 3) * dir({c11})), 5);
  const GlobalCharQ rho_prime(DirichletCharacter(theta(7, 3) * dir({c11})), 7);
  const auto res = lift_q(rho, rho_prime);
  REQUIRE(res.solution);
  CHECK(res.solution->k_class == Congruence(3, 12));
  CHECK(res.solution->certificate.local_chars.count(11) == 1);
  const auto [r, rp] = reduce_hecke_q(res.solution->certificate.finite_part(), res.solution->k, 5, 7);
  CHECK(r == rho);
  CHECK(rp == rho_prime);
}
