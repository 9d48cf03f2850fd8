#include <doctest.h>

#include <map>
#include <numeric>

#include "pqlift/abchar.hpp"

using namespace pqlift;

namespace {

FinAbGroup cyclic(std::int64_t n) { return FinAbGroup({n}); }

// Brute force: the unique x of order prime to ell with x - y of ell-power order.
QmodZ split_by_search(const QmodZ& y, std::int64_t ell) {
  const std::int64_t d = y.den();
  for (std::int64_t n = 0; n < d; ++n) {
    QmodZ x(n, d);
    if (x.order() % ell == 0) continue;
    std::int64_t m = (y - x).order();
    while (m % ell == 0) m /= ell;
    if (m == 1) return x;
  }
  throw std::logic_error("no split");
}

}  // namespace

TEST_CASE("reduce_mod examples") {
  GroupCharacter eps(cyclic(15), {QmodZ(1, 15)});
  const auto red = reduce_mod(eps, 5);
  CHECK(red.base().images()[0] == split_by_search(QmodZ(1, 15), 5));
  CHECK(red.base().images()[0] == QmodZ(2, 3));
  CHECK(reduce_mod(GroupCharacter::trivial(cyclic(7)), 3).base().is_trivial());
  CHECK(reduce_mod(GroupCharacter(cyclic(25), {QmodZ(1, 25)}), 5).base().is_trivial());
}

TEST_CASE("reduce_mod properties on all groups of order up to 60") {
  for (std::int64_t n = 1; n <= 60; ++n) {
    for (const auto& G : abelian_groups_of_order(n)) {
      for (const auto& eps : enumerate_characters(G)) {
        for (std::int64_t ell : {2, 3, 5, 7}) {
          const auto r = reduce_mod(eps, ell);
          REQUIRE(reduce_mod(r.base(), ell) == r);
          REQUIRE((r.base() == eps) == (eps.order() % ell != 0));
          std::int64_t killed = eps.order() / r.base().order();
          REQUIRE(eps.order() % r.base().order() == 0);
          while (killed % ell == 0) killed /= ell;
          REQUIRE(killed == 1);
        }
      }
    }
  }
}

TEST_CASE("simultaneous_artin_lift examples") {
  const auto G3 = cyclic(3);
  auto triv = GroupCharacter::trivial(G3);
  auto lift = simultaneous_artin_lift(ModCharacter(triv, 5), ModCharacter(triv, 7));
  REQUIRE(lift);
  CHECK(lift->is_trivial());
  GroupCharacter t3(G3, {QmodZ(1, 3)});
  CHECK_FALSE(simultaneous_artin_lift(ModCharacter(t3, 5), ModCharacter(triv, 7)));

  const auto G21 = cyclic(21);
  GroupCharacter tau(G21, {QmodZ(1, 21)});
  auto tau_prime = reduce_mod(tau, 3);
  CHECK(tau_prime.base().order() == 7);
  auto eps = simultaneous_artin_lift(ModCharacter(tau, 5), tau_prime);
  REQUIRE(eps);
  CHECK(*eps == tau);
  int hits = 0;
  for (const auto& e : enumerate_characters(G21)) {
    if (reduce_mod(e, 5) == ModCharacter(tau, 5) && reduce_mod(e, 3) == tau_prime) ++hits;
  }
  CHECK(hits == 1);
  CHECK_THROWS_AS(simultaneous_artin_lift(ModCharacter(t3, 5), ModCharacter(GroupCharacter::trivial(cyclic(9)), 7)),
                  InvalidInput);
}

TEST_CASE("ModCharacter rejects orders divisible by the residue characteristic") {
  CHECK_THROWS_AS(ModCharacter(GroupCharacter(cyclic(5), {QmodZ(1, 5)}), 5), InvalidInput);
}

TEST_CASE("simultaneous_artin_lift matches exhaustive search, (3,7), groups of order up to 120") {
  const std::int64_t p = 3, q = 7;
  for (std::int64_t n = 1; n <= 120; ++n) {
    for (const auto& G : abelian_groups_of_order(n)) {
      const auto chars = enumerate_characters(G);
      std::map<std::pair<std::vector<QmodZ>, std::vector<QmodZ>>, std::vector<GroupCharacter>> fibres;
      for (const auto& e : chars) {
        fibres[{reduce_mod(e, p).base().images(), reduce_mod(e, q).base().images()}].push_back(e);
      }
      for (const auto& a : chars) {
        if (a.order() % p == 0) continue;
        for (const auto& b : chars) {
          if (b.order() % q == 0) continue;
          auto got = simultaneous_artin_lift(ModCharacter(a, p), ModCharacter(b, q));
          auto it = fibres.find({a.images(), b.images()});
          if (it == fibres.end()) {
            REQUIRE_FALSE(got);
          } else {
            REQUIRE(it->second.size() == 1);
            REQUIRE(got);
            REQUIRE(*got == it->second.front());
          }
        }
      }
    }
  }
}

TEST_CASE("bezout_combine") {
  const auto G6 = cyclic(6);
  GroupCharacter e6(G6, {QmodZ(1, 6)});
  CHECK(bezout_combine(e6.pow(5), e6.pow(7), 5, 1, 7, 1) == e6);
  CHECK(bezout_combine(GroupCharacter::trivial(G6), GroupCharacter::trivial(G6), 5, 1, 7, 1).is_trivial());
  GroupCharacter e35(cyclic(35), {QmodZ(1, 35)});
  CHECK(bezout_combine(e35.pow(5), e35.pow(7), 5, 1, 7, 1) == e35);
  CHECK_THROWS_AS(bezout_combine(e6, e6, 5, 1, 5, 1), InvalidInput);
  for (std::int64_t n = 1; n <= 200; n += 7) {
    for (const auto& G : abelian_groups_of_order(n)) {
      for (const auto& e : enumerate_characters(G)) {
        for (int alpha = 0; alpha <= 2; ++alpha) {
          REQUIRE(bezout_combine(e.pow(ipow(3, alpha)), e.pow(ipow(5, 2 - alpha)), 3, alpha, 5, 2 - alpha) == e);
        }
      }
    }
  }
}

TEST_CASE("character_conductor") {
  const auto U25 = FinAbGroup::units_mod_prime_power(5, 2);
  CHECK(character_conductor(GroupCharacter::trivial(U25)) == 1);
  CHECK(character_conductor(GroupCharacter(U25, {QmodZ(1, 4)})) == 5);
  CHECK(character_conductor(GroupCharacter(U25, {QmodZ(1, 5)})) == 25);
  CHECK_THROWS_AS(character_conductor(GroupCharacter(cyclic(4), {QmodZ(1, 4)})), InvalidInput);
  // Oracle: least c such that the character is trivial on 1 + ell^c.
  for (auto [ell, a] : std::vector<std::pair<std::int64_t, int>>{{3, 3}, {5, 2}, {7, 2}, {2, 5}}) {
    const auto U = FinAbGroup::units_mod_prime_power(ell, a);
    const std::int64_t m = ipow(ell, a);
    for (const auto& e : enumerate_characters(U)) {
      std::int64_t expected = m;
      for (int c = 0; c <= a; ++c) {
        bool trivial = true;
        for (std::int64_t x = 1; x < m && trivial; ++x) {
          if (std::gcd(x, m) != 1 || (x - 1) % ipow(ell, c) != 0) continue;
          trivial = e.evaluate_unit(x).is_zero();
        }
        if (trivial) {
          expected = ipow(ell, c);
          break;
        }
      }
      REQUIRE(character_conductor(e) == expected);
    }
  }
}

TEST_CASE("enumerate_characters") {
  CHECK(enumerate_characters(FinAbGroup()).size() == 1);
  CHECK(enumerate_characters(FinAbGroup({2, 4})).size() == 8);
  std::map<std::int64_t, int> orders;
  for (const auto& e : enumerate_characters(cyclic(6))) ++orders[e.order()];
  CHECK(orders == std::map<std::int64_t, int>{{1, 1}, {2, 1}, {3, 2}, {6, 2}});
  const auto all = enumerate_characters(FinAbGroup({2, 6}));
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) CHECK_FALSE(all[i] == all[j]);
  }
  CHECK_THROWS_AS(enumerate_characters(FinAbGroup({1000, 1000}), 1000), InvalidInput);
}

TEST_CASE("unit group presentations") {
  const auto U9 = FinAbGroup::units_mod_prime_power(3, 2);
  CHECK(U9.invariant_factors() == std::vector<std::int64_t>{6});
  CHECK(U9.generators() == std::vector<std::int64_t>{2});
  const auto U32 = FinAbGroup::units_mod_prime_power(2, 5);
  CHECK(U32.invariant_factors() == std::vector<std::int64_t>{2, 8});
  for (std::int64_t x = 1; x < 32; x += 2) {
    const auto c = U32.coordinates(x);
    std::int64_t y = 1;
    for (std::size_t i = 0; i < c.size(); ++i) y = mul_mod(y, pow_mod(mod_floor(U32.generators()[i], 32), c[i], 32), 32);
    CHECK(y == x);
  }
  std::int64_t count = 0;
  for (std::int64_t n = 1; n <= 200; ++n) count += static_cast<std::int64_t>(abelian_groups_of_order(n).size());
  CHECK(abelian_groups_of_order(16).size() == 5);
  CHECK(abelian_groups_of_order(72).size() == 6);
  CHECK(count > 200);
}
