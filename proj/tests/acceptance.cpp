// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "pqlift/heckeq.hpp"
#include "pqlift/heckequad.hpp"
#include "pqlift/qseries.hpp"
#include "pqlift/serrepq.hpp"

using namespace pqlift;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

bool order_prime_to(const DirichletCharacter& chi, std::int64_t ell) {
  for (const auto& [prime, c] : chi.components()) {
    if (c.order() % ell == 0) return false;
  }
  return true;
}

Outcome prop_q_oracle_equivalence() {
  const auto t0 = Clock::now();
  const auto E = enumerate_characters(FinAbGroup::units_mod_prime_power(3, 2));
  const auto F = enumerate_characters(FinAbGroup::units_mod_prime_power(5, 2));
  std::vector<DirichletCharacter> rhos, rho_primes;
  for (const auto& e : E) {
    for (const auto& f : F) {
      const DirichletCharacter chi({e, f});
      if (order_prime_to(chi, 3)) rhos.push_back(chi);
      if (order_prime_to(chi, 5)) rho_primes.push_back(chi);
    }
  }
  const std::int64_t k_hi = std::lcm<std::int64_t>(2, 4) * 4;
  std::size_t pairs = 0, agree = 0, liftable = 0;
  for (const auto& a : rhos) {
    for (const auto& b : rho_primes) {
      const GlobalCharQ r(a, 3), rp(b, 5);
      const auto decided = decide_prop_q(r, rp);
      const auto oracle = brute_force_oracle_q(r, rp, 2, 2, 0, k_hi);
      ++pairs;
      bool ok = decided.has_value() == oracle.has_value();
      if (ok && decided) ok = decided->k_class.contains(oracle->k);
      agree += ok ? 1 : 0;
      liftable += decided ? 1 : 0;
    }
  }
  const double s = seconds_since(t0);
  return {agree == pairs && s < 120.0, std::to_string(agree) + "/" + std::to_string(pairs) + " pairs agree (" +
                                           std::to_string(liftable) + " liftable), " + std::to_string(s) + " s"};
}

Outcome round_trip_5_7() {
  const auto E = enumerate_characters(FinAbGroup::units_mod_prime_power(5, 2));
  const auto F = enumerate_characters(FinAbGroup::units_mod_prime_power(7, 2));
  std::mt19937_64 rng(57);
  std::uniform_int_distribution<std::size_t> pe(0, E.size() - 1), pf(0, F.size() - 1);
  std::uniform_int_distribution<std::int64_t> pk(0, 47);
  int ok = 0;
  for (int i = 0; i < 500; ++i) {
    const DirichletCharacter chi({E[pe(rng)], F[pf(rng)]});
    const std::int64_t k = pk(rng);
    const auto [r, rp] = reduce_hecke_q(chi, k, 5, 7);
    const auto s = decide_prop_q(r, rp);
    if (s && s->k_class.contains(k)) ++ok;
  }
  return {ok == 500, std::to_string(ok) + "/500 round trips"};
}

Outcome artin_exhaustive() {
  std::size_t checked = 0, mismatches = 0, groups = 0;
  for (auto [p, q] : std::vector<std::pair<std::int64_t, std::int64_t>>{{3, 5}, {5, 7}}) {
    for (std::int64_t n = 1; n <= 200; ++n) {
      for (const auto& G : abelian_groups_of_order(n)) {
        ++groups;
        const auto chars = enumerate_characters(G);
        std::map<std::pair<std::vector<QmodZ>, std::vector<QmodZ>>, std::vector<const GroupCharacter*>> fibres;
        for (const auto& e : chars) {
          fibres[{reduce_mod(e, p).base().images(), reduce_mod(e, q).base().images()}].push_back(&e);
        }
        for (const auto& a : chars) {
          if (a.order() % p == 0) continue;
          for (const auto& b : chars) {
            if (b.order() % q == 0) continue;
            ++checked;
            const auto got = simultaneous_artin_lift(ModCharacter(a, p), ModCharacter(b, q));
            const auto it = fibres.find({a.images(), b.images()});
            bool ok;
            if (it == fibres.end()) {
              ok = !got;
            } else {
              ok = it->second.size() == 1 && got && *got == *it->second.front();
            }
            mismatches += ok ? 0 : 1;
          }
        }
      }
    }
  }
  return {mismatches == 0, std::to_string(checked - mismatches) + "/" + std::to_string(checked) + " pairs over " +
                               std::to_string(groups) + " groups"};
}

Outcome class_group_1155() {
  const auto t0 = Clock::now();
  const auto G = class_group(-1155);
  const double s = seconds_since(t0);
  const bool ok = G.class_number == 8 && G.invariant_factors == std::vector<std::int64_t>{2, 2, 2} && G.exponent == 2;
  return {ok && s < 1.0, "h = " + std::to_string(G.class_number) + ", exponent " + std::to_string(G.exponent) + ", " +
                             std::to_string(G.invariant_factors.size()) + " invariant factors, " + std::to_string(s) +
                             " s"};
}

Outcome counting_example() {
  const auto r = counting_bound(ImagQuadField(-1155), 17, 19);
  const bool ok = r.liftable_bound == 32 && r.pair_count == 64 && r.non_liftable_pair_exists;
  return {ok, "α²h = " + std::to_string(r.liftable_bound) + " < h² = " + std::to_string(r.pair_count) +
                  (r.non_liftable_pair_exists ? " ⇒ non-liftable pair exists" : "")};
}

Outcome criterion_sanity() {
  const std::int64_t D = -1155;
  const ImagQuadField K(D);
  std::vector<std::int64_t> split;
  for (std::int64_t p = 3; p < 120; p += 2) {
    if (is_prime(p) && kronecker_symbol(D, p) == 1) split.push_back(p);
  }
  int checked = 0, bad = 0;
  bool saw_example = false;
  const GroupCharacter one = GroupCharacter::trivial(FinAbGroup());
  for (std::int64_t p : split) {
    for (std::int64_t q : split) {
      if (p == q) continue;
      QuadLocalData L;
      L.at_p = {{0, 0, one}, {0, 0, one}};
      L.at_q = {{0, 0, one}, {0, 0, one}};
      const std::int64_t A = prime_to_part(p - 1, q), B = prime_to_part(q - 1, p);
      const std::int64_t C = std::lcm(A, B);
      const bool cc = criterion_decide(K, p, q, L, {C, C}).holds;
      const bool c0 = criterion_decide(K, p, q, L, {C, 0}).holds;
      const bool one0 = criterion_decide(K, p, q, L, {1, 0}).holds;
      ++checked;
      if (!cc || !c0 || (A > 1 && one0)) ++bad;
      saw_example |= p == 17 && q == 19;
    }
  }
  return {bad == 0 && saw_example, std::to_string(checked - bad) + "/" + std::to_string(checked) +
                                       " split pairs (including (17,19))"};
}

Outcome hasse() {
  const auto t0 = Clock::now();
  const auto a = hasse_invariant_check(5, 7, 200);
  const auto b = hasse_invariant_check(3, 7, 200);
  const double s = seconds_since(t0);
  const bool ok = a.passes && a.weight == 12 && b.passes && b.weight == 6 && b.factor == -504;
  return {ok && s < 1.0, "E_12 mod 35 and E_6 mod 21 through q^199, factor " + b.factor.get_str() + ", " +
                             std::to_string(s) + " s"};
}

Outcome weight24() {
  const auto r = weight24_example(60);
  int held = 0;
  for (const auto& c : r.congruences) held += c.verdict.holds ? 1 : 0;
  const bool ok = r.congruences.size() == 4 && held == 4 && r.alpha_norm == -36000 && r.norm_divisible_by_5 &&
                  r.q_congruent_1_mod_5 && r.all_pass;
  return {ok, std::to_string(held) + "/4 congruences, αα' = " + r.alpha_norm.get_str() +
                  (r.q_congruent_1_mod_5 ? ", Q ≡ 1 mod 5" : ", Q ≢ 1 mod 5")};
}

Outcome discriminant_identity() {
  const auto E4 = eisenstein(4, 60), E6 = eisenstein(6, 60), D = delta(60);
  const bool ok = E4.pow(3) - E6.pow(2) == D.scaled(1728);
  return {ok, "E_4³ − E_6² = 1728Δ through q^59"};
}

Outcome remark2_suite() {
  std::string list;
  int qualifying = 0, ok = 0;
  for (std::int64_t ell = 3; ell <= 50; ++ell) {
    if (!is_prime(ell) || ell == 5 || ell == 7) continue;
    const auto m5 = ell % 5, m7 = ell % 7;
    if (m5 == 1 || m5 == 4 || m7 == 1 || m7 == 6) continue;
    ++qualifying;
    list += (list.empty() ? "" : ",") + std::to_string(ell);
    const ModCharacter triv(GroupCharacter::trivial(FinAbGroup::units_mod_prime_power(ell, 1)), 5);
    const auto rho = LocalGaloisDatum::unipotent_ramified(ell, 5, triv, FrobValue{});
    const auto rho_prime = LocalGaloisDatum::unramified(ell, 7, FrobValue{QmodZ(1, 2), 1});
    const bool rejected = !local_compat(rho, rho_prime).compatible;
    const auto r = remark2_check(ell, 5, 7);
    if (rejected && r.hypotheses_hold && r.rejected_over_base && r.compatible_after_base_change && r.passes) ++ok;
  }
  return {qualifying > 0 && ok == qualifying,
          std::to_string(ok) + "/" + std::to_string(qualifying) + " qualifying ell {" + list + "}"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"decision over Q matches brute force at (3,5)", prop_q_oracle_equivalence},
      {"round trip at (5,7)", round_trip_5_7},
      {"simultaneous Artin lift, exhaustive", artin_exhaustive},
      {"class group of -1155", class_group_1155},
      {"counting bound at (17,19)", counting_example},
      {"criterion sanity for trivial data", criterion_sanity},
      {"Hasse invariant", hasse},
      {"weight-24 example", weight24},
      {"discriminant identity", discriminant_identity},
      {"local compatibility suite for ell <= 50", remark2_suite},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
