#include "pqlift/heckeq.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace pqlift {

namespace {

void require_odd_prime(std::int64_t p, const char* what) {
  if (p == 2 || !is_prime(p)) {
    throw InvalidInput(std::string(what) + " must be an odd prime, got " + std::to_string(p));
  }
}

void require_pair(const GlobalCharQ& rho, const GlobalCharQ& rho_prime) {
  require_odd_prime(rho.residue_char(), "p");
  require_odd_prime(rho_prime.residue_char(), "q");
  if (rho.residue_char() == rho_prime.residue_char()) throw InvalidInput("p and q must be distinct");
}

std::vector<std::int64_t> ramified_primes(const DirichletCharacter& chi) {
  std::vector<std::int64_t> out;
  for (const auto& [ell, c] : chi.components()) {
    if (!c.is_trivial()) out.push_back(ell);
  }
  return out;
}

void require_unramified_outside_pq(const GlobalCharQ& rho, const GlobalCharQ& rho_prime) {
  const std::int64_t p = rho.residue_char();
  const std::int64_t q = rho_prime.residue_char();
  for (const auto* chi : {&rho.character(), &rho_prime.character()}) {
    for (auto ell : ramified_primes(*chi)) {
      if (ell != p && ell != q) {
        throw InvalidInput("ramified outside pq at " + std::to_string(ell) +
                           "; apply twist_to_unramified first");
      }
    }
  }
}

// Components of both characters at ell, inflated to a common level >= min_level.
std::pair<GroupCharacter, GroupCharacter> common_level(const DirichletCharacter& a, const DirichletCharacter& b,
                                                       std::int64_t ell, int min_level) {
  const int level = std::max({a.level(ell), b.level(ell), min_level});
  return {inflate(a.component(ell), level), inflate(b.component(ell), level)};
}

}  // namespace

// ---------------------------------------------------------------------------
// DirichletCharacter

DirichletCharacter::DirichletCharacter(std::vector<GroupCharacter> components) {
  for (auto& c : components) insert(std::move(c));
}

void DirichletCharacter::insert(GroupCharacter c) {
  const auto& label = c.group().unit_label();
  if (!label) throw InvalidInput("Dirichlet character components must live on labelled unit groups");
  if (label->exponent == 0) return;
  if (components_.contains(label->prime)) {
    throw InvalidInput("duplicate component at " + std::to_string(label->prime));
  }
  components_.emplace(label->prime, std::move(c));
}

std::int64_t DirichletCharacter::modulus() const {
  std::int64_t n = 1;
  for (const auto& [ell, c] : components_) n *= c.group().unit_label()->modulus();
  return n;
}

GroupCharacter DirichletCharacter::component(std::int64_t ell) const {
  if (auto it = components_.find(ell); it != components_.end()) return it->second;
  return GroupCharacter::trivial(FinAbGroup::units_mod_prime_power(ell, 0));
}

int DirichletCharacter::level(std::int64_t ell) const {
  if (auto it = components_.find(ell); it != components_.end()) return it->second.group().unit_label()->exponent;
  return 0;
}

std::vector<std::int64_t> DirichletCharacter::primes() const {
  std::vector<std::int64_t> out;
  for (const auto& [ell, c] : components_) out.push_back(ell);
  return out;
}

bool DirichletCharacter::is_trivial() const {
  return std::all_of(components_.begin(), components_.end(), [](const auto& kv) { return kv.second.is_trivial(); });
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& other) const {
  std::set<std::int64_t> all;
  for (const auto& [ell, c] : components_) all.insert(ell);
  for (const auto& [ell, c] : other.components_) all.insert(ell);
  std::vector<GroupCharacter> out;
  for (auto ell : all) {
    auto [a, b] = common_level(*this, other, ell, 0);
    out.push_back(a * b);
  }
  return DirichletCharacter(std::move(out));
}

DirichletCharacter DirichletCharacter::inverse() const {
  std::vector<GroupCharacter> out;
  for (const auto& [ell, c] : components_) out.push_back(c.inverse());
  return DirichletCharacter(std::move(out));
}

bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
  std::set<std::int64_t> all;
  for (const auto& [ell, c] : a.components_) all.insert(ell);
  for (const auto& [ell, c] : b.components_) all.insert(ell);
  return std::all_of(all.begin(), all.end(), [&](std::int64_t ell) {
    auto [x, y] = common_level(a, b, ell, 0);
    return x == y;
  });
}

// ---------------------------------------------------------------------------
// GlobalCharQ

GlobalCharQ::GlobalCharQ(DirichletCharacter chr, std::int64_t residue_char)
    : chr_(std::move(chr)), residue_char_(residue_char) {
  if (!is_prime(residue_char_)) throw InvalidInput("residue characteristic must be prime");
  for (const auto& [ell, c] : chr_.components()) {
    if (c.order() % residue_char_ == 0) {
      throw InvalidInput("mod-" + std::to_string(residue_char_) + " character has component at " +
                         std::to_string(ell) + " of order " + std::to_string(c.order()) +
                         " divisible by the residue characteristic");
    }
  }
}

GlobalCharQ reduce_mod(const DirichletCharacter& chi, std::int64_t ell) {
  std::vector<GroupCharacter> out;
  for (const auto& [prime, c] : chi.components()) out.push_back(reduce_mod(c, ell).base());
  return GlobalCharQ(DirichletCharacter(std::move(out)), ell);
}

QmodZ teichmuller_value(std::int64_t x, std::int64_t p) {
  const std::int64_t g = smallest_primitive_root(p);
  std::int64_t target = mod_floor(x, p);
  if (target == 0) throw InvalidInput("teichmuller_value: argument divisible by p");
  std::int64_t acc = 1;
  for (std::int64_t e = 0; e < p - 1; ++e) {
    if (acc == target) return QmodZ(e, p - 1);
    acc = mul_mod(acc, g, p);
  }
  throw InternalError("teichmuller_value: primitive root search failed");
}

GroupCharacter teichmuller_character(std::int64_t p, int exponent) {
  FinAbGroup g = FinAbGroup::units_mod_prime_power(p, exponent);
  std::vector<QmodZ> images;
  if (exponent > 0) {
    for (auto gen : g.generators()) images.push_back(teichmuller_value(gen, p));
  }
  return GroupCharacter(std::move(g), std::move(images));
}

ModCharacter restrict_to_inertia(const GlobalCharQ& rho, std::int64_t ell) {
  return ModCharacter(rho.character().component(ell), rho.residue_char());
}

// ---------------------------------------------------------------------------
// Invariants

LocalInvariantsQ extract_invariants(const GlobalCharQ& rho, const GlobalCharQ& rho_prime) {
  require_pair(rho, rho_prime);
  require_unramified_outside_pq(rho, rho_prime);
  const std::int64_t p = rho.residue_char();
  const std::int64_t q = rho_prime.residue_char();

  LocalInvariantsQ inv;
  inv.p = p;
  inv.q = q;

  // Own prime: the tame exponent k; other prime: tame exponent (mod the
  // coprime part) and the wild character.
  auto analyse = [](const GroupCharacter& own, const GroupCharacter& other, std::int64_t ell,
                    std::int64_t other_char, Congruence& k, Congruence& a, std::int64_t& coprime,
                    GroupCharacter& wild) {
    const QmodZ theta = teichmuller_character(ell, own.group().unit_label()->exponent).images()[0];
    auto k_exp = discrete_log(own.images()[0], theta);
    if (!k_exp) {
      throw InvalidInput("restriction to I_" + std::to_string(ell) + " is not tame (order does not divide " +
                         std::to_string(ell - 1) + ")");
    }
    k = Congruence(*k_exp, ell - 1);
    coprime = prime_to_part(ell - 1, other_char);
    const QmodZ tame = prime_to_component(other.images()[0], ell);
    auto a_exp = discrete_log(tame, theta);
    if (!a_exp) throw InternalError("tame part is not a power of the Teichmuller character");
    a = Congruence(*a_exp, coprime);
    wild = other / teichmuller_character(ell, other.group().unit_label()->exponent).pow(*a_exp);
  };

  auto [rho_p, rho_prime_p] = common_level(rho.character(), rho_prime.character(), p, 1);
  analyse(rho_p, rho_prime_p, p, q, inv.k_p, inv.a_p, inv.A_p, inv.psi_prime_p);
  auto [rho_q, rho_prime_q] = common_level(rho.character(), rho_prime.character(), q, 1);
  analyse(rho_prime_q, rho_q, q, p, inv.k_q, inv.b_q, inv.B_q, inv.psi_q);
  return inv;
}

// ---------------------------------------------------------------------------
// Necessary condition and twisting

NecessaryConditionFailure::NecessaryConditionFailure(std::int64_t prime)
    : InvalidInput("necessary condition fails at " + std::to_string(prime)), prime_(prime) {}

std::optional<std::int64_t> NecessaryReport::first_failure() const {
  for (const auto& c : primes) {
    if (!c.passes) return c.prime;
  }
  return std::nullopt;
}

NecessaryReport check_necessary(const GlobalCharQ& rho, const GlobalCharQ& rho_prime) {
  require_pair(rho, rho_prime);
  const std::int64_t p = rho.residue_char();
  const std::int64_t q = rho_prime.residue_char();
  std::set<std::int64_t> primes;
  for (auto ell : rho.character().primes()) primes.insert(ell);
  for (auto ell : rho_prime.character().primes()) primes.insert(ell);

  NecessaryReport report;
  for (auto ell : primes) {
    if (ell == p || ell == q) continue;
    auto [a, b] = common_level(rho.character(), rho_prime.character(), ell, 0);
    PrimeCheck check;
    check.prime = ell;
    check.quotient_order = (a / b).order();
    check.lift = simultaneous_artin_lift(ModCharacter(a, p), ModCharacter(b, q));
    check.passes = check.lift.has_value();
    check.rho_component = std::move(a);
    check.rho_prime_component = std::move(b);
    report.passes = report.passes && check.passes;
    report.primes.push_back(std::move(check));
  }
  return report;
}

UnramifiedTwist twist_to_unramified(const GlobalCharQ& rho, const GlobalCharQ& rho_prime) {
  NecessaryReport nec = check_necessary(rho, rho_prime);
  if (auto bad = nec.first_failure()) throw NecessaryConditionFailure(*bad);
  const std::int64_t p = rho.residue_char();
  const std::int64_t q = rho_prime.residue_char();

  std::vector<GroupCharacter> lifts;
  for (auto& c : nec.primes) lifts.push_back(*c.lift);
  DirichletCharacter eps(std::move(lifts));

  auto untwist = [&](const GlobalCharQ& chi, std::int64_t ell) {
    DirichletCharacter twisted = chi.character() * reduce_mod(eps, ell).character().inverse();
    std::vector<GroupCharacter> kept;
    for (const auto& [prime, c] : twisted.components()) {
      if (prime == p || prime == q) {
        kept.push_back(c);
      } else if (!c.is_trivial()) {
        throw InternalError("twist left ramification at " + std::to_string(prime));
      }
    }
    return GlobalCharQ(DirichletCharacter(std::move(kept)), ell);
  };
  return UnramifiedTwist{eps, untwist(rho, p), untwist(rho_prime, q)};
}

std::int64_t conductor_bound(const GlobalCharQ& rho, const GlobalCharQ& rho_prime) {
  require_pair(rho, rho_prime);
  require_unramified_outside_pq(rho, rho_prime);
  const std::int64_t p = rho.residue_char();
  const std::int64_t q = rho_prime.residue_char();
  const std::int64_t at_p = std::lcm(p, character_conductor(rho_prime.character().component(p)));
  const std::int64_t at_q = std::lcm(q, character_conductor(rho.character().component(q)));
  return at_p * at_q;
}

// ---------------------------------------------------------------------------
// Certificates

DirichletCharacter HeckeCertificate::finite_part() const {
  std::vector<GroupCharacter> comps;
  for (const auto& [ell, c] : local_chars) comps.push_back(c);
  return DirichletCharacter(std::move(comps));
}

HeckeCertificate make_certificate_q(std::int64_t k, const DirichletCharacter& finite_part) {
  HeckeCertificate cert;
  cert.infinity_type = {{"Nm", k}};
  for (const auto& [ell, c] : finite_part.components()) {
    if (c.is_trivial()) continue;
    cert.local_chars.emplace(ell, c);
    cert.conductor *= character_conductor(c);
  }
  return cert;
}

std::pair<GlobalCharQ, GlobalCharQ> reduce_hecke_q(const DirichletCharacter& finite_part, std::int64_t k,
                                                   std::int64_t p, std::int64_t q) {
  auto reduce_at = [&](std::int64_t ell) {
    DirichletCharacter cyclotomic({teichmuller_character(ell, 1).pow(k)});
    return GlobalCharQ(reduce_mod(finite_part, ell).character() * cyclotomic, ell);
  };
  return {reduce_at(p), reduce_at(q)};
}

std::optional<PropQSolution> decide_prop_q(const GlobalCharQ& rho, const GlobalCharQ& rho_prime) {
  LocalInvariantsQ inv = extract_invariants(rho, rho_prime);
  const std::int64_t p = inv.p;
  const std::int64_t q = inv.q;
  auto k_class = crt_pair(Congruence(inv.k_p.residue - inv.a_p.residue, inv.A_p),
                          Congruence(inv.k_q.residue - inv.b_q.residue, inv.B_q));
  if (!k_class) return std::nullopt;
  const std::int64_t k = k_class->residue;

  // At p: eps reduces to rho|I_p * theta_p^{-k} mod p and to rho'|I_p mod q.
  auto [rho_p, rho_prime_p] = common_level(rho.character(), rho_prime.character(), p, 1);
  const int alpha = rho_p.group().unit_label()->exponent;
  auto eps = simultaneous_artin_lift(ModCharacter(rho_p / teichmuller_character(p, alpha).pow(k), p),
                                     ModCharacter(rho_prime_p, q));
  auto [rho_q, rho_prime_q] = common_level(rho.character(), rho_prime.character(), q, 1);
  const int beta = rho_q.group().unit_label()->exponent;
  auto eps_prime = simultaneous_artin_lift(ModCharacter(rho_q, p),
                                           ModCharacter(rho_prime_q / teichmuller_character(q, beta).pow(k), q));
  if (!eps || !eps_prime) throw InternalError("decide_prop_q: congruence solvable but local lift missing");

  DirichletCharacter finite_part({*eps, *eps_prime});
  auto [chi_p, chi_q] = reduce_hecke_q(finite_part, k, p, q);
  if (!(chi_p.character() == rho.character()) || !(chi_q.character() == rho_prime.character())) {
    throw InternalError("decide_prop_q: certificate does not reduce to the input pair");
  }
  return PropQSolution{*k_class, k, make_certificate_q(k, finite_part), std::move(inv)};
}

std::optional<OracleWitness> brute_force_oracle_q(const GlobalCharQ& rho, const GlobalCharQ& rho_prime,
                                                  int alpha_max, int beta_max, std::int64_t k_lo,
                                                  std::int64_t k_hi) {
  require_pair(rho, rho_prime);
  const std::int64_t p = rho.residue_char();
  const std::int64_t q = rho_prime.residue_char();
  CharacterEnumerator eps_range(FinAbGroup::units_mod_prime_power(p, alpha_max));
  CharacterEnumerator eps_prime_range(FinAbGroup::units_mod_prime_power(q, beta_max));
  const std::int64_t k_count = std::max<std::int64_t>(0, k_hi - k_lo + 1);
  if (static_cast<double>(eps_range.size()) * static_cast<double>(eps_prime_range.size()) *
          static_cast<double>(k_count) > static_cast<double>(kOracleTripleBound)) {
    throw InvalidInput("brute_force_oracle_q: search region exceeds " + std::to_string(kOracleTripleBound) +
                       " triples");
  }
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    for (std::int64_t i = 0; i < eps_range.size(); ++i) {
      const GroupCharacter eps = eps_range.at(i);
      for (std::int64_t j = 0; j < eps_prime_range.size(); ++j) {
        const GroupCharacter eps_prime = eps_prime_range.at(j);
        auto [chi_p, chi_q] = reduce_hecke_q(DirichletCharacter({eps, eps_prime}), k, p, q);
        if (chi_p.character() == rho.character() && chi_q.character() == rho_prime.character()) {
          return OracleWitness{eps, eps_prime, k};
        }
      }
    }
  }
  return std::nullopt;
}

LiftQResult lift_q(const GlobalCharQ& rho, const GlobalCharQ& rho_prime) {
  LiftQResult result;
  result.necessary = check_necessary(rho, rho_prime);
  if (!result.necessary.passes) return result;
  result.twist = twist_to_unramified(rho, rho_prime);
  result.invariants = extract_invariants(result.twist->rho0, result.twist->rho_prime0);
  result.bound = conductor_bound(result.twist->rho0, result.twist->rho_prime0);
  auto solution = decide_prop_q(result.twist->rho0, result.twist->rho_prime0);
  if (!solution) return result;

  const std::int64_t p = rho.residue_char();
  const std::int64_t q = rho_prime.residue_char();
  DirichletCharacter full = solution->certificate.finite_part() * result.twist->eps;
  auto [chi_p, chi_q] = reduce_hecke_q(full, solution->k, p, q);
  if (!(chi_p.character() == rho.character()) || !(chi_q.character() == rho_prime.character())) {
    throw InternalError("lift_q: twisted certificate does not reduce to the input pair");
  }
  solution->certificate = make_certificate_q(solution->k, full);
  result.solution = std::move(solution);
  return result;
}

}  // namespace pqlift
