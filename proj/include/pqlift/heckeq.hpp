#pragma once

// Lifting a pair of mod-p and mod-q characters of G_Q to a Hecke character of
// Q. Characters of G_Q are handled through class field theory as characters
// of (Z/N)^*, stored one prime-power component at a time; the component at
// ell is the restriction to the inertia group I_ell.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqlift/abchar.hpp"
#include "pqlift/exactnum.hpp"

namespace pqlift {

/// Finite-order complex character of (Z/N)^*, one unit-group character per
/// prime dividing N.
class DirichletCharacter {
 public:
  DirichletCharacter() = default;
  explicit DirichletCharacter(std::vector<GroupCharacter> components);

  std::int64_t modulus() const;
  /// Component at ell; the trivial character of (Z/ell^0)^* when absent.
  GroupCharacter component(std::int64_t ell) const;
  int level(std::int64_t ell) const;
  std::vector<std::int64_t> primes() const;
  const std::map<std::int64_t, GroupCharacter>& components() const { return components_; }
  bool is_trivial() const;

  DirichletCharacter operator*(const DirichletCharacter& other) const;
  DirichletCharacter inverse() const;

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b);

 private:
  void insert(GroupCharacter c);
  std::map<std::int64_t, GroupCharacter> components_;
};

/// A mod-ell character of G_Q: a Dirichlet character all of whose components
/// have order prime to ell.
class GlobalCharQ {
 public:
  GlobalCharQ() = default;
  GlobalCharQ(DirichletCharacter chr, std::int64_t residue_char);

  const DirichletCharacter& character() const { return chr_; }
  std::int64_t residue_char() const { return residue_char_; }
  std::int64_t modulus() const { return chr_.modulus(); }

  friend bool operator==(const GlobalCharQ&, const GlobalCharQ&) = default;

 private:
  DirichletCharacter chr_;
  std::int64_t residue_char_ = 0;
};

/// Reduction of a complex Dirichlet character modulo ell.
GlobalCharQ reduce_mod(const DirichletCharacter& chi, std::int64_t ell);

/// Teichmuller character of (Z/p^a)^*: x -> teich(x mod p), normalised so the
/// smallest primitive root mod p maps to 1/(p-1). Its reduction mod p is the
/// mod-p cyclotomic character theta_p on I_p.
GroupCharacter teichmuller_character(std::int64_t p, int exponent);
/// teich(x mod p) as an element of Q/Z.
QmodZ teichmuller_value(std::int64_t x, std::int64_t p);

ModCharacter restrict_to_inertia(const GlobalCharQ& rho, std::int64_t ell);

struct LocalInvariantsQ {
  std::int64_t p = 0;
  std::int64_t q = 0;
  Congruence k_p;  // rho|I_p = theta_p^{k_p}, mod p-1
  Congruence a_p;  // tame part of rho'|I_p = teich^{a_p}, mod A_p
  std::int64_t A_p = 1;
  GroupCharacter psi_prime_p;  // wild part of rho'|I_p, p-power order
  Congruence k_q;
  Congruence b_q;
  std::int64_t B_q = 1;
  GroupCharacter psi_q;  // wild part of rho|I_q, q-power order
};

LocalInvariantsQ extract_invariants(const GlobalCharQ& rho, const GlobalCharQ& rho_prime);

struct PrimeCheck {
  std::int64_t prime = 0;
  bool passes = false;
  GroupCharacter rho_component;        // canonical lift of rho|I_ell
  GroupCharacter rho_prime_component;  // canonical lift of rho'|I_ell
  std::int64_t quotient_order = 1;     // order of their quotient
  std::optional<GroupCharacter> lift;
};

struct NecessaryReport {
  bool passes = true;
  std::vector<PrimeCheck> primes;
  std::optional<std::int64_t> first_failure() const;
};

NecessaryReport check_necessary(const GlobalCharQ& rho, const GlobalCharQ& rho_prime);

/// Thrown by twist_to_unramified when the necessary condition fails at a prime.
class NecessaryConditionFailure : public InvalidInput {
 public:
  explicit NecessaryConditionFailure(std::int64_t prime);
  std::int64_t prime() const { return prime_; }

 private:
  std::int64_t prime_;
};

struct UnramifiedTwist {
  DirichletCharacter eps;  // supported on primes not dividing pq
  GlobalCharQ rho0;
  GlobalCharQ rho_prime0;
};

UnramifiedTwist twist_to_unramified(const GlobalCharQ& rho, const GlobalCharQ& rho_prime);

std::int64_t conductor_bound(const GlobalCharQ& rho, const GlobalCharQ& rho_prime);

struct InfinityTypeEntry {
  std::string embedding;
  std::int64_t exponent = 0;
};

/// Data whose existence produces a Hecke character: an infinity type and
/// the nontrivial local unit-group characters. Over Q the character is
/// prod_ell eps_ell * Nm^k.
struct HeckeCertificate {
  std::vector<InfinityTypeEntry> infinity_type;
  std::map<std::int64_t, GroupCharacter> local_chars;
  std::int64_t conductor = 1;

  /// The finite-order part prod_ell eps_ell as a Dirichlet character.
  DirichletCharacter finite_part() const;
};

HeckeCertificate make_certificate_q(std::int64_t k, const DirichletCharacter& finite_part);

struct PropQSolution {
  Congruence k_class;  // every solution k
  std::int64_t k = 0;  // least nonnegative representative, used for the certificate
  HeckeCertificate certificate;
  LocalInvariantsQ invariants;
};

/// Reductions of chi = finite_part * Nm^k modulo p and modulo q.
std::pair<GlobalCharQ, GlobalCharQ> reduce_hecke_q(const DirichletCharacter& finite_part, std::int64_t k,
                                                   std::int64_t p, std::int64_t q);

/// Decision for a pair unramified outside pq.
std::optional<PropQSolution> decide_prop_q(const GlobalCharQ& rho, const GlobalCharQ& rho_prime);

struct OracleWitness {
  GroupCharacter eps;        // on (Z/p^alpha_max)^*
  GroupCharacter eps_prime;  // on (Z/q^beta_max)^*
  std::int64_t k = 0;
};

inline constexpr std::int64_t kOracleTripleBound = 10'000'000;

/// Exhaustive search over eps, eps', k in [k_lo, k_hi].
std::optional<OracleWitness> brute_force_oracle_q(const GlobalCharQ& rho, const GlobalCharQ& rho_prime,
                                                  int alpha_max, int beta_max, std::int64_t k_lo,
                                                  std::int64_t k_hi);

/// Full pipeline for arbitrary ramification: necessary condition, twist,
/// decision, and the certificate of the untwisted pair.
struct LiftQResult {
  NecessaryReport necessary;
  std::optional<UnramifiedTwist> twist;
  std::optional<LocalInvariantsQ> invariants;
  std::optional<PropQSolution> solution;  // certificate already includes the twist
  std::optional<std::int64_t> bound;
};

LiftQResult lift_q(const GlobalCharQ& rho, const GlobalCharQ& rho_prime);

}  // namespace pqlift
