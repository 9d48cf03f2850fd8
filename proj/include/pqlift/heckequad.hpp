#pragma once

// Hecke lifting criterion over imaginary quadratic fields whose only units
// are +-1, together with the class group of reduced binary quadratic forms.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pqlift/abchar.hpp"
#include "pqlift/exactnum.hpp"

namespace pqlift {

bool is_fundamental_discriminant(std::int64_t D);

/// Q(sqrt D) for a fundamental discriminant D < -4.
class ImagQuadField {
 public:
  explicit ImagQuadField(std::int64_t discriminant);
  std::int64_t discriminant() const { return D_; }

 private:
  std::int64_t D_;
};

enum class Embedding { Sigma, SigmaBar };
enum class Splitting { Split, Inert, Ramified };

const char* to_string(Embedding e);
const char* to_string(Splitting s);

struct KappaEntry {
  Embedding embedding;
  int exponent;  // kappa(v, sigma)
};

struct QuadPlace {
  std::string label;  // "v1", "v2", "v'1", ...
  std::int64_t prime = 0;
  int residue_degree = 1;
  std::int64_t residue_field_size = 0;
  std::int64_t coprime_order = 1;  // prime-to-(other prime) part of #k - 1
  std::vector<KappaEntry> kappa;   // Sigma(v) with kappa values
};

struct PlaceData {
  std::int64_t prime = 0;
  std::int64_t other_prime = 0;
  Splitting splitting = Splitting::Split;
  std::vector<QuadPlace> places;
};

/// Places above ell. Split: v1 carries sigma, v2 carries sigma-bar, kappa 0.
/// Inert: one place with kappa(sigma)=0, kappa(sigma-bar)=1 (swapped when
/// swap_kappa is set). Ramified ell is rejected.
PlaceData place_data(const ImagQuadField& K, std::int64_t ell, std::int64_t other_prime, bool swap_kappa = false);

std::pair<PlaceData, PlaceData> splitting_data(const ImagQuadField& K, std::int64_t p, std::int64_t q);

struct InfinityType {
  std::int64_t n_sigma = 0;
  std::int64_t n_sigma_bar = 0;
};

/// xi(v) = -sum_{sigma in Sigma(v)} n_sigma * ell^kappa(v, sigma), one per place.
std::vector<std::int64_t> xi_values(const PlaceData& places, const InfinityType& type);

/// (1 + ell O_v) / (1 + ell^level O_v) ~ (Z/ell^(level-1))^f, the quotient on
/// which the wild characters psi live.
FinAbGroup wild_unit_group(std::int64_t ell, int residue_degree, int level);

struct PlaceLocal {
  std::int64_t k = 0;  // rho|I_v = theta_v^k (own prime)
  std::int64_t a = 0;  // tame exponent of the other character, mod A_v / B_v
  GroupCharacter psi;  // wild part of the other character, ell-power order
};

struct QuadLocalData {
  std::vector<PlaceLocal> at_p;
  std::vector<PlaceLocal> at_q;
};

struct ConditionCheck {
  std::string condition;  // "(1)", "(1')", "(2)"
  std::string place;
  bool holds = false;
  std::int64_t k = 0;
  std::int64_t a = 0;
  std::int64_t xi = 0;
  std::int64_t modulus = 0;
  QmodZ unit_lhs;  // condition (2) only
  QmodZ unit_rhs;
};

struct QuadLocalFactor {
  std::string place;
  std::int64_t prime = 0;
  std::int64_t residue_field_size = 0;
  std::int64_t tame_exponent = 0;  // eps_v = teich_v^tame_exponent * psi
  GroupCharacter psi;
  int conductor_exponent = 0;
};

struct QuadCertificate {
  InfinityType infinity_type;
  std::vector<QuadLocalFactor> local_chars;  // nontrivial ones only
  std::int64_t conductor_norm = 1;
};

struct CriterionOptions {
  bool swap_kappa_p = false;
  bool swap_kappa_q = false;
};

struct CriterionResult {
  bool holds = false;
  std::vector<ConditionCheck> conditions;
  std::optional<QuadCertificate> certificate;
  PlaceData places_p;
  PlaceData places_q;

  std::optional<ConditionCheck> first_failure() const;
};

/// Existence of a Hecke character of the given infinity type whose mod p and
/// mod q reductions agree with (rho, rho') up to unramified twists.
CriterionResult criterion_decide(const ImagQuadField& K, std::int64_t p, std::int64_t q, const QuadLocalData& local,
                                 const InfinityType& type, const CriterionOptions& options = {});

// ---------------------------------------------------------------------------
// Class groups

struct BinaryQuadraticForm {
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::int64_t c = 0;

  std::int64_t discriminant() const { return b * b - 4 * a * c; }
  bool is_reduced() const;
  BinaryQuadraticForm reduced() const;
  std::string to_string() const;

  friend bool operator==(const BinaryQuadraticForm&, const BinaryQuadraticForm&) = default;
  friend auto operator<=>(const BinaryQuadraticForm&, const BinaryQuadraticForm&) = default;
};

BinaryQuadraticForm principal_form(std::int64_t D);
/// Gauss composition followed by reduction.
BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g);
BinaryQuadraticForm inverse(const BinaryQuadraticForm& f);

inline constexpr std::int64_t kDefaultClassGroupBound = 10'000'000;

struct IdealClassGroup {
  std::int64_t discriminant = 0;
  std::vector<BinaryQuadraticForm> forms;  // reduced, sorted; forms[0] is principal
  std::int64_t class_number = 0;
  std::int64_t exponent = 1;
  std::vector<std::int64_t> invariant_factors;
  std::vector<std::int64_t> element_orders;  // parallel to forms
};

IdealClassGroup class_group(std::int64_t D, std::int64_t bound = kDefaultClassGroupBound);

struct CountingReport {
  std::int64_t discriminant = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t exponent = 0;      // alpha
  std::int64_t class_number = 0;  // h
  std::int64_t liftable_bound = 0;  // alpha^2 h
  std::int64_t pair_count = 0;      // h^2
  bool non_liftable_pair_exists = false;
  std::vector<std::int64_t> invariant_factors;
};

CountingReport counting_bound(const ImagQuadField& K, std::int64_t p, std::int64_t q);

}  // namespace pqlift
