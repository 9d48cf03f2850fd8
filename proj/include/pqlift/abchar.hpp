#pragma once

// Characters of finite abelian groups with values in Q/Z, their reduction
// modulo a prime, and the simultaneous lifting of a mod-p / mod-q pair.
//
// A mod-ell character is identified with its canonical complex
// representative of order prime to ell: the fixed embeddings of the residue
// fields are realized as the identity on prime-to-ell roots of unity.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pqlift/exactnum.hpp"

namespace pqlift {

/// Tags a group as the unit group (Z/ell^a)^* in its canonical presentation.
struct UnitGroupLabel {
  std::int64_t prime = 0;
  int exponent = 0;

  std::int64_t modulus() const { return ipow(prime, exponent); }
  friend bool operator==(const UnitGroupLabel&, const UnitGroupLabel&) = default;
};

/// Finite abelian group Z/d_1 x ... x Z/d_r with d_1 | d_2 | ... | d_r, each
/// d_i >= 2. The empty list is the trivial group.
class FinAbGroup {
 public:
  FinAbGroup() = default;
  explicit FinAbGroup(std::vector<std::int64_t> invariant_factors,
                      std::vector<std::string> labels = {});

  /// (Z/ell^a)^* presented by canonical generators: the smallest primitive
  /// root for odd ell; (-1) for 2^2; (-1, 5) for 2^a with a >= 3.
  static FinAbGroup units_mod_prime_power(std::int64_t ell, int exponent);

  const std::vector<std::int64_t>& invariant_factors() const { return factors_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::optional<UnitGroupLabel>& unit_label() const { return unit_label_; }
  std::size_t rank() const { return factors_.size(); }
  std::int64_t order() const;
  std::int64_t exponent() const;

  /// Generators as residues mod ell^a (unit groups only).
  const std::vector<std::int64_t>& generators() const;
  /// Coordinates of a unit x in terms of generators() (unit groups only).
  std::vector<std::int64_t> coordinates(std::int64_t x) const;

  std::string describe() const;

  friend bool operator==(const FinAbGroup& a, const FinAbGroup& b) {
    return a.factors_ == b.factors_ && a.unit_label_ == b.unit_label_;
  }

 private:
  std::vector<std::int64_t> factors_;
  std::vector<std::string> labels_;
  std::optional<UnitGroupLabel> unit_label_;
  std::vector<std::int64_t> generators_;
};

/// Every finite abelian group of the given order, as invariant-factor chains.
std::vector<FinAbGroup> abelian_groups_of_order(std::int64_t order);

/// Homomorphism G -> Q/Z given by the images of the generators.
class GroupCharacter {
 public:
  GroupCharacter() = default;
  GroupCharacter(FinAbGroup group, std::vector<QmodZ> images);

  static GroupCharacter trivial(FinAbGroup group);

  const FinAbGroup& group() const { return group_; }
  const std::vector<QmodZ>& images() const { return images_; }
  std::int64_t order() const;
  bool is_trivial() const;

  GroupCharacter operator*(const GroupCharacter& other) const;
  GroupCharacter inverse() const;
  GroupCharacter operator/(const GroupCharacter& other) const { return *this * other.inverse(); }
  GroupCharacter pow(std::int64_t e) const;

  QmodZ evaluate(const std::vector<std::int64_t>& coordinates) const;
  /// Value at the unit x (unit groups only).
  QmodZ evaluate_unit(std::int64_t x) const;

  std::string to_string() const;

  friend bool operator==(const GroupCharacter&, const GroupCharacter&) = default;

 private:
  FinAbGroup group_;
  std::vector<QmodZ> images_;
};

/// A character of order prime to its residue characteristic ell: the
/// canonical representative of a mod-ell character.
class ModCharacter {
 public:
  ModCharacter() = default;
  ModCharacter(GroupCharacter base, std::int64_t residue_char);

  const GroupCharacter& base() const { return base_; }
  std::int64_t residue_char() const { return residue_char_; }
  const FinAbGroup& group() const { return base_.group(); }

  friend bool operator==(const ModCharacter&, const ModCharacter&) = default;

 private:
  GroupCharacter base_;
  std::int64_t residue_char_ = 0;
};

/// Reduction modulo ell: keeps the prime-to-ell component of every image.
ModCharacter reduce_mod(const GroupCharacter& eps, std::int64_t ell);

/// The complex character reducing to tau mod p and tau_prime mod q, when it
/// exists; it is then unique.
std::optional<GroupCharacter> simultaneous_artin_lift(const ModCharacter& tau,
                                                      const ModCharacter& tau_prime);

/// Same construction on a single root-of-unity value (cyclic group generated
/// by one element of infinite order, e.g. a Frobenius).
std::optional<QmodZ> simultaneous_value_lift(const QmodZ& mod_p_value, std::int64_t p,
                                             const QmodZ& mod_q_value, std::int64_t q);

/// eps_p_power^a * eps_q_power^b where a*p^alpha + b*q^beta == 1.
GroupCharacter bezout_combine(const GroupCharacter& eps_p_power, const GroupCharacter& eps_q_power,
                              std::int64_t p, int alpha, std::int64_t q, int beta);

/// Least ell^c such that eps factors through (Z/ell^c)^*.
std::int64_t character_conductor(const GroupCharacter& eps);
int conductor_exponent(const GroupCharacter& eps);

/// Character of (Z/ell^b)^* obtained by composing with reduction to level a.
GroupCharacter inflate(const GroupCharacter& eps, int new_exponent);
/// Unit-group characters compared after inflating to a common level.
bool same_unit_character(const GroupCharacter& a, const GroupCharacter& b);

inline constexpr std::int64_t kDefaultEnumerationBound = 1'000'000;

/// Deterministic enumeration of the dual group, lexicographic in the image
/// numerators (first generator most significant). Index ranges may be
/// processed independently.
class CharacterEnumerator {
 public:
  explicit CharacterEnumerator(FinAbGroup group, std::int64_t bound = kDefaultEnumerationBound);

  std::int64_t size() const { return size_; }
  GroupCharacter at(std::int64_t index) const;
  void for_each(const std::function<void(const GroupCharacter&)>& visit) const;

 private:
  FinAbGroup group_;
  std::int64_t size_ = 1;
};

std::vector<GroupCharacter> enumerate_characters(const FinAbGroup& group,
                                                 std::int64_t bound = kDefaultEnumerationBound);

}  // namespace pqlift
