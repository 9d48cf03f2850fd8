#pragma once

// Local constraints for simultaneous mod p / mod q modularity: the weight
// congruence, algebraic Weil-Deligne parameters of principal series and
// Steinberg shape at ell != p, q, and their reductions.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pqlift/abchar.hpp"
#include "pqlift/exactnum.hpp"

namespace pqlift {

struct WeightSolution {
  Congruence k_class;
  std::int64_t k = 0;  // least representative >= 2
};

/// An integer congruent to k(rho) mod p-1 and to k(rho') mod q-1.
std::optional<WeightSolution> weight_crt(const Congruence& k_rho, const Congruence& k_rho_prime);

/// The algebraic number zeta * ell^weight.
struct FrobValue {
  QmodZ zeta;
  std::int64_t weight = 0;

  friend bool operator==(const FrobValue&, const FrobValue&) = default;
  std::string to_string() const;
};

/// Image of zeta * ell^w in the multiplicative group of F_r-bar, as a
/// prime-to-r root of unity.
QmodZ reduce_frob(const FrobValue& v, std::int64_t ell, std::int64_t r);

/// Quasicharacter of W(Q_ell-bar / Q_ell): inertial part on (Z/ell^a)^* and
/// the value at a Frobenius.
struct Quasicharacter {
  GroupCharacter inertial;
  FrobValue frobenius;

  friend bool operator==(const Quasicharacter&, const Quasicharacter&) = default;
};

/// Principal series eps1 + eps2 with N = 0, or Steinberg eps + eps|.| with
/// N != 0 (the twisted character is not stored).
struct WDParam {
  enum class Shape { Reducible, Steinberg };
  Shape shape = Shape::Reducible;
  std::int64_t ell = 0;
  int residue_degree = 1;
  Quasicharacter eps1;
  Quasicharacter eps2;  // Reducible only

  static WDParam reducible(std::int64_t ell, Quasicharacter e1, Quasicharacter e2, int residue_degree = 1);
  static WDParam steinberg(std::int64_t ell, Quasicharacter e, int residue_degree = 1);
};

const char* to_string(WDParam::Shape s);

/// Restriction of a mod-r representation to the decomposition group at ell.
struct LocalGaloisDatum {
  enum class Kind { UnramifiedSemisimple, TamePrincipal, UnipotentRamified };
  Kind kind = Kind::UnramifiedSemisimple;
  std::int64_t ell = 0;
  std::int64_t residue_char = 0;
  int residue_degree = 1;
  /// TamePrincipal: the two inertial characters. UnipotentRamified: the
  /// inertial part of eps in slot 0 (slot 1 equal). Unramified: trivial.
  std::array<ModCharacter, 2> inertia;
  /// TamePrincipal / UnipotentRamified: Frobenius eigenvalues (for Steinberg
  /// shape eps(Frob) * ||Frob||, eps(Frob)). Unramified: {ratio, 1}.
  std::array<FrobValue, 2> frobenius;
  bool unipotent = false;

  static LocalGaloisDatum unramified(std::int64_t ell, std::int64_t residue_char, FrobValue ratio,
                                     int residue_degree = 1);
  static LocalGaloisDatum tame_principal(std::int64_t ell, std::int64_t residue_char, ModCharacter i1,
                                         ModCharacter i2, FrobValue f1, FrobValue f2, int residue_degree = 1);
  static LocalGaloisDatum unipotent_ramified(std::int64_t ell, std::int64_t residue_char, ModCharacter inertial,
                                             FrobValue eps_frob, int residue_degree = 1);

  /// Frobenius eigenvalue ratio reduced mod residue_char.
  QmodZ ratio() const;
};

const char* to_string(LocalGaloisDatum::Kind k);

/// Mod-r reduction of an l-adic parameter (ell != r).
LocalGaloisDatum wd_reduce(const WDParam& param, std::int64_t r);

struct CompatVerdict {
  bool compatible = false;
  std::optional<WDParam> witness;
  std::vector<WDParam> alternatives;  // other shapes that also fit
  std::string reason;
};

/// Search for an algebraic parameter whose reductions match both data, up to
/// an unramified twist. Principal series is preferred over Steinberg.
CompatVerdict local_compat(const LocalGaloisDatum& rho, const LocalGaloisDatum& rho_prime);

struct Remark2Report {
  std::int64_t ell = 0;
  std::int64_t p = 0;
  std::int64_t q = 0;
  std::int64_t ell_mod_p = 0;
  std::int64_t ell_mod_q = 0;
  bool hypotheses_hold = false;
  bool rejected_over_base = false;  // local_compat fails for ratio -ell
  std::string base_reason;
  bool compatible_after_base_change = false;
  std::optional<WDParam> base_change_witness;
  bool passes = false;
};

/// rho unipotent-ramified mod p, rho' unramified mod q with eigenvalue ratio
/// -ell: incompatible over Q_ell, compatible over the unramified quadratic
/// extension.
Remark2Report remark2_check(std::int64_t ell, std::int64_t p, std::int64_t q);

}  // namespace pqlift
