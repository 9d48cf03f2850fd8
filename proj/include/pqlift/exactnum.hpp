#pragma once

// Exact arithmetic substrate: Q/Z residues, congruence classes and the
// elementary multiplicative number theory used by every other module.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace pqlift {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when caller-supplied data violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an internal consistency re-check fails (a bug, never bad input).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Machine-integer helpers

/// Least nonnegative residue of a modulo m (m >= 1).
std::int64_t mod_floor(std::int64_t a, std::int64_t m);
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);
std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t m);
std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t m);

struct BezoutTriple {
  std::int64_t g;
  std::int64_t x;
  std::int64_t y;  // x*a + y*b == g
};
BezoutTriple extended_gcd(std::int64_t a, std::int64_t b);

bool is_prime(std::int64_t n);
/// Prime factorization in increasing prime order; n >= 1.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);
int valuation(std::int64_t n, std::int64_t ell);
std::int64_t ipow(std::int64_t base, int exp);
std::int64_t euler_phi(std::int64_t n);
bool is_squarefree(std::int64_t n);

/// n with every factor of the prime ell removed. Throws if ell is not prime.
std::int64_t prime_to_part(std::int64_t n, std::int64_t ell);

/// Smallest primitive root modulo m, for m in {2, 4, p^a, 2p^a}.
std::int64_t smallest_primitive_root(std::int64_t m);

/// Kronecker symbol (D|p) for an odd prime p. Throws on even or composite p.
int kronecker_symbol(std::int64_t D, std::int64_t p);

// ---------------------------------------------------------------------------
// Q/Z

/// A root of unity exp(2 pi i num/den), stored in lowest terms with
/// 0 <= num < den. Equality is structural.
class QmodZ {
 public:
  constexpr QmodZ() = default;
  QmodZ(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  std::int64_t order() const { return den_; }
  bool is_zero() const { return num_ == 0; }

  QmodZ operator+(const QmodZ& other) const;
  QmodZ operator-(const QmodZ& other) const;
  QmodZ operator-() const;
  QmodZ& operator+=(const QmodZ& other) { return *this = *this + other; }
  QmodZ& operator-=(const QmodZ& other) { return *this = *this - other; }
  /// k-fold sum, i.e. the k-th power of the root of unity.
  QmodZ times(std::int64_t k) const;

  friend bool operator==(const QmodZ&, const QmodZ&) = default;
  friend auto operator<=>(const QmodZ&, const QmodZ&) = default;

  std::string to_string() const;
  /// Parses "num/den" or "0"; the value is reduced mod 1.
  static QmodZ parse(std::string_view text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// The component of x of order prime to ell (kills the ell-power part).
QmodZ prime_to_component(const QmodZ& x, std::int64_t ell);
/// The component of x of ell-power order; x == prime_to + ell_power.
QmodZ prime_power_component(const QmodZ& x, std::int64_t ell);

/// Least e >= 0 with e*base == target, searching exponents 0..order(base)-1.
std::optional<std::int64_t> discrete_log(const QmodZ& target, const QmodZ& base);

// ---------------------------------------------------------------------------
// Congruence classes

struct Congruence {
  std::int64_t residue = 0;
  std::int64_t modulus = 1;

  Congruence() = default;
  Congruence(std::int64_t r, std::int64_t m);

  bool contains(std::int64_t x) const { return mod_floor(x, modulus) == residue; }
  /// Least representative >= lower_bound.
  std::int64_t least_at_least(std::int64_t lower_bound) const;
  std::string to_string() const;

  friend bool operator==(const Congruence&, const Congruence&) = default;
};

/// The class mod lcm(m1, m2) satisfying both congruences, or nothing when the
/// residues disagree mod gcd(m1, m2).
std::optional<Congruence> crt_pair(const Congruence& c1, const Congruence& c2);

// ---------------------------------------------------------------------------
// Bernoulli numbers

inline constexpr int kDefaultBernoulliBound = 100;

/// Exact B_k for even k in [2, bound] (B_1 never requested).
Rational bernoulli(int k, int bound = kDefaultBernoulliBound);

std::string to_string(const Rational& r);

}  // namespace pqlift
