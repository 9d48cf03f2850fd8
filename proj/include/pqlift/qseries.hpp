#pragma once

// Truncated q-expansions with exact coefficients in Q or in a real quadratic
// field, level-1 Eisenstein series, Delta, the mod pq Hasse invariant and
// the weight-24 congruence example.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pqlift/exactnum.hpp"

namespace pqlift {

/// a + b sqrt(D). D == 0 marks a rational element that adopts the D of
/// whatever it is combined with; two different nonzero D values throw.
class QuadElem {
 public:
  QuadElem() = default;
  QuadElem(Rational a) : a_(std::move(a)) {}  // NOLINT: rationals embed
  QuadElem(long a) : a_(a) {}                 // NOLINT
  QuadElem(Rational a, Rational b, std::int64_t D);

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  std::int64_t D() const { return D_; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  QuadElem conjugate() const;
  Rational norm() const;
  Rational trace() const;

  QuadElem operator+(const QuadElem& o) const;
  QuadElem operator-(const QuadElem& o) const;
  QuadElem operator-() const;
  QuadElem operator*(const QuadElem& o) const;
  QuadElem& operator+=(const QuadElem& o) { return *this = *this + o; }
  QuadElem& operator-=(const QuadElem& o) { return *this = *this - o; }
  QuadElem& operator*=(const QuadElem& o) { return *this = *this * o; }

  friend bool operator==(const QuadElem& x, const QuadElem& y);

  std::string to_string() const;

 private:
  static std::int64_t common_D(const QuadElem& x, const QuadElem& y);
  Rational a_ = 0;
  Rational b_ = 0;
  std::int64_t D_ = 0;
};

template <class Scalar>
class QExpansion {
 public:
  QExpansion() = default;
  explicit QExpansion(std::vector<Scalar> coeffs, std::optional<int> weight = std::nullopt)
      : coeffs_(std::move(coeffs)), weight_(weight) {}

  static QExpansion constant(const Scalar& c, std::size_t precision, std::optional<int> weight = 0) {
    std::vector<Scalar> v(precision, Scalar(0L));
    if (precision > 0) v[0] = c;
    return QExpansion(std::move(v), weight);
  }

  std::size_t precision() const { return coeffs_.size(); }
  const Scalar& operator[](std::size_t n) const { return coeffs_.at(n); }
  const std::vector<Scalar>& coefficients() const { return coeffs_; }
  std::optional<int> weight() const { return weight_; }
  QExpansion with_weight(std::optional<int> w) const { return QExpansion(coeffs_, w); }
  QExpansion truncated(std::size_t precision) const {
    if (precision > coeffs_.size()) throw InvalidInput("cannot extend a truncated q-expansion");
    return QExpansion(std::vector<Scalar>(coeffs_.begin(), coeffs_.begin() + precision), weight_);
  }

  QExpansion operator+(const QExpansion& o) const { return combine(o, false); }
  QExpansion operator-(const QExpansion& o) const { return combine(o, true); }

  QExpansion operator*(const QExpansion& o) const {
    const std::size_t n = std::min(precision(), o.precision());
    std::vector<Scalar> out(n, Scalar(0L));
    for (std::size_t i = 0; i < n; ++i) {
      if (coeffs_[i] == Scalar(0L)) continue;
      for (std::size_t j = 0; i + j < n; ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    std::optional<int> w;
    if (weight_ && o.weight_) w = *weight_ + *o.weight_;
    return QExpansion(std::move(out), w);
  }

  QExpansion scaled(const Scalar& c) const {
    std::vector<Scalar> out = coeffs_;
    for (auto& x : out) x = c * x;
    return QExpansion(std::move(out), weight_);
  }

  QExpansion pow(int e) const {
    if (e < 0) throw InvalidInput("negative power of a q-expansion");
    QExpansion result = constant(Scalar(1L), precision(), 0);
    QExpansion base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e > 0) base = base * base;
    }
    return result;
  }

  friend bool operator==(const QExpansion& x, const QExpansion& y) { return x.coeffs_ == y.coeffs_; }

 private:
  QExpansion combine(const QExpansion& o, bool subtract) const {
    const std::size_t n = std::min(precision(), o.precision());
    std::vector<Scalar> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (subtract) {
        out[i] = coeffs_[i] - o.coeffs_[i];
      } else {
        out[i] = coeffs_[i] + o.coeffs_[i];
      }
    }
    std::optional<int> w;
    if (weight_ && o.weight_ && *weight_ == *o.weight_) w = weight_;
    return QExpansion(std::move(out), w);
  }

  std::vector<Scalar> coeffs_;
  std::optional<int> weight_;
};

using RationalSeries = QExpansion<Rational>;
using QuadSeries = QExpansion<QuadElem>;

/// Coefficientwise embedding Q -> Q(sqrt D).
QuadSeries to_quadratic(const RationalSeries& f);

inline constexpr std::size_t kDefaultPrecision = 64;

/// sigma_e(n) for n < precision (index 0 unused, set to 0).
std::vector<Integer> divisor_sums(int e, std::size_t precision);

/// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n for even k >= 2.
RationalSeries eisenstein(int k, std::size_t precision = kDefaultPrecision);
/// -2k/B_k, the coefficient of q in E_k.
Rational eisenstein_factor(int k);

/// Delta = q prod (1-q^n)^24, via Jacobi's identity for prod (1-q^n)^3.
RationalSeries delta(std::size_t precision = kDefaultPrecision);

struct HasseReport {
  std::int64_t p = 0;
  std::int64_t q = 0;
  int weight = 0;
  Rational factor;  // coefficient of q
  std::size_t precision = 0;
  bool passes = false;
  std::optional<std::size_t> first_offending;
};

/// Checks that E_weight - 1 vanishes mod pq coefficientwise; weight defaults
/// to lcm(p-1, q-1).
HasseReport hasse_invariant_check(std::int64_t p, std::int64_t q, std::size_t precision = kDefaultPrecision,
                                  std::optional<int> weight = std::nullopt);

/// Residue of a rational mod ell; throws if ell divides the denominator.
std::int64_t reduce_rational(const Rational& x, std::int64_t ell);

/// The prime (ell, sqrt D - r) above a split ell.
class SplitPrimeIdeal {
 public:
  SplitPrimeIdeal(std::int64_t ell, std::int64_t r, std::int64_t D);

  std::int64_t ell() const { return ell_; }
  std::int64_t root() const { return r_; }
  std::int64_t D() const { return D_; }
  SplitPrimeIdeal conjugate() const { return SplitPrimeIdeal(ell_, mod_floor(-r_, ell_), D_); }
  /// a + b sqrt D -> a + b r mod ell.
  std::int64_t reduce(const QuadElem& x) const;
  std::string to_string() const;

  friend bool operator==(const SplitPrimeIdeal&, const SplitPrimeIdeal&) = default;

 private:
  std::int64_t ell_;
  std::int64_t r_;
  std::int64_t D_;
};

/// Square roots of D mod ell in increasing order (empty if none).
std::vector<std::int64_t> sqrt_mod(std::int64_t D, std::int64_t ell);

inline int sturm_bound_level_one(int weight) { return weight / 12; }

struct CongruenceVerdict {
  bool holds = false;
  std::size_t bound = 0;
  int sturm_bound = 0;
  std::optional<std::size_t> first_mismatch;
  std::vector<std::int64_t> residues_lhs;  // first ten
  std::vector<std::int64_t> residues_rhs;
};

/// Coefficientwise congruence of the first `bound` coefficients, f reduced
/// at ideal_f and g reduced at ideal_g. Tagged weights must agree mod ell-1,
/// the condition for mod-ell forms of different weight to coincide.
CongruenceVerdict sturm_congruence(const QuadSeries& f, const SplitPrimeIdeal& ideal_f, const QuadSeries& g,
                                   const SplitPrimeIdeal& ideal_g, std::size_t bound);
CongruenceVerdict sturm_congruence(const QuadSeries& f, const QuadSeries& g, const SplitPrimeIdeal& ideal,
                                   std::size_t bound);
CongruenceVerdict sturm_congruence(const RationalSeries& f, const RationalSeries& g, std::int64_t ell,
                                   std::size_t bound);

struct Weight24Congruence {
  std::string lhs;
  std::string rhs;
  std::string ideal_lhs;
  std::string ideal_rhs;
  CongruenceVerdict verdict;
};

struct Weight24Report {
  std::int64_t D = 144169;
  std::size_t precision = 0;
  QuadElem alpha;        // the root belonging to f
  QuadElem alpha_prime;  // the root belonging to f'
  Integer alpha_norm;    // alpha * alpha'
  bool norm_divisible_by_5 = false;
  bool norm_divisible_by_7 = false;
  bool q_congruent_1_mod_5 = false;
  SplitPrimeIdeal p5{5, 3, 144169};
  SplitPrimeIdeal p5_prime{5, 2, 144169};
  SplitPrimeIdeal p7{7, 2, 144169};
  SplitPrimeIdeal p7_prime{7, 5, 144169};
  std::vector<Weight24Congruence> congruences;  // the four asserted ones
  Weight24Congruence literal_control;           // f vs f' both at p5, expected to fail
  bool all_pass = false;
};

/// f = 24 alpha Delta^2 + E_4^3 Delta and its conjugate f'.
Weight24Report weight24_example(std::size_t precision = kDefaultPrecision);

}  // namespace pqlift
