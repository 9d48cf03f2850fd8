#include "pqlift/qseries.hpp"

#include <cmath>
#include <numeric>

namespace pqlift {

// ---------------------------------------------------------------------------
// QuadElem

QuadElem::QuadElem(Rational a, Rational b, std::int64_t D) : a_(std::move(a)), b_(std::move(b)), D_(D) {
  if (D_ < 0) throw InvalidInput("QuadElem: D must be positive");
  if (D_ > 0) {
    const auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(D_))));
    for (std::int64_t s = std::max<std::int64_t>(0, r - 2); s <= r + 2; ++s) {
      if (s * s == D_) throw InvalidInput("QuadElem: D = " + std::to_string(D_) + " is a square");
    }
  } else if (b_ != 0) {
    throw InvalidInput("QuadElem: irrational part needs D > 0");
  }
}

std::int64_t QuadElem::common_D(const QuadElem& x, const QuadElem& y) {
  if (x.D_ == 0) return y.D_;
  if (y.D_ == 0 || y.D_ == x.D_) return x.D_;
  throw InvalidInput("QuadElem: mixing sqrt " + std::to_string(x.D_) + " and sqrt " + std::to_string(y.D_));
}

QuadElem QuadElem::conjugate() const {
  QuadElem out = *this;
  out.b_ = -b_;
  return out;
}

Rational QuadElem::norm() const { return a_ * a_ - b_ * b_ * D_; }
Rational QuadElem::trace() const { return 2 * a_; }

QuadElem QuadElem::operator+(const QuadElem& o) const {
  QuadElem out;
  out.D_ = common_D(*this, o);
  out.a_ = a_ + o.a_;
  out.b_ = b_ + o.b_;
  return out;
}

QuadElem QuadElem::operator-(const QuadElem& o) const {
  QuadElem out;
  out.D_ = common_D(*this, o);
  out.a_ = a_ - o.a_;
  out.b_ = b_ - o.b_;
  return out;
}

QuadElem QuadElem::operator-() const {
  QuadElem out = *this;
  out.a_ = -a_;
  out.b_ = -b_;
  return out;
}

QuadElem QuadElem::operator*(const QuadElem& o) const {
  QuadElem out;
  out.D_ = common_D(*this, o);
  if (b_ == 0 && o.b_ == 0) {
    out.a_ = a_ * o.a_;
    return out;
  }
  out.a_ = a_ * o.a_ + b_ * o.b_ * out.D_;
  out.b_ = a_ * o.b_ + b_ * o.a_;
  return out;
}

bool operator==(const QuadElem& x, const QuadElem& y) {
  if (x.D_ != 0 && y.D_ != 0 && x.D_ != y.D_) return false;
  return x.a_ == y.a_ && x.b_ == y.b_;
}

std::string QuadElem::to_string() const {
  if (b_ == 0) return pqlift::to_string(a_);
  std::string out = a_ == 0 ? "" : pqlift::to_string(a_) + (b_ > 0 ? " + " : " - ");
  if (a_ == 0 && b_ < 0) out = "-";
  const Rational mag = abs(b_);
  if (mag != 1) out += pqlift::to_string(mag) + "*";
  return out + "sqrt(" + std::to_string(D_) + ")";
}

QuadSeries to_quadratic(const RationalSeries& f) {
  std::vector<QuadElem> out;
  out.reserve(f.precision());
  for (const auto& c : f.coefficients()) out.emplace_back(c);
  return QuadSeries(std::move(out), f.weight());
}

// ---------------------------------------------------------------------------
// Eisenstein series and Delta

std::vector<Integer> divisor_sums(int e, std::size_t precision) {
  std::vector<Integer> sigma(precision, 0);
  for (std::size_t d = 1; d < precision; ++d) {
    Integer de;
    mpz_ui_pow_ui(de.get_mpz_t(), d, static_cast<unsigned long>(e));
    for (std::size_t m = d; m < precision; m += d) sigma[m] += de;
  }
  return sigma;
}

Rational eisenstein_factor(int k) {
  if (k < 2 || k % 2 != 0) throw InvalidInput("Eisenstein series need even weight >= 2, got " + std::to_string(k));
  Rational f = Rational(-2 * k) / bernoulli(k, std::max(k, kDefaultBernoulliBound));
  f.canonicalize();
  return f;
}

RationalSeries eisenstein(int k, std::size_t precision) {
  const Rational factor = eisenstein_factor(k);
  const auto sigma = divisor_sums(k - 1, precision);
  std::vector<Rational> coeffs(precision, 0);
  if (precision > 0) coeffs[0] = 1;
  for (std::size_t n = 1; n < precision; ++n) coeffs[n] = factor * sigma[n];
  return RationalSeries(std::move(coeffs), k);
}

RationalSeries delta(std::size_t precision) {
  if (precision == 0) return RationalSeries({}, 12);
  // prod (1-q^n)^3 = sum_m (-1)^m (2m+1) q^(m(m+1)/2)
  std::vector<Rational> jacobi(precision - 1, 0);
  for (std::size_t m = 0; m * (m + 1) / 2 < jacobi.size(); ++m) {
    const long sign = m % 2 == 0 ? 1 : -1;
    jacobi[m * (m + 1) / 2] = sign * static_cast<long>(2 * m + 1);
  }
  const RationalSeries eta24 = RationalSeries(std::move(jacobi)).pow(8);
  std::vector<Rational> coeffs(precision, 0);
  for (std::size_t n = 1; n < precision; ++n) coeffs[n] = eta24[n - 1];
  return RationalSeries(std::move(coeffs), 12);
}

HasseReport hasse_invariant_check(std::int64_t p, std::int64_t q, std::size_t precision, std::optional<int> weight) {
  for (auto ell : {p, q}) {
    if (ell == 2 || !is_prime(ell)) throw InvalidInput("Hasse invariant needs odd primes, got " + std::to_string(ell));
  }
  if (p == q) throw InvalidInput("p and q must be distinct");
  HasseReport r;
  r.p = p;
  r.q = q;
  r.weight = weight ? *weight : static_cast<int>(std::lcm(p - 1, q - 1));
  r.precision = precision;
  const RationalSeries E = eisenstein(r.weight, precision);
  r.factor = eisenstein_factor(r.weight);
  const Integer pq = Integer(p) * q;
  for (std::size_t n = 1; n < precision; ++n) {
    const Rational& c = E[n];
    const bool num_ok = mpz_divisible_p(c.get_num_mpz_t(), pq.get_mpz_t()) != 0;
    Integer g;
    mpz_gcd(g.get_mpz_t(), c.get_den_mpz_t(), pq.get_mpz_t());
    if (!num_ok || g != 1) {
      r.first_offending = n;
      break;
    }
  }
  r.passes = !r.first_offending.has_value();
  return r;
}

// ---------------------------------------------------------------------------
// Reduction at split primes

std::int64_t reduce_rational(const Rational& x, std::int64_t ell) {
  const Integer m(ell);
  Integer num = x.get_num();
  Integer den = x.get_den();
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw InvalidInput(to_string(x) + " is not integral at " + std::to_string(ell));
  }
  Integer r = num * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r.get_si();
}

std::vector<std::int64_t> sqrt_mod(std::int64_t D, std::int64_t ell) {
  if (ell < 2 || !is_prime(ell)) throw InvalidInput("sqrt_mod needs a prime modulus");
  if (ell > 10'000'000) throw InvalidInput("sqrt_mod: modulus too large for exhaustive search");
  std::vector<std::int64_t> roots;
  const std::int64_t d = mod_floor(D, ell);
  for (std::int64_t r = 0; r < ell; ++r) {
    if (mul_mod(r, r, ell) == d) roots.push_back(r);
  }
  return roots;
}

SplitPrimeIdeal::SplitPrimeIdeal(std::int64_t ell, std::int64_t r, std::int64_t D) : ell_(ell), r_(r), D_(D) {
  if (ell_ == 2 || !is_prime(ell_)) throw InvalidInput("split prime ideal needs an odd prime, got " + std::to_string(ell));
  if (mod_floor(D_, ell_) == 0) throw InvalidInput(std::to_string(ell) + " ramifies in Q(sqrt " + std::to_string(D) + ")");
  if (r_ < 0 || r_ >= ell_) throw InvalidInput("root must satisfy 0 <= r < ell");
  if (mul_mod(r_, r_, ell_) != mod_floor(D_, ell_)) {
    throw InvalidInput(std::to_string(r) + "^2 is not " + std::to_string(D) + " mod " + std::to_string(ell));
  }
}

std::int64_t SplitPrimeIdeal::reduce(const QuadElem& x) const {
  if (x.D() != 0 && x.D() != D_) throw InvalidInput("element lives in a different quadratic field");
  return mod_floor(reduce_rational(x.a(), ell_) + mul_mod(reduce_rational(x.b(), ell_), r_, ell_), ell_);
}

std::string SplitPrimeIdeal::to_string() const {
  return "(" + std::to_string(ell_) + ", sqrt(" + std::to_string(D_) + ") - " + std::to_string(r_) + ")";
}

namespace {

constexpr std::size_t kShownResidues = 10;

template <class F, class G>
CongruenceVerdict compare_residues(std::size_t precision_f, std::size_t precision_g, std::optional<int> wf,
                                   std::optional<int> wg, std::int64_t ell, std::size_t bound, F reduce_f,
                                   G reduce_g) {
  if (wf && wg && mod_floor(*wf - *wg, ell - 1) != 0) {
    throw InvalidInput("weights " + std::to_string(*wf) + " and " + std::to_string(*wg) + " differ mod " +
                       std::to_string(ell - 1));
  }
  if (precision_f < bound || precision_g < bound) {
    throw InvalidInput("precision " + std::to_string(std::min(precision_f, precision_g)) + " below bound " +
                       std::to_string(bound));
  }
  CongruenceVerdict v;
  v.bound = bound;
  v.sturm_bound = sturm_bound_level_one(std::max(wf.value_or(0), wg.value_or(0)));
  for (std::size_t n = 0; n < bound; ++n) {
    const std::int64_t x = reduce_f(n);
    const std::int64_t y = reduce_g(n);
    if (n < kShownResidues) {
      v.residues_lhs.push_back(x);
      v.residues_rhs.push_back(y);
    }
    if (x != y && !v.first_mismatch) v.first_mismatch = n;
  }
  v.holds = !v.first_mismatch.has_value();
  return v;
}

}  // namespace

CongruenceVerdict sturm_congruence(const QuadSeries& f, const SplitPrimeIdeal& ideal_f, const QuadSeries& g,
                                   const SplitPrimeIdeal& ideal_g, std::size_t bound) {
  if (ideal_f.ell() != ideal_g.ell() || ideal_f.D() != ideal_g.D()) {
    throw InvalidInput("congruence compares residues at different primes");
  }
  return compare_residues(
      f.precision(), g.precision(), f.weight(), g.weight(), ideal_f.ell(), bound,
      [&](std::size_t n) { return ideal_f.reduce(f[n]); }, [&](std::size_t n) { return ideal_g.reduce(g[n]); });
}

CongruenceVerdict sturm_congruence(const QuadSeries& f, const QuadSeries& g, const SplitPrimeIdeal& ideal,
                                   std::size_t bound) {
  return sturm_congruence(f, ideal, g, ideal, bound);
}

CongruenceVerdict sturm_congruence(const RationalSeries& f, const RationalSeries& g, std::int64_t ell,
                                   std::size_t bound) {
  if (ell < 2 || !is_prime(ell)) throw InvalidInput("congruence modulus must be prime");
  return compare_residues(
      f.precision(), g.precision(), f.weight(), g.weight(), ell, bound,
      [&](std::size_t n) { return reduce_rational(f[n], ell); },
      [&](std::size_t n) { return reduce_rational(g[n], ell); });
}

// ---------------------------------------------------------------------------
// Weight 24, level 1

Weight24Report weight24_example(std::size_t precision) {
  if (precision < 10) throw InvalidInput("weight-24 example needs precision >= 10");
  Weight24Report r;
  r.precision = precision;
  const std::int64_t D = r.D;
  const QuadElem root_plus(Rational(-13, 2), Rational(1, 2), D);

  const RationalSeries Delta = delta(precision);
  const RationalSeries Q = eisenstein(4, precision);
  const QuadSeries delta_sq = to_quadratic(Delta * Delta);
  const QuadSeries q3_delta = to_quadratic(Q.pow(3) * Delta);
  const QuadSeries Dq = to_quadratic(Delta);
  auto form = [&](const QuadElem& a) { return delta_sq.scaled(QuadElem(24L) * a) + q3_delta; };

  const auto roots7 = sqrt_mod(D, 7);
  const auto roots5 = sqrt_mod(D, 5);
  if (roots7.size() != 2 || roots5.size() != 2) throw InternalError("5 and 7 must split in Q(sqrt 144169)");
  r.p7 = SplitPrimeIdeal(7, roots7[0], D);
  r.p7_prime = r.p7.conjugate();

  // Label f so that Delta == f mod p7.
  r.alpha = root_plus;
  if (!sturm_congruence(Dq, form(root_plus), r.p7, precision).holds) r.alpha = root_plus.conjugate();
  r.alpha_prime = r.alpha.conjugate();
  const QuadSeries f = form(r.alpha);
  const QuadSeries fp = form(r.alpha_prime);

  const Rational n = r.alpha.norm();
  if (n.get_den() != 1) throw InternalError("alpha is not an algebraic integer");
  r.alpha_norm = n.get_num();
  r.norm_divisible_by_5 = mpz_divisible_ui_p(r.alpha_norm.get_mpz_t(), 5) != 0;
  r.norm_divisible_by_7 = mpz_divisible_ui_p(r.alpha_norm.get_mpz_t(), 7) != 0;
  r.q_congruent_1_mod_5 = sturm_congruence(Q, RationalSeries::constant(1, precision, 4), 5, precision).holds;

  // p5 is the prime above 5 containing alpha.
  r.p5 = SplitPrimeIdeal(5, roots5[0], D);
  if (r.p5.reduce(r.alpha) != 0) r.p5 = r.p5.conjugate();
  r.p5_prime = r.p5.conjugate();

  auto line = [&](std::string lhs, const QuadSeries& a, const SplitPrimeIdeal& ia, std::string rhs,
                  const QuadSeries& b, const SplitPrimeIdeal& ib, std::string la, std::string lb) {
    return Weight24Congruence{std::move(lhs), std::move(rhs), std::move(la), std::move(lb),
                              sturm_congruence(a, ia, b, ib, precision)};
  };
  r.congruences.push_back(line("Delta", Dq, r.p5, "f", f, r.p5, "p5", "p5"));
  r.congruences.push_back(line("Delta", Dq, r.p7, "f", f, r.p7, "p7", "p7"));
  r.congruences.push_back(line("Delta", Dq, r.p7_prime, "f'", fp, r.p7_prime, "p7'", "p7'"));
  // f and f' agree mod 5 once each is reduced at the prime containing its own alpha.
  r.congruences.push_back(line("f", f, r.p5, "f'", fp, r.p5_prime, "p5", "p5'"));
  r.literal_control = line("f", f, r.p5, "f'", fp, r.p5, "p5", "p5");

  r.all_pass = r.norm_divisible_by_5 && r.q_congruent_1_mod_5;
  for (const auto& c : r.congruences) r.all_pass = r.all_pass && c.verdict.holds;
  return r;
}

}  // namespace pqlift
