#include "pqlift/exactnum.hpp"

#include <charconv>
#include <numeric>

namespace pqlift {

std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  __int128 prod = static_cast<__int128>(mod_floor(a, m)) * mod_floor(b, m);
  return static_cast<std::int64_t>(prod % m);
}

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t result = 1;
  base = mod_floor(base, m);
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

BezoutTriple extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b;
  std::int64_t old_s = 1, s = 0;
  std::int64_t old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t quot = old_r / r;
    std::int64_t tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quot * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::optional<std::int64_t> inverse_mod(std::int64_t a, std::int64_t m) {
  auto [g, x, y] = extended_gcd(mod_floor(a, m), m);
  (void)y;
  if (g != 1) return std::nullopt;
  return mod_floor(x, m);
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::int64_t d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (std::int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (a % n == 0) continue;
    std::int64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw InvalidInput("factorize: n must be positive");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

int valuation(std::int64_t n, std::int64_t ell) {
  if (n == 0) throw InvalidInput("valuation of zero");
  int v = 0;
  while (n % ell == 0) {
    n /= ell;
    ++v;
  }
  return v;
}

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (auto [prime, e] : factorize(n)) {
    (void)e;
    phi = phi / prime * (prime - 1);
  }
  return phi;
}

bool is_squarefree(std::int64_t n) {
  if (n < 0) n = -n;
  if (n == 0) return false;
  for (auto [prime, e] : factorize(n)) {
    (void)prime;
    if (e > 1) return false;
  }
  return true;
}

std::int64_t prime_to_part(std::int64_t n, std::int64_t ell) {
  if (!is_prime(ell)) throw InvalidInput("prime_to_part: " + std::to_string(ell) + " is not prime");
  if (n < 1) throw InvalidInput("prime_to_part: n must be positive");
  while (n % ell == 0) n /= ell;
  return n;
}

std::int64_t smallest_primitive_root(std::int64_t m) {
  if (m == 2) return 1;
  if (m == 4) return 3;
  std::int64_t phi = euler_phi(m);
  auto phi_primes = factorize(phi);
  for (std::int64_t g = 2; g < m; ++g) {
    if (std::gcd(g, m) != 1) continue;
    bool primitive = true;
    for (auto [r, e] : phi_primes) {
      (void)e;
      if (pow_mod(g, phi / r, m) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) return g;
  }
  throw InvalidInput("no primitive root modulo " + std::to_string(m));
}

int kronecker_symbol(std::int64_t D, std::int64_t p) {
  if (p == 2 || !is_prime(p)) {
    throw InvalidInput("kronecker_symbol: modulus must be an odd prime, got " + std::to_string(p));
  }
  std::int64_t a = mod_floor(D, p);
  if (a == 0) return 0;
  return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

// ---------------------------------------------------------------------------

QmodZ::QmodZ(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw InvalidInput("QmodZ: denominator must be positive");
  num = mod_floor(num, den);
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = den;
  num_ = num / g;
  den_ = den / g;
}

QmodZ QmodZ::operator+(const QmodZ& other) const {
  std::int64_t l = std::lcm(den_, other.den_);
  __int128 n = static_cast<__int128>(num_) * (l / den_) + static_cast<__int128>(other.num_) * (l / other.den_);
  return QmodZ(static_cast<std::int64_t>(n % l), l);
}

QmodZ QmodZ::operator-() const { return QmodZ(den_ - num_, den_); }

QmodZ QmodZ::operator-(const QmodZ& other) const { return *this + (-other); }

QmodZ QmodZ::times(std::int64_t k) const { return QmodZ(mul_mod(num_, k, den_), den_); }

std::string QmodZ::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

QmodZ QmodZ::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw InvalidInput("malformed Q/Z value \"" + std::string(text) + "\"");
    }
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return QmodZ(parse_int(text), 1);
  std::int64_t den = parse_int(text.substr(slash + 1));
  if (den <= 0) throw InvalidInput("Q/Z value \"" + std::string(text) + "\" has nonpositive denominator");
  return QmodZ(parse_int(text.substr(0, slash)), den);
}

QmodZ prime_to_component(const QmodZ& x, std::int64_t ell) {
  std::int64_t m = x.den();
  std::int64_t power = 1;
  while (m % ell == 0) {
    m /= ell;
    power *= ell;
  }
  if (power == 1) return x;
  if (m == 1) return QmodZ();
  // Idempotent u == 1 (mod m), u == 0 (mod ell^s) projects onto the
  // prime-to-ell component.
  std::int64_t u = mul_mod(power, *inverse_mod(power, m), x.den());
  return x.times(u);
}

QmodZ prime_power_component(const QmodZ& x, std::int64_t ell) {
  return x - prime_to_component(x, ell);
}

std::optional<std::int64_t> discrete_log(const QmodZ& target, const QmodZ& base) {
  std::int64_t m = base.order();
  if (m % target.order() != 0) return std::nullopt;
  // target = u/d with d | m, so target = u*(m/d)/m; base = b/m with gcd(b,m)=1.
  std::int64_t scaled = mul_mod(target.num(), m / target.order(), m);
  std::int64_t b_inv = *inverse_mod(base.num(), m);
  return mul_mod(scaled, b_inv, m);
}

// ---------------------------------------------------------------------------

Congruence::Congruence(std::int64_t r, std::int64_t m) {
  if (m < 1) throw InvalidInput("Congruence: modulus must be >= 1");
  residue = mod_floor(r, m);
  modulus = m;
}

std::int64_t Congruence::least_at_least(std::int64_t lower_bound) const {
  return lower_bound + mod_floor(residue - lower_bound, modulus);
}

std::string Congruence::to_string() const {
  return std::to_string(residue) + " mod " + std::to_string(modulus);
}

std::optional<Congruence> crt_pair(const Congruence& c1, const Congruence& c2) {
  auto [g, x, y] = extended_gcd(c1.modulus, c2.modulus);
  (void)y;
  std::int64_t diff = c2.residue - c1.residue;
  if (diff % g != 0) return std::nullopt;
  std::int64_t l = c1.modulus / g * c2.modulus;
  // r = r1 + m1 * t with t == (diff/g) * x (mod m2/g)
  std::int64_t m2g = c2.modulus / g;
  std::int64_t t = mul_mod(diff / g, x, m2g);
  __int128 r = static_cast<__int128>(c1.residue) + static_cast<__int128>(c1.modulus) * t;
  return Congruence(static_cast<std::int64_t>(r % l), l);
}

// ---------------------------------------------------------------------------

Rational bernoulli(int k, int bound) {
  if (k < 2 || k % 2 != 0) {
    throw InvalidInput("bernoulli: k must be even and >= 2, got " + std::to_string(k));
  }
  if (k > bound) {
    throw InvalidInput("bernoulli: k = " + std::to_string(k) + " exceeds bound " + std::to_string(bound));
  }
  // Akiyama-Tanigawa triangle; yields B_n with B_1 = +1/2, identical for even n.
  std::vector<Rational> row(static_cast<std::size_t>(k) + 1);
  for (int m = 0; m <= k; ++m) {
    row[m] = Rational(1, m + 1);
    for (int j = m; j >= 1; --j) {
      row[j - 1] = j * (row[j - 1] - row[j]);
      row[j - 1].canonicalize();
    }
  }
  return row[0];
}

std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace pqlift
