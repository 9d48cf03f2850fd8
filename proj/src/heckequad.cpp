#include "pqlift/heckequad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace pqlift {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void require_odd_prime(std::int64_t p, const char* what) {
  if (p == 2 || !is_prime(p)) {
    throw InvalidInput(std::string(what) + " must be an odd prime, got " + std::to_string(p));
  }
}

bool is_prime_power_of(std::int64_t n, std::int64_t ell) {
  while (n % ell == 0) n /= ell;
  return n == 1;
}

}  // namespace

bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1) return false;
  const std::int64_t r = mod_floor(D, 4);
  if (r == 1) return is_squarefree(D);
  if (r != 0) return false;
  const std::int64_t m = D / 4;
  const std::int64_t mr = mod_floor(m, 4);
  return (mr == 2 || mr == 3) && is_squarefree(m);
}

ImagQuadField::ImagQuadField(std::int64_t discriminant) : D_(discriminant) {
  if (D_ >= 0) throw InvalidInput("imaginary quadratic field needs D < 0, got " + std::to_string(D_));
  if (D_ >= -4) throw InvalidInput("D = " + std::to_string(D_) + " has units beyond +-1; need D < -4");
  if (!is_fundamental_discriminant(D_)) throw InvalidInput(std::to_string(D_) + " is not a fundamental discriminant");
}

const char* to_string(Embedding e) { return e == Embedding::Sigma ? "sigma" : "sigma_bar"; }

const char* to_string(Splitting s) {
  switch (s) {
    case Splitting::Split:
      return "split";
    case Splitting::Inert:
      return "inert";
    case Splitting::Ramified:
      return "ramified";
  }
  return "?";
}

PlaceData place_data(const ImagQuadField& K, std::int64_t ell, std::int64_t other_prime, bool swap_kappa) {
  require_odd_prime(ell, "prime");
  require_odd_prime(other_prime, "other prime");
  const int symbol = kronecker_symbol(K.discriminant(), ell);
  if (symbol == 0) {
    throw InvalidInput(std::to_string(ell) + " is ramified in Q(sqrt " + std::to_string(K.discriminant()) + ")");
  }
  PlaceData out;
  out.prime = ell;
  out.other_prime = other_prime;
  if (symbol == 1) {
    out.splitting = Splitting::Split;
    for (int i = 0; i < 2; ++i) {
      QuadPlace v;
      v.prime = ell;
      v.residue_degree = 1;
      v.residue_field_size = ell;
      v.coprime_order = prime_to_part(ell - 1, other_prime);
      v.kappa = {{i == 0 ? Embedding::Sigma : Embedding::SigmaBar, 0}};
      out.places.push_back(std::move(v));
    }
  } else {
    out.splitting = Splitting::Inert;
    QuadPlace v;
    v.prime = ell;
    v.residue_degree = 2;
    v.residue_field_size = ell * ell;
    v.coprime_order = prime_to_part(ell * ell - 1, other_prime);
    v.kappa = {{Embedding::Sigma, swap_kappa ? 1 : 0}, {Embedding::SigmaBar, swap_kappa ? 0 : 1}};
    out.places.push_back(std::move(v));
  }
  return out;
}

std::pair<PlaceData, PlaceData> splitting_data(const ImagQuadField& K, std::int64_t p, std::int64_t q) {
  if (p == q) throw InvalidInput("p and q must be distinct");
  PlaceData at_p = place_data(K, p, q);
  PlaceData at_q = place_data(K, q, p);
  for (std::size_t i = 0; i < at_p.places.size(); ++i) at_p.places[i].label = "v" + std::to_string(i + 1);
  for (std::size_t j = 0; j < at_q.places.size(); ++j) at_q.places[j].label = "v'" + std::to_string(j + 1);
  return {std::move(at_p), std::move(at_q)};
}

std::vector<std::int64_t> xi_values(const PlaceData& places, const InfinityType& type) {
  std::vector<std::int64_t> out;
  for (const auto& v : places.places) {
    std::int64_t sum = 0;
    for (const auto& [embedding, kappa] : v.kappa) {
      const std::int64_t n = embedding == Embedding::Sigma ? type.n_sigma : type.n_sigma_bar;
      sum += n * ipow(places.prime, kappa);
    }
    out.push_back(-sum);
  }
  return out;
}

FinAbGroup wild_unit_group(std::int64_t ell, int residue_degree, int level) {
  if (level <= 1) return FinAbGroup();
  std::vector<std::int64_t> factors(static_cast<std::size_t>(residue_degree), ipow(ell, level - 1));
  std::vector<std::string> labels;
  for (int i = 0; i < residue_degree; ++i) {
    labels.push_back("wild level " + std::to_string(level) + " at " + std::to_string(ell) + " #" + std::to_string(i + 1));
  }
  return FinAbGroup(std::move(factors), std::move(labels));
}

std::optional<ConditionCheck> CriterionResult::first_failure() const {
  for (const auto& c : conditions) {
    if (!c.holds) return c;
  }
  return std::nullopt;
}

CriterionResult criterion_decide(const ImagQuadField& K, std::int64_t p, std::int64_t q, const QuadLocalData& local,
                                 const InfinityType& type, const CriterionOptions& options) {
  if (p == q) throw InvalidInput("p and q must be distinct");
  CriterionResult result;
  result.places_p = place_data(K, p, q, options.swap_kappa_p);
  result.places_q = place_data(K, q, p, options.swap_kappa_q);
  for (std::size_t i = 0; i < result.places_p.places.size(); ++i) {
    result.places_p.places[i].label = "v" + std::to_string(i + 1);
  }
  for (std::size_t j = 0; j < result.places_q.places.size(); ++j) {
    result.places_q.places[j].label = "v'" + std::to_string(j + 1);
  }

  auto validate = [](const PlaceData& pd, const std::vector<PlaceLocal>& data, const char* side) {
    if (data.size() != pd.places.size()) {
      throw InvalidInput(std::string("local data ") + side + ": expected " + std::to_string(pd.places.size()) +
                         " places, got " + std::to_string(data.size()));
    }
    for (const auto& d : data) {
      if (!is_prime_power_of(d.psi.order(), pd.prime)) {
        throw InvalidInput(std::string("local data ") + side + ": wild character must have " +
                           std::to_string(pd.prime) + "-power order, got order " + std::to_string(d.psi.order()));
      }
    }
  };
  validate(result.places_p, local.at_p, "at p");
  validate(result.places_q, local.at_q, "at q");

  const QmodZ half(1, 2);
  QmodZ unit_lhs;
  QuadCertificate cert;
  cert.infinity_type = type;
  bool local_ok = true;

  auto run_places = [&](const PlaceData& pd, const std::vector<PlaceLocal>& data, const char* label) {
    const auto xi = xi_values(pd, type);
    for (std::size_t i = 0; i < pd.places.size(); ++i) {
      const auto& v = pd.places[i];
      const auto& d = data[i];
      ConditionCheck check;
      check.condition = label;
      check.place = v.label;
      check.k = mod_floor(d.k, v.residue_field_size - 1);
      check.a = mod_floor(d.a, v.coprime_order);
      check.xi = xi[i];
      check.modulus = v.coprime_order;
      check.holds = mod_floor(check.k - check.a - check.xi, v.coprime_order) == 0;
      local_ok = local_ok && check.holds;
      result.conditions.push_back(check);

      // eps_v = teich_v^(k - xi) * psi. At u = -1: teich(-1) is the element of
      // order 2, and -1 lies in the roots-of-unity factor of U_v, so the wild
      // character contributes nothing.
      const std::int64_t tame = mod_floor(check.k - check.xi, v.residue_field_size - 1);
      unit_lhs += half.times(tame);

      QuadLocalFactor factor;
      factor.place = v.label;
      factor.prime = v.prime;
      factor.residue_field_size = v.residue_field_size;
      factor.tame_exponent = tame;
      factor.psi = d.psi;
      if (!d.psi.is_trivial()) {
        factor.conductor_exponent = 1 + valuation(d.psi.order(), v.prime);
      } else {
        factor.conductor_exponent = tame == 0 ? 0 : 1;
      }
      if (factor.conductor_exponent > 0) {
        for (int e = 0; e < factor.conductor_exponent; ++e) cert.conductor_norm *= v.residue_field_size;
        cert.local_chars.push_back(std::move(factor));
      }
    }
  };
  run_places(result.places_p, local.at_p, "(1)");
  run_places(result.places_q, local.at_q, "(1')");

  // prod_sigma sigma(-1)^(-n_sigma) = (-1)^(n_sigma + n_sigma_bar).
  ConditionCheck unit;
  unit.condition = "(2)";
  unit.place = "u=-1";
  unit.unit_lhs = unit_lhs;
  unit.unit_rhs = half.times(type.n_sigma + type.n_sigma_bar);
  unit.holds = unit.unit_lhs == unit.unit_rhs;
  result.conditions.push_back(unit);

  result.holds = local_ok && unit.holds;
  if (result.holds) result.certificate = std::move(cert);
  return result;
}

// ---------------------------------------------------------------------------
// Binary quadratic forms

bool BinaryQuadraticForm::is_reduced() const {
  if (!(std::abs(b) <= a && a <= c)) return false;
  if ((std::abs(b) == a || a == c) && b < 0) return false;
  return true;
}

BinaryQuadraticForm BinaryQuadraticForm::reduced() const {
  const std::int64_t D = discriminant();
  if (D >= 0 || a <= 0) throw InvalidInput("reduction needs a positive definite form");
  BinaryQuadraticForm f = *this;
  auto normalize = [&] {
    if (-f.a < f.b && f.b <= f.a) return;
    const std::int64_t r = floor_div(f.a - f.b, 2 * f.a);
    f.b += 2 * r * f.a;
    f.c = (f.b * f.b - D) / (4 * f.a);
  };
  normalize();
  while (f.a > f.c) {
    f = {f.c, -f.b, f.a};
    normalize();
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

std::string BinaryQuadraticForm::to_string() const {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

BinaryQuadraticForm principal_form(std::int64_t D) {
  const std::int64_t b = mod_floor(D, 2);
  return BinaryQuadraticForm{1, b, (b * b - D) / 4};
}

BinaryQuadraticForm inverse(const BinaryQuadraticForm& f) { return BinaryQuadraticForm{f.a, -f.b, f.c}.reduced(); }

BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g) {
  if (f.discriminant() != g.discriminant()) throw InvalidInput("composition of forms of different discriminants");
  const std::int64_t D = f.discriminant();
  BinaryQuadraticForm f1 = f, f2 = g;
  if (f1.a > f2.a) std::swap(f1, f2);
  const std::int64_t s = (f1.b + f2.b) / 2;
  const std::int64_t n = f2.b - s;
  std::int64_t y1 = 0, d = f1.a;
  if (f2.a % f1.a != 0) {
    auto [gcd, u, v] = extended_gcd(f2.a, f1.a);
    (void)v;
    d = gcd;
    y1 = u;
  }
  std::int64_t x2 = 0, y2 = -1, d1 = d;
  if (s % d != 0) {
    auto [gcd, x, y] = extended_gcd(s, d);
    d1 = gcd;
    x2 = x;
    y2 = -y;
  }
  const std::int64_t v1 = f1.a / d1;
  const std::int64_t v2 = f2.a / d1;
  const __int128 r_raw = static_cast<__int128>(y1) * y2 * n - static_cast<__int128>(x2) * f2.c;
  std::int64_t r = static_cast<std::int64_t>(((r_raw % v1) + v1) % v1);
  const std::int64_t b3 = f2.b + 2 * v2 * r;
  const std::int64_t a3 = v1 * v2;
  const __int128 num = static_cast<__int128>(b3) * b3 - D;
  if (num % (4 * static_cast<__int128>(a3)) != 0) throw InternalError("composition produced a non-integral form");
  const std::int64_t c3 = static_cast<std::int64_t>(num / (4 * static_cast<__int128>(a3)));
  return BinaryQuadraticForm{a3, b3, c3}.reduced();
}

IdealClassGroup class_group(std::int64_t D, std::int64_t bound) {
  if (D >= 0) throw InvalidInput("class_group: discriminant must be negative");
  if (!is_fundamental_discriminant(D)) throw InvalidInput(std::to_string(D) + " is not a fundamental discriminant");
  if (-D > bound) throw InvalidInput("class_group: |D| exceeds bound " + std::to_string(bound));

  IdealClassGroup G;
  G.discriminant = D;
  for (std::int64_t a = 1; 3 * a * a <= -D; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      if (mod_floor(b - D, 2) != 0) continue;
      const std::int64_t num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (std::gcd(std::gcd(a, std::abs(b)), c) != 1) continue;
      G.forms.push_back({a, b, c});
    }
  }
  std::sort(G.forms.begin(), G.forms.end());
  G.class_number = static_cast<std::int64_t>(G.forms.size());
  const BinaryQuadraticForm one = principal_form(D).reduced();
  if (G.forms.empty() || !(G.forms.front() == one)) throw InternalError("principal form missing from enumeration");

  for (const auto& f : G.forms) {
    std::int64_t order = 1;
    BinaryQuadraticForm acc = f;
    while (!(acc == one)) {
      acc = compose(acc, f);
      if (++order > G.class_number) throw InternalError("element order exceeds class number");
    }
    G.element_orders.push_back(order);
    G.exponent = std::lcm(G.exponent, order);
  }

  // Invariant factors from the sizes of the ell^j-torsion subgroups.
  std::vector<std::int64_t> chain;
  for (auto [ell, e] : factorize(G.class_number)) {
    std::vector<int> ranks;  // ranks[j] = log_ell #G[ell^(j+1)]
    std::int64_t power = 1;
    for (int j = 1; j <= e; ++j) {
      power *= ell;
      std::int64_t count = 0;
      for (auto o : G.element_orders) count += power % o == 0 ? 1 : 0;
      int r = 0;
      while (count > 1) {
        count /= ell;
        ++r;
      }
      ranks.push_back(r);
    }
    // Number of cyclic factors of exponent >= j is ranks[j-1] - ranks[j-2].
    std::vector<int> exponents;
    for (int j = 1; j <= e; ++j) {
      const int at_least_j = ranks[j - 1] - (j >= 2 ? ranks[j - 2] : 0);
      const int at_least_next = j < e ? ranks[j] - ranks[j - 1] : 0;
      for (int t = 0; t < at_least_j - at_least_next; ++t) exponents.push_back(j);
    }
    std::sort(exponents.begin(), exponents.end(), std::greater<>());
    if (chain.size() < exponents.size()) chain.insert(chain.begin(), exponents.size() - chain.size(), 1);
    for (std::size_t i = 0; i < exponents.size(); ++i) chain[chain.size() - 1 - i] *= ipow(ell, exponents[i]);
  }
  G.invariant_factors = chain;
  return G;
}

CountingReport counting_bound(const ImagQuadField& K, std::int64_t p, std::int64_t q) {
  require_odd_prime(p, "p");
  require_odd_prime(q, "q");
  if (p == q) throw InvalidInput("p and q must be distinct");
  for (auto ell : {p, q}) {
    if (kronecker_symbol(K.discriminant(), ell) != 1) {
      throw InvalidInput(std::to_string(ell) + " does not split in Q(sqrt " + std::to_string(K.discriminant()) + ")");
    }
  }
  IdealClassGroup G = class_group(K.discriminant());
  for (auto ell : {p, q}) {
    if (G.class_number % ell == 0) {
      throw InvalidInput(std::to_string(ell) + " divides the class number " + std::to_string(G.class_number));
    }
  }
  CountingReport r;
  r.discriminant = K.discriminant();
  r.p = p;
  r.q = q;
  r.exponent = G.exponent;
  r.class_number = G.class_number;
  r.liftable_bound = G.exponent * G.exponent * G.class_number;
  r.pair_count = G.class_number * G.class_number;
  r.non_liftable_pair_exists = G.class_number > G.exponent * G.exponent;
  r.invariant_factors = G.invariant_factors;
  return r;
}

}  // namespace pqlift
