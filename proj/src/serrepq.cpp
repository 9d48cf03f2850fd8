#include "pqlift/serrepq.hpp"

#include <algorithm>
#include <numeric>

#include "pqlift/heckeq.hpp"

namespace pqlift {

namespace {

void require_prime(std::int64_t n, const char* what) {
  if (n < 2 || !is_prime(n)) throw InvalidInput(std::string(what) + " must be prime, got " + std::to_string(n));
}

void require_prime_to(const QmodZ& zeta, std::int64_t r, const char* what) {
  if (std::gcd(zeta.order(), r) != 1) {
    throw InvalidInput(std::string(what) + ": root of unity " + zeta.to_string() + " has order divisible by " +
                       std::to_string(r));
  }
}

ModCharacter at_level(const ModCharacter& c, int level) {
  return ModCharacter(inflate(c.base(), level), c.residue_char());
}

int unit_level(const GroupCharacter& c) {
  const auto& label = c.group().unit_label();
  return label ? label->exponent : 0;
}

void require_unit_character_at(const GroupCharacter& c, std::int64_t ell, const char* what) {
  const auto& label = c.group().unit_label();
  if (!label || (label->exponent > 0 && label->prime != ell)) {
    throw InvalidInput(std::string(what) + " must be a character of (Z/" + std::to_string(ell) + "^a)^*");
  }
}

/// zeta * ell^w reducing to x mod p and y mod q, smallest |w| first.
std::optional<FrobValue> lift_frob(const QmodZ& x, std::int64_t p, const QmodZ& y, std::int64_t q,
                                   std::int64_t ell) {
  const QmodZ tp = teichmuller_value(ell, p);
  const QmodZ tq = teichmuller_value(ell, q);
  const std::int64_t period = std::lcm(tp.order(), tq.order());
  for (std::int64_t step = 0; step <= period; ++step) {
    for (std::int64_t w : {step, -step}) {
      if (step == 0 && w != 0) continue;
      auto z = simultaneous_value_lift(x - tp.times(w), p, y - tq.times(w), q);
      if (z) return FrobValue{*z, w};
      if (step == 0) break;
    }
  }
  return std::nullopt;
}

std::string describe_ratio(const LocalGaloisDatum& d) {
  return d.ratio().to_string() + " mod " + std::to_string(d.residue_char);
}

}  // namespace

std::optional<WeightSolution> weight_crt(const Congruence& k_rho, const Congruence& k_rho_prime) {
  const std::int64_t p = k_rho.modulus + 1;
  const std::int64_t q = k_rho_prime.modulus + 1;
  for (auto ell : {p, q}) {
    if (ell == 2 || !is_prime(ell)) {
      throw InvalidInput("weight congruences must be taken mod p-1 for an odd prime p; got modulus " +
                         std::to_string(ell - 1));
    }
  }
  if (p == q) throw InvalidInput("p and q must be distinct");
  auto c = crt_pair(k_rho, k_rho_prime);
  if (!c) return std::nullopt;
  return WeightSolution{*c, c->least_at_least(2)};
}

std::string FrobValue::to_string() const {
  return "zeta(" + zeta.to_string() + ")*ell^" + std::to_string(weight);
}

QmodZ reduce_frob(const FrobValue& v, std::int64_t ell, std::int64_t r) {
  require_prime(r, "residue characteristic");
  if (r == ell) throw InvalidInput("cannot reduce ell-power Frobenius data at ell itself");
  return prime_to_component(v.zeta, r) + teichmuller_value(ell, r).times(v.weight);
}

WDParam WDParam::reducible(std::int64_t ell, Quasicharacter e1, Quasicharacter e2, int residue_degree) {
  require_prime(ell, "ell");
  require_unit_character_at(e1.inertial, ell, "inertial part");
  require_unit_character_at(e2.inertial, ell, "inertial part");
  if (residue_degree < 1) throw InvalidInput("residue degree must be positive");
  return WDParam{Shape::Reducible, ell, residue_degree, std::move(e1), std::move(e2)};
}

WDParam WDParam::steinberg(std::int64_t ell, Quasicharacter e, int residue_degree) {
  require_prime(ell, "ell");
  require_unit_character_at(e.inertial, ell, "inertial part");
  if (residue_degree < 1) throw InvalidInput("residue degree must be positive");
  return WDParam{Shape::Steinberg, ell, residue_degree, std::move(e), {}};
}

const char* to_string(WDParam::Shape s) { return s == WDParam::Shape::Reducible ? "principal_series" : "steinberg"; }

const char* to_string(LocalGaloisDatum::Kind k) {
  switch (k) {
    case LocalGaloisDatum::Kind::UnramifiedSemisimple:
      return "unramified";
    case LocalGaloisDatum::Kind::TamePrincipal:
      return "principal";
    case LocalGaloisDatum::Kind::UnipotentRamified:
      return "unipotent";
  }
  return "?";
}

LocalGaloisDatum LocalGaloisDatum::unramified(std::int64_t ell, std::int64_t residue_char, FrobValue ratio,
                                              int residue_degree) {
  require_prime(ell, "ell");
  require_prime(residue_char, "residue characteristic");
  if (ell == residue_char) throw InvalidInput("ell must differ from the residue characteristic");
  require_prime_to(ratio.zeta, residue_char, "eigenvalue ratio");
  if (residue_degree < 1) throw InvalidInput("residue degree must be positive");
  LocalGaloisDatum d;
  d.kind = Kind::UnramifiedSemisimple;
  d.ell = ell;
  d.residue_char = residue_char;
  d.residue_degree = residue_degree;
  const ModCharacter triv(GroupCharacter::trivial(FinAbGroup::units_mod_prime_power(ell, 1)), residue_char);
  d.inertia = {triv, triv};
  d.frobenius = {ratio, FrobValue{}};
  return d;
}

LocalGaloisDatum LocalGaloisDatum::tame_principal(std::int64_t ell, std::int64_t residue_char, ModCharacter i1,
                                                  ModCharacter i2, FrobValue f1, FrobValue f2,
                                                  int residue_degree) {
  LocalGaloisDatum d = unramified(ell, residue_char, FrobValue{}, residue_degree);
  for (const auto* c : {&i1, &i2}) {
    require_unit_character_at(c->base(), ell, "inertial character");
    if (c->residue_char() != residue_char) throw InvalidInput("inertial character has the wrong residue characteristic");
  }
  require_prime_to(f1.zeta, residue_char, "Frobenius eigenvalue");
  require_prime_to(f2.zeta, residue_char, "Frobenius eigenvalue");
  d.kind = Kind::TamePrincipal;
  d.inertia = {std::move(i1), std::move(i2)};
  d.frobenius = {f1, f2};
  return d;
}

LocalGaloisDatum LocalGaloisDatum::unipotent_ramified(std::int64_t ell, std::int64_t residue_char,
                                                      ModCharacter inertial, FrobValue eps_frob,
                                                      int residue_degree) {
  LocalGaloisDatum d = tame_principal(ell, residue_char, inertial, inertial,
                                      FrobValue{eps_frob.zeta, eps_frob.weight + residue_degree}, eps_frob,
                                      residue_degree);
  d.kind = Kind::UnipotentRamified;
  d.unipotent = true;
  return d;
}

QmodZ LocalGaloisDatum::ratio() const {
  return reduce_frob(frobenius[0], ell, residue_char) - reduce_frob(frobenius[1], ell, residue_char);
}

LocalGaloisDatum wd_reduce(const WDParam& param, std::int64_t r) {
  require_prime(r, "target prime");
  if (r == param.ell) throw InvalidInput("reduction at r = ell is not defined for ell-adic-free parameters");
  auto red = [r](const FrobValue& v) { return FrobValue{prime_to_component(v.zeta, r), v.weight}; };
  if (param.shape == WDParam::Shape::Steinberg) {
    return LocalGaloisDatum::unipotent_ramified(param.ell, r, reduce_mod(param.eps1.inertial, r),
                                                red(param.eps1.frobenius), param.residue_degree);
  }
  return LocalGaloisDatum::tame_principal(param.ell, r, reduce_mod(param.eps1.inertial, r),
                                          reduce_mod(param.eps2.inertial, r), red(param.eps1.frobenius),
                                          red(param.eps2.frobenius), param.residue_degree);
}

CompatVerdict local_compat(const LocalGaloisDatum& rho, const LocalGaloisDatum& rho_prime) {
  if (rho.ell != rho_prime.ell) throw InvalidInput("local data at different primes");
  if (rho.residue_degree != rho_prime.residue_degree) throw InvalidInput("local data over different extensions");
  if (rho.residue_char == rho_prime.residue_char) throw InvalidInput("p and q must be distinct");
  const std::int64_t ell = rho.ell;
  const std::int64_t p = rho.residue_char;
  const std::int64_t q = rho_prime.residue_char;
  const int f = rho.residue_degree;

  int level = 0;
  for (const auto* d : {&rho, &rho_prime}) {
    for (const auto& c : d->inertia) level = std::max(level, unit_level(c.base()));
  }
  std::array<ModCharacter, 2> I, J;
  for (int i = 0; i < 2; ++i) {
    I[i] = at_level(rho.inertia[i], level);
    J[i] = at_level(rho_prime.inertia[i], level);
  }
  const QmodZ R = rho.ratio();
  const QmodZ Rp = rho_prime.ratio();

  CompatVerdict v;
  std::vector<std::string> reasons;

  // Principal series: matched inertial characters lift, and the ratio is
  // the reduction of some zeta * ell^w. The common scalar is an unramified
  // twist and is matched exactly when possible.
  if (rho.unipotent || rho_prime.unipotent) {
    reasons.push_back("unipotent inertia forces the Steinberg shape");
  } else {
    for (int swap = 0; swap < 2; ++swap) {
      auto e1 = simultaneous_artin_lift(I[0], J[swap]);
      auto e2 = simultaneous_artin_lift(I[1], J[1 - swap]);
      if (!e1 || !e2) {
        reasons.push_back(std::string("principal series (") + (swap ? "swapped" : "direct") +
                          " matching): inertial characters have no common lift");
        continue;
      }
      const QmodZ target_q = swap ? -Rp : Rp;
      auto ratio = lift_frob(R, p, target_q, q, ell);
      if (!ratio) {
        reasons.push_back(std::string("principal series (") + (swap ? "swapped" : "direct") +
                          " matching): eigenvalue ratios " + describe_ratio(rho) + " and " + target_q.to_string() +
                          " mod " + std::to_string(q) + " have no common algebraic lift");
        continue;
      }
      FrobValue scalar;
      const QmodZ sp = reduce_frob(rho.frobenius[1], ell, p);
      const QmodZ sq = reduce_frob(rho_prime.frobenius[1 - swap], ell, q);
      if (auto s = lift_frob(sp, p, sq, q, ell)) scalar = *s;
      const Quasicharacter q1{*e1, FrobValue{ratio->zeta + scalar.zeta, ratio->weight + scalar.weight}};
      const Quasicharacter q2{*e2, scalar};
      v.alternatives.push_back(WDParam::reducible(ell, q1, q2, f));
    }
  }

  // Steinberg: both inertial characters equal on each side and eigenvalue
  // ratio ell^{+-f}.
  auto steinberg_ratio = [&](const LocalGaloisDatum& d) {
    const QmodZ t = teichmuller_value(ell, d.residue_char).times(f);
    return d.ratio() == t || d.ratio() == -t;
  };
  if (!(I[0] == I[1]) || !(J[0] == J[1])) {
    reasons.push_back("Steinberg: the two inertial characters differ");
  } else if (!steinberg_ratio(rho)) {
    reasons.push_back("Steinberg: eigenvalue ratio " + describe_ratio(rho) + " is not the reduction of ell^{+-" +
                      std::to_string(f) + "}");
  } else if (!steinberg_ratio(rho_prime)) {
    reasons.push_back("Steinberg: eigenvalue ratio " + describe_ratio(rho_prime) +
                      " is not the reduction of ell^{+-" + std::to_string(f) + "}");
  } else if (auto e = simultaneous_artin_lift(I[0], J[0]); !e) {
    reasons.push_back("Steinberg: inertial characters have no common lift");
  } else {
    FrobValue scalar;
    const QmodZ sp = reduce_frob(rho.frobenius[1], ell, p);
    const QmodZ sq = reduce_frob(rho_prime.frobenius[1], ell, q);
    if (auto s = lift_frob(sp, p, sq, q, ell)) scalar = *s;
    v.alternatives.push_back(WDParam::steinberg(ell, Quasicharacter{*e, scalar}, f));
  }

  if (!v.alternatives.empty()) {
    v.compatible = true;
    v.witness = v.alternatives.front();
    v.alternatives.erase(v.alternatives.begin());
    v.reason = std::string("compatible via ") + to_string(v.witness->shape);
  } else {
    for (std::size_t i = 0; i < reasons.size(); ++i) v.reason += (i ? "; " : "") + reasons[i];
  }
  return v;
}

Remark2Report remark2_check(std::int64_t ell, std::int64_t p, std::int64_t q) {
  for (auto [n, what] : {std::pair{ell, "ell"}, std::pair{p, "p"}, std::pair{q, "q"}}) {
    if (n == 2 || !is_prime(n)) throw InvalidInput(std::string(what) + " must be an odd prime");
  }
  if (ell == p || ell == q || p == q) throw InvalidInput("ell, p, q must be distinct");

  Remark2Report r;
  r.ell = ell;
  r.p = p;
  r.q = q;
  r.ell_mod_p = mod_floor(ell, p);
  r.ell_mod_q = mod_floor(ell, q);
  r.hypotheses_hold = r.ell_mod_p != 1 && r.ell_mod_p != p - 1 && r.ell_mod_q != 1 && r.ell_mod_q != q - 1;

  const FinAbGroup units = FinAbGroup::units_mod_prime_power(ell, 1);
  auto build = [&](int f) {
    const ModCharacter triv(GroupCharacter::trivial(units), p);
    auto rho = LocalGaloisDatum::unipotent_ramified(ell, p, triv, FrobValue{}, f);
    // Eigenvalue ratio -ell over Q_ell, (-ell)^2 = ell^2 after base change.
    const FrobValue ratio = f == 1 ? FrobValue{QmodZ(1, 2), 1} : FrobValue{QmodZ(), 2};
    auto rho_prime = LocalGaloisDatum::unramified(ell, q, ratio, f);
    return local_compat(rho, rho_prime);
  };
  const CompatVerdict base = build(1);
  r.rejected_over_base = !base.compatible;
  r.base_reason = base.reason;
  const CompatVerdict bc = build(2);
  r.compatible_after_base_change = bc.compatible;
  r.base_change_witness = bc.witness;
  r.passes = r.hypotheses_hold && r.rejected_over_base && r.compatible_after_base_change;
  return r;
}

}  // namespace pqlift
