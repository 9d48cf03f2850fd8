#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "pqlift/cli.hpp"
#include "pqlift/qseries.hpp"

#ifndef PQLIFT_VERSION
#define PQLIFT_VERSION "0.0.0"
#endif

namespace pqlift::cli {

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {
      "lift-q",        "lift-quadratic",  "artin-lift",       "necc-check",  "conductor-bound", "class-group",
      "counting-bound", "hasse-invariant", "weight24-example", "weight-crt", "local-compat",    "remark2-check"};
  return names;
}

namespace {

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json conventions() {
  return json{
      {"unit_generators", "smallest primitive root mod p^a; -1 mod 4; (-1, 5) mod 2^a for a >= 3"},
      {"mod_ell_characters", "identified with the complex representative of order prime to ell"},
      {"teichmuller", "the smallest primitive root g mod p has teich(g) = 1/(p-1); theta_p = teich mod p"},
      {"kappa", "split: v1 carries sigma, v2 carries sigma_bar, kappa = 0; inert: kappa(sigma) = 0, "
                "kappa(sigma_bar) = 1 unless swapped"},
      {"ideal_root", "(ell, sqrt(D) - r); p7 takes the smaller root r, p5 is the prime above 5 containing alpha"},
      {"frobenius_data", "zeta * ell^w, compared after reduction up to a common unramified twist"}};
}

json condition(std::string label, std::string place, bool holds, std::string detail, json values = json::object()) {
  return json{{"label", std::move(label)},
              {"place", std::move(place)},
              {"holds", holds},
              {"detail", std::move(detail)},
              {"values", std::move(values)}};
}

std::string cong(std::int64_t r, std::int64_t m) { return std::to_string(r) + " mod " + std::to_string(m); }

std::int64_t odd_prime(Fields& f, const std::string& key) {
  const std::int64_t v = f.integer(key);
  if (v == 2 || v < 2 || !is_prime(v)) throw InvalidInput(f.path(key) + ": expected an odd prime, got " + std::to_string(v));
  return v;
}

void distinct(std::int64_t p, std::int64_t q) {
  if (p == q) throw InvalidInput("p and q must be distinct");
}

std::size_t precision_of(Fields& f, const Options& o, std::size_t fallback) {
  auto from_file = f.optional_integer("precision");
  std::size_t prec = fallback;
  if (from_file) {
    if (*from_file < 1 || *from_file > 100000) throw InvalidInput(f.path("precision") + ": out of range");
    prec = static_cast<std::size_t>(*from_file);
  }
  if (o.precision) prec = *o.precision;
  if (prec < 1 || prec > 100000) throw InvalidInput("precision out of range");
  return prec;
}

json char_components(const DirichletCharacter& chi) {
  json out = json::array();
  for (const auto& [ell, c] : chi.components()) out.push_back(to_json(c));
  return out;
}

// ---------------------------------------------------------------------------

struct Ctx {
  const json& problem;
  const Options& options;
  json report;
  int exit_code = kPass;
};

void set_verdict(Ctx& c, const std::string& verdict, bool ok) {
  c.report["verdict"] = verdict;
  c.exit_code = ok ? kPass : kFail;
}

void cmd_lift_q(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t p = odd_prime(f, "p");
  const std::int64_t q = odd_prime(f, "q");
  distinct(p, q);
  const GlobalCharQ rho(parse_dirichlet(f.object("rho"), f.path("rho")), p);
  const GlobalCharQ rho_prime(parse_dirichlet(f.object("rho_prime"), f.path("rho_prime")), q);
  f.finish();

  const LiftQResult res = lift_q(rho, rho_prime);
  json conds = json::array();
  json result{{"p", p}, {"q", q}};
  json nec = json::array();
  for (const auto& pc : res.necessary.primes) {
    const std::string place = "ell=" + std::to_string(pc.prime);
    std::string detail = "rho/rho' has order " + std::to_string(pc.quotient_order) + " on I_" +
                         std::to_string(pc.prime) + (pc.passes ? ", a divisor of a power of pq" : ", not a power of pq");
    conds.push_back(condition("necessary condition", place, pc.passes, detail,
                              {{"quotient_order", pc.quotient_order}}));
    nec.push_back({{"prime", pc.prime}, {"passes", pc.passes}, {"quotient_order", pc.quotient_order}});
  }
  result["necessary"] = {{"passes", res.necessary.passes}, {"primes", nec}};
  if (auto bad = res.necessary.first_failure()) result["necessary"]["first_failure"] = *bad;

  if (res.invariants) {
    const auto& inv = *res.invariants;
    result["twist"] = char_components(res.twist->eps);
    result["conductor_bound"] = *res.bound;
    result["invariants"] = {{"k_p", to_json(inv.k_p)},     {"a_p", to_json(inv.a_p)},
                            {"A_p", inv.A_p},               {"psi_prime_p", to_json(inv.psi_prime_p)},
                            {"k_q", to_json(inv.k_q)},     {"b_q", to_json(inv.b_q)},
                            {"B_q", inv.B_q},               {"psi_q", to_json(inv.psi_q)}};
    const std::int64_t c1 = mod_floor(inv.k_p.residue - inv.a_p.residue, inv.A_p);
    const std::int64_t c2 = mod_floor(inv.k_q.residue - inv.b_q.residue, inv.B_q);
    conds.push_back(condition("k congruence", "p=" + std::to_string(p), true,
                              "k ≡ k_p - a_p = " + std::to_string(inv.k_p.residue) + " - " +
                                  std::to_string(inv.a_p.residue) + " ≡ " + cong(c1, inv.A_p),
                              {{"residue", c1}, {"modulus", inv.A_p}}));
    conds.push_back(condition("k congruence", "q=" + std::to_string(q), true,
                              "k ≡ k_q - b_q = " + std::to_string(inv.k_q.residue) + " - " +
                                  std::to_string(inv.b_q.residue) + " ≡ " + cong(c2, inv.B_q),
                              {{"residue", c2}, {"modulus", inv.B_q}}));
    const std::int64_t g = std::gcd(inv.A_p, inv.B_q);
    std::string detail;
    if (res.solution) {
      detail = cong(c1, inv.A_p) + " and " + cong(c2, inv.B_q) + " give k ≡ " + res.solution->k_class.to_string();
    } else {
      detail = "congruence insoluble mod " + std::to_string(g) + ": " + cong(mod_floor(c1, g), g) + " vs " +
               cong(mod_floor(c2, g), g);
    }
    conds.push_back(condition("weight CRT", "", res.solution.has_value(), detail, {{"gcd", g}}));
  }

  if (res.solution) {
    result["k_class"] = to_json(res.solution->k_class);
    result["k"] = res.solution->k;
    c.report["certificate"] = to_json(res.solution->certificate);
  }
  c.report["conditions"] = conds;
  c.report["result"] = result;
  set_verdict(c, res.solution ? "liftable" : "not_liftable", res.solution.has_value());

  if (c.options.oracle) {
    json oracle{{"applicable", res.twist.has_value()}};
    if (res.twist) {
      const auto& r0 = res.twist->rho0;
      const auto& r1 = res.twist->rho_prime0;
      const int alpha = std::max({1, r0.character().level(p), r1.character().level(p)});
      const int beta = std::max({1, r0.character().level(q), r1.character().level(q)});
      const std::int64_t k_hi = std::lcm(p - 1, q - 1) - 1;
      auto w = brute_force_oracle_q(r0, r1, alpha, beta, 0, k_hi);
      oracle["alpha_max"] = alpha;
      oracle["beta_max"] = beta;
      oracle["k_range"] = json::array({0, k_hi});
      oracle["found"] = w.has_value();
      bool agrees = w.has_value() == res.solution.has_value();
      if (w && res.solution) agrees = res.solution->k_class.contains(w->k);
      if (w) oracle["witness_k"] = w->k;
      oracle["agrees"] = agrees;
      if (!agrees) {
        c.report["oracle"] = oracle;
        throw InternalError("brute-force oracle disagrees with the decision procedure");
      }
    }
    c.report["oracle"] = oracle;
  }
}

void cmd_necc_check(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t p = odd_prime(f, "p");
  const std::int64_t q = odd_prime(f, "q");
  distinct(p, q);
  const GlobalCharQ rho(parse_dirichlet(f.object("rho"), f.path("rho")), p);
  const GlobalCharQ rho_prime(parse_dirichlet(f.object("rho_prime"), f.path("rho_prime")), q);
  f.finish();
  const NecessaryReport nec = check_necessary(rho, rho_prime);
  json conds = json::array();
  json primes = json::array();
  for (const auto& pc : nec.primes) {
    conds.push_back(condition("necessary condition", "ell=" + std::to_string(pc.prime), pc.passes,
                              "rho/rho' has order " + std::to_string(pc.quotient_order) + " on I_" +
                                  std::to_string(pc.prime),
                              {{"quotient_order", pc.quotient_order}}));
    json entry{{"prime", pc.prime}, {"passes", pc.passes}, {"quotient_order", pc.quotient_order}};
    if (pc.lift) entry["lift"] = to_json(*pc.lift);
    primes.push_back(entry);
  }
  c.report["conditions"] = conds;
  c.report["result"] = {{"p", p}, {"q", q}, {"primes", primes}};
  if (auto bad = nec.first_failure()) c.report["result"]["first_failure"] = *bad;
  set_verdict(c, nec.passes ? "pass" : "fail", nec.passes);
}

void cmd_conductor_bound(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t p = odd_prime(f, "p");
  const std::int64_t q = odd_prime(f, "q");
  distinct(p, q);
  const GlobalCharQ rho(parse_dirichlet(f.object("rho"), f.path("rho")), p);
  const GlobalCharQ rho_prime(parse_dirichlet(f.object("rho_prime"), f.path("rho_prime")), q);
  f.finish();
  const std::int64_t bound = conductor_bound(rho, rho_prime);
  const std::int64_t cp = character_conductor(rho_prime.character().component(p));
  const std::int64_t cq = character_conductor(rho.character().component(q));
  c.report["conditions"] = json::array(
      {condition("conductor bound", "", true,
                 "lcm(" + std::to_string(p) + ", " + std::to_string(cp) + ") * lcm(" + std::to_string(q) + ", " +
                     std::to_string(cq) + ") = " + std::to_string(bound),
                 {{"bound", bound}})});
  c.report["result"] = {{"p", p}, {"q", q}, {"bound", bound}, {"cond_rho_prime_at_p", cp}, {"cond_rho_at_q", cq}};
  set_verdict(c, "pass", true);
}

void cmd_artin_lift(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t p = f.integer("p");
  const std::int64_t q = f.integer("q");
  for (auto ell : {p, q}) {
    if (ell < 2 || !is_prime(ell)) throw InvalidInput("p and q must be primes");
  }
  distinct(p, q);
  const FinAbGroup group = parse_group(f.object("group"), f.path("group"));
  const ModCharacter tau(GroupCharacter(group, parse_images(f.array("tau"), f.path("tau"))), p);
  const ModCharacter tau_prime(GroupCharacter(group, parse_images(f.array("tau_prime"), f.path("tau_prime"))), q);
  f.finish();
  const auto lift = simultaneous_artin_lift(tau, tau_prime);
  const std::int64_t order = (tau.base() / tau_prime.base()).order();
  c.report["conditions"] = json::array(
      {condition("simultaneous lift", "", lift.has_value(),
                 "tau/tau' has order " + std::to_string(order) +
                     (lift ? ", a divisor of a power of pq" : ", not a power of pq"),
                 {{"quotient_order", order}})});
  c.report["result"] = {{"p", p}, {"q", q}, {"group", group.describe()}, {"quotient_order", order}};
  if (lift) c.report["certificate"] = {{"lift", to_json(*lift)}};
  set_verdict(c, lift ? "liftable" : "not_liftable", lift.has_value());

  if (c.options.oracle) {
    std::int64_t matches = 0;
    std::optional<GroupCharacter> found;
    CharacterEnumerator(group).for_each([&](const GroupCharacter& eps) {
      if (reduce_mod(eps, p) == tau && reduce_mod(eps, q) == tau_prime) {
        ++matches;
        found = eps;
      }
    });
    const bool agrees = matches == (lift ? 1 : 0) && (!lift || *found == *lift);
    c.report["oracle"] = {{"applicable", true}, {"matches", matches}, {"agrees", agrees}};
    if (!agrees) throw InternalError("exhaustive enumeration disagrees with simultaneous_artin_lift");
  }
}

void cmd_lift_quadratic(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const ImagQuadField K(f.integer("D"));
  const std::int64_t p = odd_prime(f, "p");
  const std::int64_t q = odd_prime(f, "q");
  distinct(p, q);
  Fields inf(f.object("infinity_type"), f.path("infinity_type"));
  const InfinityType type{inf.integer("n_sigma"), inf.integer("n_sigma_bar")};
  inf.finish();
  CriterionOptions opts;
  opts.swap_kappa_p = f.boolean("swap_kappa_p", false);
  opts.swap_kappa_q = f.boolean("swap_kappa_q", false);

  auto read_places = [&](const std::string& key, std::int64_t ell, std::int64_t other, bool swap) {
    const PlaceData pd = place_data(K, ell, other, swap);
    const json& arr = f.array(key);
    std::vector<PlaceLocal> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = f.path(key) + "[" + std::to_string(i) + "]";
      Fields pf(arr[i], path);
      PlaceLocal pl;
      pl.k = pf.integer("k");
      pl.a = pf.integer("a");
      const int degree = i < pd.places.size() ? pd.places[i].residue_degree : 1;
      if (auto psi = pf.optional_object("psi")) {
        Fields sf(*psi, path + ".psi");
        const std::int64_t level = sf.integer("level");
        if (level < 1 || level > 20) throw InvalidInput(path + ".psi.level: out of range");
        auto images = parse_images(sf.array("images"), path + ".psi.images");
        sf.finish();
        pl.psi = GroupCharacter(wild_unit_group(ell, degree, static_cast<int>(level)), std::move(images));
      } else {
        pl.psi = GroupCharacter::trivial(FinAbGroup());
      }
      pf.finish();
      out.push_back(std::move(pl));
    }
    return out;
  };
  QuadLocalData local;
  local.at_p = read_places("at_p", p, q, opts.swap_kappa_p);
  local.at_q = read_places("at_q", q, p, opts.swap_kappa_q);
  f.finish();

  const CriterionResult res = criterion_decide(K, p, q, local, type, opts);
  json conds = json::array();
  for (const auto& cc : res.conditions) {
    if (cc.condition == "(2)") {
      conds.push_back(condition(
          cc.condition, cc.place, cc.holds,
          "sum (k - xi)/2 = " + cc.unit_lhs.to_string() + " vs (n_sigma + n_sigma_bar)/2 = " + cc.unit_rhs.to_string() +
              " in Q/Z",
          {{"lhs", to_json(cc.unit_lhs)}, {"rhs", to_json(cc.unit_rhs)}}));
    } else {
      const std::string letter = cc.condition == "(1)" ? "a" : "b";
      conds.push_back(condition(cc.condition, cc.place, cc.holds,
                                std::to_string(cc.k) + " - " + std::to_string(cc.a) + " ≡ " + std::to_string(cc.xi) +
                                    " mod " + std::to_string(cc.modulus),
                                {{"k", cc.k}, {letter, cc.a}, {"xi", cc.xi}, {"modulus", cc.modulus}}));
    }
  }
  auto places_json = [&](const PlaceData& pd) {
    json out = json::array();
    const auto xi = xi_values(pd, type);
    for (std::size_t i = 0; i < pd.places.size(); ++i) {
      const auto& v = pd.places[i];
      json kappa = json::array();
      for (const auto& e : v.kappa) kappa.push_back({{"embedding", to_string(e.embedding)}, {"kappa", e.exponent}});
      out.push_back({{"label", v.label},
                     {"prime", v.prime},
                     {"residue_degree", v.residue_degree},
                     {"residue_field_size", v.residue_field_size},
                     {"coprime_order", v.coprime_order},
                     {"kappa", kappa},
                     {"xi", xi[i]}});
    }
    return json{{"prime", pd.prime}, {"splitting", to_string(pd.splitting)}, {"places", out}};
  };
  c.report["conditions"] = conds;
  c.report["result"] = {{"D", K.discriminant()},
                        {"p", p},
                        {"q", q},
                        {"infinity_type", {{"n_sigma", type.n_sigma}, {"n_sigma_bar", type.n_sigma_bar}}},
                        {"places_p", places_json(res.places_p)},
                        {"places_q", places_json(res.places_q)}};
  if (res.certificate) c.report["certificate"] = to_json(*res.certificate);
  set_verdict(c, res.holds ? "liftable" : "not_liftable", res.holds);
}

void cmd_class_group(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t D = f.integer("D");
  f.finish();
  const IdealClassGroup G = class_group(D);
  json result{{"D", D},
              {"class_number", G.class_number},
              {"exponent", G.exponent},
              {"invariant_factors", G.invariant_factors}};
  if (c.options.verbose || G.class_number <= 64) {
    json forms = json::array();
    for (std::size_t i = 0; i < G.forms.size(); ++i) {
      const auto& fm = G.forms[i];
      forms.push_back({{"a", fm.a}, {"b", fm.b}, {"c", fm.c}, {"order", G.element_orders[i]}});
    }
    result["forms"] = forms;
  }
  std::string inv;
  for (auto d : G.invariant_factors) inv += (inv.empty() ? "" : ", ") + std::to_string(d);
  c.report["conditions"] = json::array({condition(
      "class group", "", true,
      "h = " + std::to_string(G.class_number) + ", invariant factors (" + inv + "), exponent " +
          std::to_string(G.exponent),
      {{"class_number", G.class_number}, {"exponent", G.exponent}})});
  c.report["result"] = result;
  set_verdict(c, "pass", true);

  if (c.options.oracle) {
    // Genus theory: the 2-torsion has order 2^(t-1), t = number of primes dividing D.
    const auto t = static_cast<int>(factorize(-D).size());
    std::int64_t two_torsion = 0;
    for (auto o : G.element_orders) two_torsion += o <= 2 ? 1 : 0;
    const bool agrees = two_torsion == ipow(2, t - 1);
    c.report["oracle"] = {{"applicable", true}, {"two_torsion", two_torsion}, {"genus_count", ipow(2, t - 1)},
                          {"agrees", agrees}};
    if (!agrees) throw InternalError("2-torsion of the class group disagrees with genus theory");
  }
}

void cmd_counting_bound(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const ImagQuadField K(f.integer("D"));
  const std::int64_t p = odd_prime(f, "p");
  const std::int64_t q = odd_prime(f, "q");
  distinct(p, q);
  f.finish();
  const CountingReport r = counting_bound(K, p, q);
  const std::string rel = r.non_liftable_pair_exists ? " < " : " >= ";
  const std::string detail =
      "α²h = " + std::to_string(r.liftable_bound) + rel + "h² = " + std::to_string(r.pair_count) +
      (r.non_liftable_pair_exists ? " ⇒ non-liftable pair exists" : " ⇒ no forced gap");
  c.report["conditions"] = json::array({condition("counting bound", "", true, detail,
                                                  {{"alpha", r.exponent}, {"h", r.class_number}})});
  c.report["result"] = {{"D", r.discriminant},
                        {"p", p},
                        {"q", q},
                        {"alpha", r.exponent},
                        {"h", r.class_number},
                        {"liftable_bound", r.liftable_bound},
                        {"pair_count", r.pair_count},
                        {"invariant_factors", r.invariant_factors},
                        {"non_liftable_pair_exists", r.non_liftable_pair_exists}};
  c.report["verdict"] = r.non_liftable_pair_exists ? "non_liftable_pair_exists" : "no_forced_gap";
  c.exit_code = kPass;
}

void cmd_hasse(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t p = odd_prime(f, "p");
  const std::int64_t q = odd_prime(f, "q");
  distinct(p, q);
  const std::size_t prec = precision_of(f, c.options, kDefaultPrecision);
  auto weight = f.optional_integer("weight");
  f.finish();
  if (weight && (*weight < 2 || *weight > 10000)) throw InvalidInput("problem.weight: out of range");
  const HasseReport r =
      hasse_invariant_check(p, q, prec, weight ? std::optional<int>(static_cast<int>(*weight)) : std::nullopt);
  std::string detail = "E_" + std::to_string(r.weight) + " - 1 ≡ 0 mod " + std::to_string(p * q) +
                       " through q^" + std::to_string(prec - 1) + " (q^1 coefficient " + to_string(r.factor) + ")";
  if (r.first_offending) {
    detail = "E_" + std::to_string(r.weight) + ": coefficient of q^" + std::to_string(*r.first_offending) +
             " is not ≡ 0 mod " + std::to_string(p * q) + " (q^1 coefficient " + to_string(r.factor) + ")";
  }
  c.report["conditions"] = json::array({condition("Hasse invariant", "", r.passes, detail)});
  c.report["result"] = {{"p", p}, {"q", q}, {"weight", r.weight}, {"factor", to_string(r.factor)},
                        {"precision", prec}};
  if (r.first_offending) c.report["result"]["first_offending"] = *r.first_offending;
  set_verdict(c, r.passes ? "pass" : "fail", r.passes);
}

json verdict_json(const CongruenceVerdict& v) {
  json out{{"holds", v.holds},
           {"bound", v.bound},
           {"sturm_bound", v.sturm_bound},
           {"residues_lhs", v.residues_lhs},
           {"residues_rhs", v.residues_rhs}};
  if (v.first_mismatch) out["first_mismatch"] = *v.first_mismatch;
  return out;
}

void cmd_weight24(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::size_t prec = precision_of(f, c.options, kDefaultPrecision);
  f.finish();
  const Weight24Report r = weight24_example(prec);
  json conds = json::array();
  json congruences = json::array();
  for (const auto& line : r.congruences) {
    const std::string place = line.ideal_lhs == line.ideal_rhs ? line.ideal_lhs : line.ideal_lhs + "/" + line.ideal_rhs;
    std::string detail = line.lhs + " ≡ " + line.rhs + " mod " + place + " (" + std::to_string(line.verdict.bound) +
                         " coefficients, Sturm bound " + std::to_string(line.verdict.sturm_bound) + ")";
    if (line.verdict.first_mismatch) detail += ", first mismatch at q^" + std::to_string(*line.verdict.first_mismatch);
    conds.push_back(condition("congruence", place, line.verdict.holds, detail));
    congruences.push_back({{"lhs", line.lhs},
                           {"rhs", line.rhs},
                           {"ideal_lhs", line.ideal_lhs},
                           {"ideal_rhs", line.ideal_rhs},
                           {"verdict", verdict_json(line.verdict)}});
  }
  const std::string norm = r.alpha_norm.get_str();
  conds.push_back(condition("alpha alpha' divisible by 5", "", r.norm_divisible_by_5,
                            "alpha alpha' = " + norm, {{"norm", norm}}));
  conds.push_back(condition("Q ≡ 1 mod 5", "", r.q_congruent_1_mod_5, "E_4 ≡ 1 mod 5 coefficientwise"));
  c.report["conditions"] = conds;
  auto ideal = [](const SplitPrimeIdeal& I) { return json{{"ell", I.ell()}, {"root", I.root()}, {"ideal", I.to_string()}}; };
  c.report["result"] = {
      {"D", r.D},
      {"precision", r.precision},
      {"alpha", r.alpha.to_string()},
      {"alpha_prime", r.alpha_prime.to_string()},
      {"alpha_norm", norm},
      {"norm_divisible_by_7", r.norm_divisible_by_7},
      {"ideals", {{"p5", ideal(r.p5)}, {"p5_prime", ideal(r.p5_prime)}, {"p7", ideal(r.p7)}, {"p7_prime", ideal(r.p7_prime)}}},
      {"congruences", congruences},
      {"literal_same_ideal_control",
       {{"lhs", "f"}, {"rhs", "f'"}, {"ideal", "p5"}, {"verdict", verdict_json(r.literal_control.verdict)}}}};
  set_verdict(c, r.all_pass ? "pass" : "fail", r.all_pass);
}

void cmd_weight_crt(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t p = odd_prime(f, "p");
  const std::int64_t q = odd_prime(f, "q");
  distinct(p, q);
  const Congruence a(f.integer("k_rho"), p - 1);
  const Congruence b(f.integer("k_rho_prime"), q - 1);
  f.finish();
  const auto sol = weight_crt(a, b);
  const std::int64_t g = std::gcd(p - 1, q - 1);
  std::string detail = "k ≡ " + a.to_string() + " and k ≡ " + b.to_string();
  detail += sol ? " give k ≡ " + sol->k_class.to_string() + ", least k >= 2 is " + std::to_string(sol->k)
                : ": insoluble mod " + std::to_string(g);
  c.report["conditions"] = json::array({condition("weight CRT", "", sol.has_value(), detail, {{"gcd", g}})});
  c.report["result"] = {{"p", p}, {"q", q}, {"k_rho", to_json(a)}, {"k_rho_prime", to_json(b)}};
  if (sol) {
    c.report["result"]["k_class"] = to_json(sol->k_class);
    c.report["result"]["k"] = sol->k;
  }
  set_verdict(c, sol ? "pass" : "fail", sol.has_value());
}

void cmd_local_compat(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t ell = f.integer("ell");
  const std::int64_t p = f.integer("p");
  const std::int64_t q = f.integer("q");
  for (auto n : {ell, p, q}) {
    if (n < 2 || !is_prime(n)) throw InvalidInput("ell, p, q must be primes");
  }
  if (ell == p || ell == q) throw InvalidInput("ell must not divide pq");
  distinct(p, q);
  const std::int64_t degree = f.optional_integer("residue_degree").value_or(1);
  if (degree < 1 || degree > 12) throw InvalidInput("problem.residue_degree: out of range");
  const auto rho = parse_datum(f.object("rho"), ell, p, static_cast<int>(degree), f.path("rho"));
  const auto rho_prime = parse_datum(f.object("rho_prime"), ell, q, static_cast<int>(degree), f.path("rho_prime"));
  f.finish();
  const CompatVerdict v = local_compat(rho, rho_prime);
  c.report["conditions"] = json::array({condition("local compatibility", "ell=" + std::to_string(ell), v.compatible,
                                                  v.reason)});
  json alts = json::array();
  for (const auto& a : v.alternatives) alts.push_back(to_json(a));
  c.report["result"] = {{"ell", ell},
                        {"p", p},
                        {"q", q},
                        {"residue_degree", degree},
                        {"rho", {{"kind", to_string(rho.kind)}, {"ratio", to_json(rho.ratio())}}},
                        {"rho_prime", {{"kind", to_string(rho_prime.kind)}, {"ratio", to_json(rho_prime.ratio())}}},
                        {"reason", v.reason},
                        {"steinberg_prime", v.witness && v.witness->shape == WDParam::Shape::Steinberg}};
  if (c.options.verbose) c.report["result"]["alternatives"] = alts;
  if (v.witness) c.report["certificate"] = {{"witness", to_json(*v.witness)}};
  set_verdict(c, v.compatible ? "compatible" : "incompatible", v.compatible);
}

void cmd_remark2(Ctx& c) {
  Fields f(c.problem, "problem");
  f.integer("version");
  const std::int64_t ell = f.integer("ell");
  const std::int64_t p = f.integer("p");
  const std::int64_t q = f.integer("q");
  f.finish();
  const Remark2Report r = remark2_check(ell, p, q);
  auto pm1 = [](std::int64_t x, std::int64_t m) { return x != 1 && x != m - 1; };
  json conds = json::array();
  conds.push_back(condition("ell not ±1 mod p", "p=" + std::to_string(p), pm1(r.ell_mod_p, p),
                            std::to_string(ell) + " ≡ " + std::to_string(r.ell_mod_p) + " mod " + std::to_string(p)));
  conds.push_back(condition("ell not ±1 mod q", "q=" + std::to_string(q), pm1(r.ell_mod_q, q),
                            std::to_string(ell) + " ≡ " + std::to_string(r.ell_mod_q) + " mod " + std::to_string(q)));
  conds.push_back(condition("ratio -ell rejected", "ell=" + std::to_string(ell), r.rejected_over_base, r.base_reason));
  conds.push_back(condition("compatible after unramified quadratic base change", "ell=" + std::to_string(ell),
                            r.compatible_after_base_change, "ratio (-ell)^2 = ell^2 with unipotent inertia"));
  c.report["conditions"] = conds;
  c.report["result"] = {{"ell", ell},
                        {"p", p},
                        {"q", q},
                        {"ell_mod_p", r.ell_mod_p},
                        {"ell_mod_q", r.ell_mod_q},
                        {"hypotheses_hold", r.hypotheses_hold},
                        {"rejected_over_base", r.rejected_over_base},
                        {"compatible_after_base_change", r.compatible_after_base_change}};
  if (r.base_change_witness) c.report["result"]["base_change_witness"] = to_json(*r.base_change_witness);
  set_verdict(c, r.passes ? "pass" : "fail", r.passes);
}

using Handler = void (*)(Ctx&);

Handler handler_for(const std::string& command) {
  static const std::map<std::string, Handler> table = {
      {"lift-q", cmd_lift_q},           {"lift-quadratic", cmd_lift_quadratic}, {"artin-lift", cmd_artin_lift},
      {"necc-check", cmd_necc_check},   {"conductor-bound", cmd_conductor_bound}, {"class-group", cmd_class_group},
      {"counting-bound", cmd_counting_bound}, {"hasse-invariant", cmd_hasse}, {"weight24-example", cmd_weight24},
      {"weight-crt", cmd_weight_crt},   {"local-compat", cmd_local_compat},   {"remark2-check", cmd_remark2}};
  auto it = table.find(command);
  return it == table.end() ? nullptr : it->second;
}

json provenance(const std::string& command, const json& problem, const Options& options) {
  std::string canonical = command + "\n" + problem.dump();
  if (options.precision) canonical += "\nprecision=" + std::to_string(*options.precision);
  return json{{"tool", "pqlift"},
              {"version", PQLIFT_VERSION},
              {"input_hash", "fnv1a64:" + hex64(fnv1a64(canonical))},
              {"conventions", conventions()}};
}

}  // namespace

Outcome execute(const std::string& command, const json& problem, const Options& options) {
  Ctx c{problem, options, json::object()};
  c.report["command"] = command;
  c.report["conditions"] = json::array();
  c.report["provenance"] = provenance(command, problem, options);
  auto fail = [&](int code, const char* kind, const std::string& message) {
    c.report["verdict"] = "error";
    c.report["error"] = {{"kind", kind}, {"message", message}};
    c.report.erase("certificate");
    c.exit_code = code;
  };
  try {
    Handler h = handler_for(command);
    if (!h) throw InvalidInput("unknown command '" + command + "'");
    h(c);
    if (c.exit_code == kFail && c.report.contains("certificate")) {
      throw InternalError("a failing verdict carries a certificate");
    }
  } catch (const InvalidInput& e) {
    fail(kInvalidInput, "invalid_input", e.what());
  } catch (const InternalError& e) {
    fail(kInternalError, "internal_error", e.what());
  } catch (const std::exception& e) {
    fail(kInternalError, "internal_error", e.what());
  }
  c.report["exit_code"] = c.exit_code;
  return Outcome{c.exit_code, std::move(c.report)};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"pqlift: simultaneous lifting of mod p and mod q characters to Hecke characters", "pqlift"};
  app.set_version_flag("--version", PQLIFT_VERSION);
  std::string command;
  std::string path;
  Options options;
  std::size_t precision = 0;
  app.add_option("command", command, "one of: lift-q, lift-quadratic, artin-lift, necc-check, conductor-bound, "
                                     "class-group, counting-bound, hasse-invariant, weight24-example, weight-crt, "
                                     "local-compat, remark2-check")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("problem", path, "problem JSON file ('-' reads standard input)");
  app.add_flag("--json", options.json, "emit the JSON report");
  app.add_flag("--verbose", options.verbose, "include secondary data");
  auto* prec_opt = app.add_option("--precision", precision, "number of q-expansion coefficients")
                       ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
  app.add_flag("--oracle", options.oracle, "cross-check against brute force where defined");

  const bool wants_json = std::find(args.begin(), args.end(), "--json") != args.end();
  auto emit_error = [&](int code, const std::string& kind, const std::string& message) {
    if (wants_json) {
      json r{{"command", command},
             {"verdict", "error"},
             {"conditions", json::array()},
             {"error", {{"kind", kind}, {"message", message}}},
             {"exit_code", code},
             {"provenance", provenance(command, json::object(), options)}};
      out << r.dump(2) << "\n";
    } else {
      err << "error: " << message << "\n";
    }
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForVersion&) {
    out << PQLIFT_VERSION << "\n";
    return kPass;
  } catch (const CLI::ParseError& e) {
    return emit_error(kInvalidInput, "invalid_input", e.what());
  }
  if (prec_opt->count() > 0) options.precision = precision;

  json problem;
  try {
    if (path.empty()) {
      if (command != "weight24-example") throw InvalidInput("a problem file is required for " + command);
      problem = json{{"version", kProblemVersion}};
    } else {
      std::string text;
      if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
      } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InvalidInput("cannot read problem file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
      }
      problem = parse_problem_text(text);
    }
  } catch (const InvalidInput& e) {
    return emit_error(kInvalidInput, "invalid_input", e.what());
  }

  Outcome o = execute(command, problem, options);
  if (options.json) {
    out << o.report.dump(2) << "\n";
  } else {
    out << explain(o.report, options.verbose);
    if (o.report.contains("error")) err << "error: " << o.report["error"]["message"].get<std::string>() << "\n";
  }
  return o.exit_code;
}

}  // namespace pqlift::cli
