#include <algorithm>

#include "pqlift/cli.hpp"

namespace pqlift::cli {

Fields::Fields(const json& value, std::string path) : value_(value), path_(std::move(path)) {
  if (!value_.is_object()) throw InvalidInput(path_ + ": expected an object");
}

const json& Fields::get(const std::string& key) {
  seen_.insert(key);
  auto it = value_.find(key);
  if (it == value_.end()) throw InvalidInput(path(key) + ": required field missing");
  return *it;
}

std::int64_t Fields::integer(const std::string& key) {
  const json& v = get(key);
  if (!v.is_number_integer()) throw InvalidInput(path(key) + ": expected an integer");
  return v.get<std::int64_t>();
}

std::optional<std::int64_t> Fields::optional_integer(const std::string& key) {
  seen_.insert(key);
  if (!value_.contains(key)) return std::nullopt;
  return integer(key);
}

bool Fields::boolean(const std::string& key, bool fallback) {
  seen_.insert(key);
  if (!value_.contains(key)) return fallback;
  const json& v = value_.at(key);
  if (!v.is_boolean()) throw InvalidInput(path(key) + ": expected a boolean");
  return v.get<bool>();
}

std::string Fields::string(const std::string& key) {
  const json& v = get(key);
  if (!v.is_string()) throw InvalidInput(path(key) + ": expected a string");
  return v.get<std::string>();
}

const json& Fields::object(const std::string& key) {
  const json& v = get(key);
  if (!v.is_object()) throw InvalidInput(path(key) + ": expected an object");
  return v;
}

std::optional<json> Fields::optional_object(const std::string& key) {
  seen_.insert(key);
  if (!value_.contains(key)) return std::nullopt;
  return object(key);
}

const json& Fields::array(const std::string& key) {
  const json& v = get(key);
  if (!v.is_array()) throw InvalidInput(path(key) + ": expected an array");
  return v;
}

void Fields::finish() const {
  for (const auto& [key, unused] : value_.items()) {
    if (!seen_.count(key)) throw InvalidInput(path(key) + ": unknown field");
  }
}

json parse_problem_text(std::string_view text) {
  json problem;
  try {
    problem = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  if (!problem.is_object()) throw InvalidInput("problem: expected a JSON object");
  auto v = problem.find("version");
  if (v == problem.end()) throw InvalidInput("problem.version: required field missing");
  if (!v->is_number_integer() || v->get<std::int64_t>() != kProblemVersion) {
    throw InvalidInput("problem.version: unsupported version (expected " + std::to_string(kProblemVersion) + ")");
  }
  return problem;
}

std::vector<QmodZ> parse_images(const json& images, const std::string& path) {
  if (!images.is_array()) throw InvalidInput(path + ": expected an array of \"num/den\" strings");
  std::vector<QmodZ> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const json& s = images[i];
    if (!s.is_string()) throw InvalidInput(path + "[" + std::to_string(i) + "]: expected a \"num/den\" string");
    try {
      out.push_back(QmodZ::parse(s.get<std::string>()));
    } catch (const InvalidInput& e) {
      throw InvalidInput(path + "[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

namespace {

GroupCharacter read_unit_character(Fields& f, std::int64_t prime, const std::string& path) {
  const std::int64_t exponent = f.integer("exponent");
  if (exponent < 0 || exponent > 40) throw InvalidInput(f.path("exponent") + ": out of range");
  auto images = parse_images(f.array("images"), f.path("images"));
  f.finish();
  try {
    return GroupCharacter(FinAbGroup::units_mod_prime_power(prime, static_cast<int>(exponent)), std::move(images));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace

GroupCharacter parse_unit_character(const json& value, std::int64_t prime, const std::string& path) {
  Fields f(value, path);
  return read_unit_character(f, prime, path);
}

DirichletCharacter parse_dirichlet(const json& value, const std::string& path) {
  Fields f(value, path);
  const json& comps = f.array("components");
  f.finish();
  std::vector<GroupCharacter> out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string cpath = path + ".components[" + std::to_string(i) + "]";
    Fields c(comps[i], cpath);
    const std::int64_t prime = c.integer("prime");
    if (prime < 2 || !is_prime(prime)) throw InvalidInput(c.path("prime") + ": not a prime");
    out.push_back(read_unit_character(c, prime, cpath));
  }
  try {
    return DirichletCharacter(std::move(out));
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

FinAbGroup parse_group(const json& value, const std::string& path) {
  Fields f(value, path);
  std::optional<json> factors;
  if (value.contains("factors")) factors = f.array("factors");
  auto prime = f.optional_integer("prime");
  auto exponent = f.optional_integer("exponent");
  f.finish();
  if (factors && (prime || exponent)) throw InvalidInput(path + ": give either factors or prime/exponent");
  if (factors) {
    std::vector<std::int64_t> d;
    for (const auto& x : *factors) {
      if (!x.is_number_integer()) throw InvalidInput(path + ".factors: expected integers");
      d.push_back(x.get<std::int64_t>());
    }
    return FinAbGroup(std::move(d));
  }
  if (!prime || !exponent) throw InvalidInput(path + ": expected factors or prime and exponent");
  if (*prime < 2 || !is_prime(*prime)) throw InvalidInput(path + ".prime: not a prime");
  if (*exponent < 0 || *exponent > 40) throw InvalidInput(path + ".exponent: out of range");
  return FinAbGroup::units_mod_prime_power(*prime, static_cast<int>(*exponent));
}

namespace {

FrobValue parse_frob(const json& value, const std::string& path) {
  Fields f(value, path);
  FrobValue v;
  v.zeta = QmodZ::parse(f.string("zeta"));
  v.weight = f.integer("weight");
  f.finish();
  return v;
}

}  // namespace

LocalGaloisDatum parse_datum(const json& value, std::int64_t ell, std::int64_t residue_char, int residue_degree,
                             const std::string& path) {
  Fields f(value, path);
  const std::string kind = f.string("kind");
  LocalGaloisDatum d;
  if (kind == "unramified") {
    d = LocalGaloisDatum::unramified(ell, residue_char, parse_frob(f.object("ratio"), f.path("ratio")),
                                     residue_degree);
  } else if (kind == "principal") {
    const json& inertia = f.array("inertia");
    const json& frob = f.array("frobenius");
    if (inertia.size() != 2 || frob.size() != 2) throw InvalidInput(path + ": principal data needs two entries each");
    auto i1 = parse_unit_character(inertia[0], ell, f.path("inertia") + "[0]");
    auto i2 = parse_unit_character(inertia[1], ell, f.path("inertia") + "[1]");
    d = LocalGaloisDatum::tame_principal(ell, residue_char, ModCharacter(i1, residue_char),
                                         ModCharacter(i2, residue_char),
                                         parse_frob(frob[0], f.path("frobenius") + "[0]"),
                                         parse_frob(frob[1], f.path("frobenius") + "[1]"), residue_degree);
  } else if (kind == "unipotent") {
    auto i = parse_unit_character(f.object("inertia"), ell, f.path("inertia"));
    d = LocalGaloisDatum::unipotent_ramified(ell, residue_char, ModCharacter(i, residue_char),
                                             parse_frob(f.object("frobenius"), f.path("frobenius")),
                                             residue_degree);
  } else if (kind == "supercuspidal") {
    throw InvalidInput(path + ": supercuspidal data is out of implemented scope");
  } else {
    throw InvalidInput(f.path("kind") + ": expected unramified, principal or unipotent");
  }
  f.finish();
  return d;
}

// ---------------------------------------------------------------------------
// JSON encodings

json to_json(const QmodZ& x) { return x.to_string(); }

json to_json(const Congruence& c) { return json{{"residue", c.residue}, {"modulus", c.modulus}}; }

json to_json(const GroupCharacter& c) {
  json images = json::array();
  for (const auto& x : c.images()) images.push_back(to_json(x));
  json out{{"order", c.order()}, {"images", images}};
  if (const auto& label = c.group().unit_label()) {
    out["prime"] = label->prime;
    out["exponent"] = label->exponent;
    if (label->exponent > 0) out["conductor"] = character_conductor(c);
  } else {
    out["factors"] = c.group().invariant_factors();
  }
  return out;
}

json to_json(const HeckeCertificate& c) {
  json inf = json::array();
  for (const auto& e : c.infinity_type) inf.push_back({{"embedding", e.embedding}, {"exponent", e.exponent}});
  json locals = json::array();
  for (const auto& [ell, chr] : c.local_chars) locals.push_back(to_json(chr));
  return json{{"infinity_type", inf}, {"local_chars", locals}, {"conductor", c.conductor}};
}

json to_json(const QuadCertificate& c) {
  json inf = json::array({json{{"embedding", "sigma"}, {"exponent", c.infinity_type.n_sigma}},
                          json{{"embedding", "sigma_bar"}, {"exponent", c.infinity_type.n_sigma_bar}}});
  json locals = json::array();
  for (const auto& f : c.local_chars) {
    json psi = to_json(f.psi);
    locals.push_back({{"place", f.place},
                      {"prime", f.prime},
                      {"residue_field_size", f.residue_field_size},
                      {"tame_exponent", f.tame_exponent},
                      {"wild", psi},
                      {"conductor_exponent", f.conductor_exponent}});
  }
  return json{{"infinity_type", inf}, {"local_chars", locals}, {"conductor", c.conductor_norm}};
}

namespace {

json frob_json(const FrobValue& v) { return json{{"zeta", to_json(v.zeta)}, {"weight", v.weight}}; }

}  // namespace

json to_json(const WDParam& p) {
  json out{{"shape", to_string(p.shape)}, {"ell", p.ell}, {"residue_degree", p.residue_degree}};
  json chars = json::array();
  chars.push_back({{"inertial", to_json(p.eps1.inertial)}, {"frobenius", frob_json(p.eps1.frobenius)}});
  if (p.shape == WDParam::Shape::Reducible) {
    chars.push_back({{"inertial", to_json(p.eps2.inertial)}, {"frobenius", frob_json(p.eps2.frobenius)}});
  }
  out["characters"] = chars;
  out["monodromy"] = p.shape == WDParam::Shape::Steinberg;
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace pqlift::cli
