#include "pqlift/abchar.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pqlift {

namespace {

std::int64_t strip(std::int64_t n, std::int64_t ell) {
  while (n % ell == 0) n /= ell;
  return n;
}

// Brute-force discrete logarithm of x to base g modulo m, exponent < order.
std::int64_t cyclic_log(std::int64_t x, std::int64_t g, std::int64_t m, std::int64_t order) {
  x = mod_floor(x, m);
  std::int64_t acc = 1 % m;
  for (std::int64_t e = 0; e < order; ++e) {
    if (acc == x) return e;
    acc = mul_mod(acc, g, m);
  }
  throw InvalidInput("element " + std::to_string(x) + " is not in the unit group mod " + std::to_string(m));
}

void integer_partitions(int n, int max_part, std::vector<int>& current,
                        std::vector<std::vector<int>>& out) {
  if (n == 0) {
    out.push_back(current);
    return;
  }
  for (int part = std::min(n, max_part); part >= 1; --part) {
    current.push_back(part);
    integer_partitions(n - part, part, current, out);
    current.pop_back();
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// FinAbGroup

FinAbGroup::FinAbGroup(std::vector<std::int64_t> invariant_factors, std::vector<std::string> labels)
    : factors_(std::move(invariant_factors)), labels_(std::move(labels)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 2) throw InvalidInput("invariant factors must be >= 2");
    if (i > 0 && factors_[i] % factors_[i - 1] != 0) {
      throw InvalidInput("invariant factors must form a divisibility chain");
    }
  }
  if (!labels_.empty() && labels_.size() != factors_.size()) {
    throw InvalidInput("one label per generator expected");
  }
}

FinAbGroup FinAbGroup::units_mod_prime_power(std::int64_t ell, int exponent) {
  if (!is_prime(ell)) throw InvalidInput("unit group: " + std::to_string(ell) + " is not prime");
  if (exponent < 0) throw InvalidInput("unit group: negative exponent");
  FinAbGroup g;
  const std::int64_t m = ipow(ell, exponent);
  const std::string at = " at " + std::to_string(ell);
  if (ell == 2) {
    if (exponent == 2) {
      g.factors_ = {2};
      g.generators_ = {3};
      g.labels_ = {"sign" + at};
    } else if (exponent >= 3) {
      g.factors_ = {2, ipow(2, exponent - 2)};
      g.generators_ = {m - 1, 5};
      g.labels_ = {"sign" + at, "wild" + at};
    }
  } else if (exponent >= 1) {
    g.factors_ = {euler_phi(m)};
    g.generators_ = {smallest_primitive_root(m)};
    g.labels_ = {"cyclic" + at};
  }
  g.unit_label_ = UnitGroupLabel{ell, exponent};
  return g;
}

std::int64_t FinAbGroup::order() const {
  std::int64_t n = 1;
  for (auto d : factors_) n *= d;
  return n;
}

std::int64_t FinAbGroup::exponent() const { return factors_.empty() ? 1 : factors_.back(); }

const std::vector<std::int64_t>& FinAbGroup::generators() const {
  if (!unit_label_) throw InvalidInput("generators: group carries no unit-group label");
  return generators_;
}

std::vector<std::int64_t> FinAbGroup::coordinates(std::int64_t x) const {
  if (!unit_label_) throw InvalidInput("coordinates: group carries no unit-group label");
  const auto [ell, a] = *unit_label_;
  const std::int64_t m = unit_label_->modulus();
  x = mod_floor(x, m);
  if (m > 1 && std::gcd(x, m) != 1) {
    throw InvalidInput(std::to_string(x) + " is not a unit mod " + std::to_string(m));
  }
  if (factors_.empty()) return {};
  if (ell == 2) {
    const bool negative = (x % 4 == 3);
    if (a == 2) return {negative ? 1 : 0};
    const std::int64_t y = negative ? m - x : x;
    return {negative ? 1 : 0, cyclic_log(y, 5, m, factors_[1])};
  }
  return {cyclic_log(x, generators_[0], m, factors_[0])};
}

std::string FinAbGroup::describe() const {
  std::ostringstream os;
  if (unit_label_) {
    os << "(Z/" << unit_label_->modulus() << ")^*";
    return os.str();
  }
  if (factors_.empty()) return "1";
  for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? " x " : "") << "Z/" << factors_[i];
  return os.str();
}

std::vector<FinAbGroup> abelian_groups_of_order(std::int64_t order) {
  if (order < 1) throw InvalidInput("group order must be positive");
  std::vector<std::vector<std::int64_t>> chains = {{}};
  for (auto [prime, e] : factorize(order)) {
    std::vector<std::vector<int>> parts;
    std::vector<int> scratch;
    integer_partitions(e, e, scratch, parts);
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& chain : chains) {
      for (const auto& part : parts) {
        // Align the largest parts with the largest factors (chain is ascending).
        std::size_t len = std::max(chain.size(), part.size());
        std::vector<std::int64_t> merged(len, 1);
        for (std::size_t i = 0; i < chain.size(); ++i) merged[len - chain.size() + i] = chain[i];
        for (std::size_t i = 0; i < part.size(); ++i) merged[len - 1 - i] *= ipow(prime, part[i]);
        next.push_back(std::move(merged));
      }
    }
    chains = std::move(next);
  }
  std::vector<FinAbGroup> out;
  out.reserve(chains.size());
  for (auto& chain : chains) out.emplace_back(std::move(chain));
  return out;
}

// ---------------------------------------------------------------------------
// GroupCharacter

GroupCharacter::GroupCharacter(FinAbGroup group, std::vector<QmodZ> images)
    : group_(std::move(group)), images_(std::move(images)) {
  if (images_.size() != group_.rank()) {
    throw InvalidInput("character needs one image per generator of " + group_.describe());
  }
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (group_.invariant_factors()[i] % images_[i].order() != 0) {
      throw InvalidInput("image " + images_[i].to_string() + " is not killed by " +
                         std::to_string(group_.invariant_factors()[i]));
    }
  }
}

GroupCharacter GroupCharacter::trivial(FinAbGroup group) {
  std::vector<QmodZ> images(group.rank());
  return GroupCharacter(std::move(group), std::move(images));
}

std::int64_t GroupCharacter::order() const {
  std::int64_t n = 1;
  for (const auto& v : images_) n = std::lcm(n, v.order());
  return n;
}

bool GroupCharacter::is_trivial() const {
  return std::all_of(images_.begin(), images_.end(), [](const QmodZ& v) { return v.is_zero(); });
}

GroupCharacter GroupCharacter::operator*(const GroupCharacter& other) const {
  if (!(group_ == other.group_)) throw InvalidInput("character product over different groups");
  GroupCharacter out = *this;
  for (std::size_t i = 0; i < images_.size(); ++i) out.images_[i] += other.images_[i];
  return out;
}

GroupCharacter GroupCharacter::inverse() const { return pow(-1); }

GroupCharacter GroupCharacter::pow(std::int64_t e) const {
  GroupCharacter out = *this;
  for (auto& v : out.images_) v = v.times(e);
  return out;
}

QmodZ GroupCharacter::evaluate(const std::vector<std::int64_t>& coordinates) const {
  if (coordinates.size() != images_.size()) throw InvalidInput("coordinate vector has wrong length");
  QmodZ acc;
  for (std::size_t i = 0; i < images_.size(); ++i) acc += images_[i].times(coordinates[i]);
  return acc;
}

QmodZ GroupCharacter::evaluate_unit(std::int64_t x) const { return evaluate(group_.coordinates(x)); }

std::string GroupCharacter::to_string() const {
  std::ostringstream os;
  os << group_.describe() << " [";
  for (std::size_t i = 0; i < images_.size(); ++i) os << (i ? ", " : "") << images_[i].to_string();
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// ModCharacter and reduction

ModCharacter::ModCharacter(GroupCharacter base, std::int64_t residue_char)
    : base_(std::move(base)), residue_char_(residue_char) {
  if (!is_prime(residue_char_)) {
    throw InvalidInput("residue characteristic " + std::to_string(residue_char_) + " is not prime");
  }
  if (base_.order() % residue_char_ == 0) {
    throw InvalidInput("mod-" + std::to_string(residue_char_) + " character must have order prime to " +
                       std::to_string(residue_char_) + ", got order " + std::to_string(base_.order()));
  }
}

ModCharacter reduce_mod(const GroupCharacter& eps, std::int64_t ell) {
  std::vector<QmodZ> images;
  images.reserve(eps.images().size());
  for (const auto& v : eps.images()) images.push_back(prime_to_component(v, ell));
  return ModCharacter(GroupCharacter(eps.group(), std::move(images)), ell);
}

std::optional<QmodZ> simultaneous_value_lift(const QmodZ& mod_p_value, std::int64_t p,
                                             const QmodZ& mod_q_value, std::int64_t q) {
  if (mod_p_value.order() % p == 0 || mod_q_value.order() % q == 0) {
    throw InvalidInput("value lift: inputs must be prime to their residue characteristics");
  }
  const QmodZ diff = mod_p_value - mod_q_value;
  if (strip(strip(diff.order(), p), q) != 1) return std::nullopt;
  return mod_p_value - prime_power_component(diff, p);
}

std::optional<GroupCharacter> simultaneous_artin_lift(const ModCharacter& tau,
                                                      const ModCharacter& tau_prime) {
  if (!(tau.group() == tau_prime.group())) {
    throw InvalidInput("simultaneous_artin_lift: characters live on different groups (" +
                       tau.group().describe() + " vs " + tau_prime.group().describe() + ")");
  }
  const std::int64_t p = tau.residue_char();
  const std::int64_t q = tau_prime.residue_char();
  if (p == q) throw InvalidInput("simultaneous_artin_lift: residue characteristics must differ");
  std::vector<QmodZ> images;
  images.reserve(tau.group().rank());
  for (std::size_t i = 0; i < tau.group().rank(); ++i) {
    auto v = simultaneous_value_lift(tau.base().images()[i], p, tau_prime.base().images()[i], q);
    if (!v) return std::nullopt;
    images.push_back(*v);
  }
  return GroupCharacter(tau.group(), std::move(images));
}

GroupCharacter bezout_combine(const GroupCharacter& eps_p_power, const GroupCharacter& eps_q_power,
                              std::int64_t p, int alpha, std::int64_t q, int beta) {
  if (!(eps_p_power.group() == eps_q_power.group())) {
    throw InvalidInput("bezout_combine: characters live on different groups");
  }
  if (alpha < 0 || beta < 0 || alpha > 40 || beta > 40) throw InvalidInput("bezout_combine: exponent out of range");
  const std::int64_t pa = ipow(p, alpha);
  const std::int64_t qb = ipow(q, beta);
  const auto [g, a, b] = extended_gcd(pa, qb);
  if (g != 1) {
    throw InvalidInput("bezout_combine: gcd(" + std::to_string(pa) + ", " + std::to_string(qb) + ") != 1");
  }
  return eps_p_power.pow(a) * eps_q_power.pow(b);
}

// ---------------------------------------------------------------------------
// Unit-group specifics

int conductor_exponent(const GroupCharacter& eps) {
  const auto& label = eps.group().unit_label();
  if (!label) throw InvalidInput("character_conductor: group carries no unit-group label");
  const auto [ell, a] = *label;
  const std::int64_t m = label->modulus();
  for (int c = 0; c < a; ++c) {
    std::vector<std::int64_t> kernel_gens;
    if (c == 0 || (ell == 2 && c == 1)) {
      kernel_gens = eps.group().generators();
    } else {
      kernel_gens = {mod_floor(1 + ipow(ell, c), m)};
    }
    bool trivial = std::all_of(kernel_gens.begin(), kernel_gens.end(),
                               [&](std::int64_t x) { return eps.evaluate_unit(x).is_zero(); });
    if (trivial) return c;
  }
  return a;
}

std::int64_t character_conductor(const GroupCharacter& eps) {
  return ipow(eps.group().unit_label()->prime, conductor_exponent(eps));
}

GroupCharacter inflate(const GroupCharacter& eps, int new_exponent) {
  const auto& label = eps.group().unit_label();
  if (!label) throw InvalidInput("inflate: group carries no unit-group label");
  if (new_exponent < label->exponent) throw InvalidInput("inflate: cannot lower the level");
  if (new_exponent == label->exponent) return eps;
  FinAbGroup target = FinAbGroup::units_mod_prime_power(label->prime, new_exponent);
  std::vector<QmodZ> images;
  for (auto g : target.generators()) images.push_back(eps.evaluate_unit(mod_floor(g, label->modulus())));
  return GroupCharacter(std::move(target), std::move(images));
}

bool same_unit_character(const GroupCharacter& a, const GroupCharacter& b) {
  const auto& la = a.group().unit_label();
  const auto& lb = b.group().unit_label();
  if (!la || !lb) throw InvalidInput("same_unit_character: unit-group labels required");
  if (la->prime != lb->prime) throw InvalidInput("same_unit_character: different primes");
  const int level = std::max(la->exponent, lb->exponent);
  return inflate(a, level) == inflate(b, level);
}

// ---------------------------------------------------------------------------
// Enumeration

CharacterEnumerator::CharacterEnumerator(FinAbGroup group, std::int64_t bound) : group_(std::move(group)) {
  for (auto d : group_.invariant_factors()) {
    size_ *= d;
    if (size_ > bound) {
      throw InvalidInput("character enumeration of " + group_.describe() + " exceeds bound " +
                         std::to_string(bound));
    }
  }
}

GroupCharacter CharacterEnumerator::at(std::int64_t index) const {
  const auto& d = group_.invariant_factors();
  std::vector<QmodZ> images(d.size());
  for (std::size_t i = d.size(); i-- > 0;) {
    images[i] = QmodZ(index % d[i], d[i]);
    index /= d[i];
  }
  return GroupCharacter(group_, std::move(images));
}

void CharacterEnumerator::for_each(const std::function<void(const GroupCharacter&)>& visit) const {
  for (std::int64_t i = 0; i < size_; ++i) visit(at(i));
}

std::vector<GroupCharacter> enumerate_characters(const FinAbGroup& group, std::int64_t bound) {
  CharacterEnumerator it(group, bound);
  std::vector<GroupCharacter> out;
  out.reserve(static_cast<std::size_t>(it.size()));
  it.for_each([&](const GroupCharacter& c) { out.push_back(c); });
  return out;
}

}  // namespace pqlift
