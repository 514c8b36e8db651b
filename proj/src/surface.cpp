#include "hzeta/surface.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>

#include "hzeta/errors.hpp"

namespace hzeta {

namespace {

constexpr long kMaxCoefficient = 1L << 24;

std::string pair_str(const LinearForm& f) {
  return "(" + std::to_string(f.u) + "," + std::to_string(f.v) + ")";
}

void add_prime_divisors(long n, std::set<long>& out) {
  if (n == 0) return;
  for (long p : prime_divisors(Integer(n))) out.insert(p);
}

long mod(long x, long p) {
  long m = x % p;
  return m < 0 ? m + p : m;
}

}  // namespace

long det(const LinearForm& j, const LinearForm& k) { return j.u * k.v - k.u * j.v; }

bool SurfaceConfig::is_bad(long p) const {
  return std::binary_search(bad_primes.begin(), bad_primes.end(), p);
}

bool CharacterClass::in_bad_set(long p) const {
  return std::binary_search(bad_set.begin(), bad_set.end(), p);
}

SurfaceConfig validate_config(const std::vector<LinearForm>& forms, const std::string& name) {
  SurfaceConfig cfg;
  cfg.name = name;
  for (const LinearForm& f : forms) {
    if (std::labs(f.u) > kMaxCoefficient || std::labs(f.v) > kMaxCoefficient)
      throw ConfigError("form coefficient too large: " + pair_str(f));
    if (f.u == 0 && f.v == 0) throw ConfigError("zero form " + pair_str(f));
    if (std::gcd(f.u, f.v) != 1) throw ConfigError("non-coprime form " + pair_str(f));
    LinearForm g = f;
    if (g.u < 0 || (g.u == 0 && g.v < 0)) g = LinearForm{-g.u, -g.v};
    cfg.forms.push_back(g);
  }
  std::set<long> bad;
  for (size_t j = 0; j < cfg.forms.size(); ++j) {
    for (size_t k = j + 1; k < cfg.forms.size(); ++k) {
      long d = det(cfg.forms[j], cfg.forms[k]);
      if (d == 0)
        throw ConfigError("proportional forms " + pair_str(forms[j]) + " and " + pair_str(forms[k]));
      add_prime_divisors(d, bad);
    }
  }
  cfg.bad_primes.assign(bad.begin(), bad.end());
  return cfg;
}

CharacterClass classify_character(const SurfaceConfig& config, long a1, long a2) {
  CharacterClass cc;
  cc.a1 = a1;
  cc.a2 = a2;
  std::set<long> s(config.bad_primes.begin(), config.bad_primes.end());
  if (a1 == 0 && a2 == 0) {
    cc.kind = CharacterKind::trivial;
    cc.bad_set.assign(s.begin(), s.end());
    return cc;
  }
  LinearForm a{a1, a2};
  cc.kind = CharacterKind::generic;
  for (int k = 0; k < config.r(); ++k) {
    if (det(config.forms[k], a) == 0) {
      cc.kind = CharacterKind::special;
      cc.special_index = k + 1;
    }
  }
  for (int j = 0; j < config.r(); ++j) {
    if (cc.kind == CharacterKind::special && j + 1 == cc.special_index) continue;
    add_prime_divisors(det(config.forms[j], a), s);
  }
  add_prime_divisors(std::gcd(a1, a2), s);
  cc.bad_set.assign(s.begin(), s.end());
  return cc;
}

long count_points_mod_p(const SurfaceConfig& config, long p) {
  if (!is_prime(p)) throw PreconditionError("count_points_mod_p needs a prime, got " + std::to_string(p));
  if (config.is_bad(p))
    throw PreconditionError("prime " + std::to_string(p) + " is bad for configuration");
  long count = 0;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) ++count;

  // Points of P^1(F_p) on the line at infinity, as normalized (x1 : x2).
  std::vector<std::pair<long, long>> line;
  line.emplace_back(1, 0);
  for (long t = 0; t < p; ++t) line.emplace_back(t, 1);

  // Each blown-up point Z_k becomes D_k, a copy of P^1 (tangent directions at
  // Z_k). One of those directions is the line at infinity itself, which is
  // where the strict transform D_0 meets D_k; it is counted on D_k only.
  for (const auto& [x1, x2] : line) {
    bool blown_up = false;
    for (const LinearForm& f : config.forms)
      if (mod(f.eval(x1, x2), p) == 0) blown_up = true;
    if (!blown_up) ++count;
  }
  for (int k = 0; k < config.r(); ++k) {
    long directions = 0;
    for (size_t i = 0; i < line.size(); ++i) ++directions;
    count += directions;
  }
  return count;
}

std::string to_string(CharacterKind kind) {
  switch (kind) {
    case CharacterKind::trivial: return "trivial";
    case CharacterKind::special: return "special";
    case CharacterKind::generic: return "generic";
  }
  return "?";
}

}  // namespace hzeta
