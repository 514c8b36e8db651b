#pragma once

// Blow-up configuration: r linear forms at infinity, bad primes, character
// classification and the F_p point count.

#include <string>
#include <vector>

#include "hzeta/arith.hpp"

namespace hzeta {

/// l(x) = u*x1 + v*x2 with gcd(u, v) = 1.
struct LinearForm {
  long u = 0;
  long v = 0;

  long eval(long x1, long x2) const { return u * x1 + v * x2; }
  Integer eval(const Integer& x1, const Integer& x2) const { return u * x1 + v * x2; }
  bool operator==(const LinearForm& o) const { return u == o.u && v == o.v; }
};

/// u_j v_k - u_k v_j.
long det(const LinearForm& j, const LinearForm& k);

struct SurfaceConfig {
  std::string name;
  std::vector<LinearForm> forms;
  std::vector<long> bad_primes;  // ascending

  int r() const { return static_cast<int>(forms.size()); }
  int picard_rank() const { return r() + 1; }
  bool is_bad(long p) const;
};

/// Normalizes (gcd 1 is required, sign made lexicographically positive) and
/// checks pairwise non-proportionality. r = 0 is the plain projective plane.
SurfaceConfig validate_config(const std::vector<LinearForm>& forms, const std::string& name = "");

enum class CharacterKind { trivial, special, generic };

struct CharacterClass {
  long a1 = 0;
  long a2 = 0;
  CharacterKind kind = CharacterKind::trivial;
  int special_index = 0;        // 1-based form index when kind == special
  std::vector<long> bad_set;    // S(a), ascending

  bool in_bad_set(long p) const;
};

CharacterClass classify_character(const SurfaceConfig& config, long a1, long a2);

/// #X(F_p) by direct enumeration of the affine part, the strict transform of
/// the line at infinity and the exceptional curves. p must be a good prime.
long count_points_mod_p(const SurfaceConfig& config, long p);

std::string to_string(CharacterKind kind);

}  // namespace hzeta
