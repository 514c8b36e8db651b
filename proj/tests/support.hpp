#pragma once

// Shared generators and independent reference computations for the test
// binaries. Nothing here calls the library routine it is used to check.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hzeta/arith.hpp"
#include "hzeta/heights.hpp"
#include "hzeta/surface.hpp"

namespace hzeta::testing {

constexpr std::uint64_t kSeed = 0x5eed2024;
constexpr int kPropertyCases = 10000;

class Gen {
 public:
  explicit Gen(std::uint64_t seed = kSeed) : rng_(seed) {}

  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  long nonzero(long bound) {
    long v = range(1, bound);
    return coin() ? v : -v;
  }
  bool coin() { return range(0, 1) == 1; }

  /// Mostly small numbers with occasional wide ones, so both the machine-word
  /// and the big-integer paths get exercised.
  Integer integer(long bound = 1000) {
    if (range(0, 9) == 0) {
      Integer big = range(1, 1L << 40);
      big *= range(1, 1L << 40);
      return coin() ? big : Integer(-big);
    }
    return Integer(range(-bound, bound));
  }
  Rational rational(long bound = 1000) {
    Integer den = 0;
    while (den == 0) den = integer(bound);
    Rational q(integer(bound), den);
    q.canonicalize();
    return q;
  }
  Rational nonzero_rational(long bound = 1000) {
    Rational q = 0;
    while (q == 0) q = rational(bound);
    return q;
  }
  long prime(long bound = 50) {
    for (;;) {
      long p = range(2, bound);
      bool ok = true;
      for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) ok = false;
      if (ok) return p;
    }
  }

  /// Primitive triple with c >= 1; c is often a product of small primes so
  /// the finite places do something.
  PrimitiveTriple triple(long bound = 1000) {
    for (;;) {
      Integer c = 1;
      const long n = range(0, 4);
      for (long i = 0; i < n; ++i) c *= std::vector<long>{2, 3, 5, 7, 11, 13}[range(0, 5)];
      if (coin()) c *= range(1, bound);
      Integer a = integer(bound), b = integer(bound);
      Integer g;
      mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
      if (g == 1) return PrimitiveTriple{a, b, c};
    }
  }

  /// 0..4 pairwise non-proportional primitive forms.
  SurfaceConfig config(int max_r = 4, long coeff = 5) {
    for (;;) {
      const int r = static_cast<int>(range(0, max_r));
      std::vector<LinearForm> forms;
      for (int k = 0; k < r; ++k) forms.push_back({range(-coeff, coeff), range(-coeff, coeff)});
      try {
        return validate_config(forms, "random");
      } catch (const std::exception&) {
      }
    }
  }

  /// Nonzero rational whose numerator and denominator factor over primes
  /// below 2000, with exponents up to 12; cheap to factor yet often wide.
  Rational smooth_rational() {
    auto side = [&] {
      Integer n = 1;
      const long terms = range(0, 6);
      for (long i = 0; i < terms; ++i) {
        const long p = prime(2000);
        n *= ipow(Integer(p), static_cast<unsigned long>(range(1, 12)));
      }
      return n;
    };
    Rational q(side(), side());
    q.canonicalize();
    return coin() ? q : Rational(-q);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline SurfaceConfig config_r(int r) {
  static const std::vector<LinearForm> forms{{1, 0}, {0, 1}, {1, 1}};
  return validate_config(std::vector<LinearForm>(forms.begin(), forms.begin() + r), "r" + std::to_string(r));
}

/// Real Picard vector (s_0, s_k, ..., s_k).
inline PicardVector uniform_s(int r, long s0, long sk) {
  std::vector<Rational> re{Rational(s0)};
  for (int k = 0; k < r; ++k) re.emplace_back(sk);
  return PicardVector(re);
}

// ---- reference computations straight from the definitions ----

/// |q|_p for q != 0, as a rational.
inline Rational ref_abs_p(const Rational& q, long p) {
  Rational out = 1;
  Integer n = q.get_num(), d = q.get_den();
  while (n % p == 0) n /= p, out /= p;
  while (d % p == 0) d /= p, out *= p;
  return out;
}

inline Rational ref_max_norm_p(const std::vector<Rational>& xs, long p) {
  Rational m = 1;  // the affine coordinate 1
  for (const auto& x : xs)
    if (x != 0 && ref_abs_p(x, p) > m) m = ref_abs_p(x, p);
  return m;
}

/// Finite local height of D_k at x in Q^2: ||x||_p / max(1, |l_k(x)|_p).
inline Rational ref_local_height_p(const LinearForm& f, const Rational& x1, const Rational& x2, long p) {
  const Rational l = f.u * x1 + f.v * x2;
  return ref_max_norm_p({x1, x2}, p) / ref_max_norm_p({l}, p);
}

/// Square of the archimedean local height of D_k: (1+|x|^2)/(1+l_k(x)^2).
inline Rational ref_local_height_arch_sq(const LinearForm& f, const Rational& x1, const Rational& x2) {
  const Rational l = f.u * x1 + f.v * x2;
  return (1 + x1 * x1 + x2 * x2) / (1 + l * l);
}

/// Primes dividing a nonzero integer, by trial division.
inline std::vector<long> ref_primes_of(Integer n) {
  if (n < 0) n = -n;
  std::vector<long> out;
  for (long p = 2; Integer(p) * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n.get_si());
  return out;
}

/// Square of the global height of D_k assembled over all places.
inline Rational ref_global_height_sq(const LinearForm& f, const PrimitiveTriple& x) {
  const Rational x1(x.a, x.c), x2(x.b, x.c);
  Rational h = ref_local_height_arch_sq(f, x1, x2);
  for (long p : ref_primes_of(x.c)) {
    Rational v = ref_local_height_p(f, x1, x2, p);
    h *= v * v;
  }
  h.canonicalize();
  return h;
}

/// #X(F_p) from a count of P^2(F_p): the r blown-up points are each replaced
/// by a projective line.
inline long ref_points_mod_p(int r, long p) {
  long n = 0;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y)
      for (long z = 0; z < p; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        // first nonzero coordinate equal to 1 picks one representative per line
        const long lead = x != 0 ? x : (y != 0 ? y : z);
        if (lead == 1) ++n;
      }
  return n - r + r * (p + 1);
}

/// q^e for integer e.
inline Rational ref_pow(const Rational& q, long e) {
  Rational out = 1;
  for (long i = 0; i < std::labs(e); ++i) out *= q;
  return e < 0 ? Rational(1 / out) : out;
}

}  // namespace hzeta::testing
