#pragma once

// Closed-form local Fourier transforms of the inverse height at good primes,
// the archimedean transform of P^n at the trivial character, and Euler
// product assembly with rigorous tail bounds.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hzeta/heights.hpp"
#include "hzeta/surface.hpp"

namespace hzeta {

enum class FactorMethod { closed, oracle, quadrature };

struct LocalFactor {
  std::complex<double> value;
  double tail_bound = 0;
  FactorMethod method = FactorMethod::closed;
  long place = 0;                 // prime, or 0 for the real place
  std::optional<Rational> exact;  // set when the value is an exact rational
};

struct EulerProductValue {
  std::complex<double> value;
  long truncation_prime = 0;
  double truncation_error_bound = 0;
  std::vector<long> oracle_primes;  // primes whose factor came from the oracle
};

/// Re s_0 > 2 and Re s_k > 1 for every k.
bool convergence_domain(const SurfaceConfig& config, const PicardVector& s);

/// Trivial character at a good prime.
LocalFactor local_ft_trivial(const SurfaceConfig& config, long p, const PicardVector& s);
/// Generic character, p outside S(a).
LocalFactor local_ft_generic(const SurfaceConfig& config, long p, const PicardVector& s);
/// Character special for form k (1-based), p outside S(a).
LocalFactor local_ft_special(const SurfaceConfig& config, long p, const PicardVector& s, int k);

/// Closed form chosen by the character class; p must lie outside S(a).
LocalFactor local_ft_closed(const SurfaceConfig& config, long p, const PicardVector& s, const CharacterClass& a);

enum class PnCharacter { trivial, nontrivial_good };

/// P^n local factors: (1-p^{-s})/(1-p^{-(s-n)}) and 1-p^{-s}.
LocalFactor pn_local_ft(int n, long p, std::complex<double> s, PnCharacter kind);
/// Exact rational version for integer s.
Rational pn_local_ft_exact(int n, long p, long s, PnCharacter kind);

/// pi^{n/2} Gamma((s-n)/2) / Gamma(s/2).
LocalFactor pn_arch_ft_trivial(int n, std::complex<double> s);

/// Supplies factors at primes in S(a) (normally the residue oracle).
using BadFactorSource = std::function<LocalFactor(long p)>;

/// prod_{p <= p_max} of local factors (closed form off S(a), bad_factor_source
/// on S(a); bad primes above p_max are included too). The error bound covers
/// the omitted good primes and the tail bounds of the supplied bad factors.
EulerProductValue euler_product(const SurfaceConfig& config, const PicardVector& s, const CharacterClass& a,
                                long p_max, const BadFactorSource& bad_factor_source);

/// Same with the factors off S(a) taken from good_factor_source (for callers
/// that memoize closed forms across many characters of one kind).
EulerProductValue euler_product(const SurfaceConfig& config, const PicardVector& s, const CharacterClass& a,
                                long p_max, const BadFactorSource& bad_factor_source,
                                const BadFactorSource& good_factor_source);

/// Majorant |factor - 1| <= C p^{-gamma} valid for good primes p >= p0.
struct FactorMajorant {
  double C = 0;
  double gamma = 0;
  long p0 = 2;
};
FactorMajorant factor_majorant(const SurfaceConfig& config, const PicardVector& s, CharacterKind kind,
                               int special_index);

/// Rigorous bound on sum_{p > P} C p^{-gamma} by comparison with an integral.
double majorant_tail_sum(const FactorMajorant& m, long P);

std::string to_string(FactorMethod m);

}  // namespace hzeta
