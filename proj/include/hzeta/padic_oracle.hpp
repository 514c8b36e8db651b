#pragma once

// Brute-force evaluation of the local p-adic integrals by residue-ring
// summation. Independent of the closed forms; used to check them and to
// supply factors at bad primes.

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <vector>

#include "hzeta/fourier.hpp"
#include "hzeta/heights.hpp"
#include "hzeta/surface.hpp"

namespace hzeta {

/// Cells of Q_p^2 on which every local height is constant (good p).
struct Cell {
  enum class Kind { U0, Uk_ab, Uk_a, U_a };
  Kind kind = Kind::U0;
  int k = 0;      // form index (1-based) for Uk_ab / Uk_a
  int alpha = 0;
  int beta = 0;   // 1 <= beta < alpha for Uk_ab

  static Cell u0() { return {Kind::U0, 0, 0, 0}; }
  static Cell uk_ab(int k, int alpha, int beta) { return {Kind::Uk_ab, k, alpha, beta}; }
  static Cell uk_a(int k, int alpha) { return {Kind::Uk_a, k, alpha, 0}; }
  static Cell u_a(int alpha) { return {Kind::U_a, 0, alpha, 0}; }
};

/// sum_m c_m zeta^m with zeta = exp(2 pi i / p^alpha); integer coefficients.
class CyclotomicSum {
 public:
  CyclotomicSum() = default;
  CyclotomicSum(long p, int alpha);

  long modulus() const { return modulus_; }
  void add(long exponent, const Integer& weight);
  CyclotomicSum& operator+=(const CyclotomicSum& o);

  /// Coordinates in the basis zeta^0 .. zeta^{phi(N)-1} (exact reduction by the
  /// cyclotomic polynomial).
  std::vector<Integer> canonical() const;
  /// The value when it is a rational integer.
  std::optional<Integer> as_integer() const;
  bool is_zero() const;
  std::complex<long double> to_complex() const;
  /// sum |c_m|, an upper bound for the modulus of the value.
  long double abs_weight() const;
  const std::map<long, Integer>& coefficients() const { return coeffs_; }

 private:
  long p_ = 1;
  int alpha_ = 0;
  long modulus_ = 1;
  std::map<long, Integer> coeffs_;
};

/// Closed cell volumes (good p).
Rational cell_volume(const SurfaceConfig& config, long p, const Cell& cell);
/// Closed values of the character integral over a cell for trivial, generic or
/// special characters; p must lie outside S(a).
Rational cell_character_integral(const SurfaceConfig& config, long p, const Cell& cell, long a1, long a2);

/// Number of residues u mod p^alpha (u primitive) lying in the cell; equals the
/// Haar volume of the cell.
Rational cell_volume_enumerated(const SurfaceConfig& config, long p, const Cell& cell);
/// sum over those residues of zeta^{<a,u>}, i.e. the exact character integral.
CyclotomicSum cell_character_sum_enumerated(const SurfaceConfig& config, long p, const Cell& cell, long a1,
                                            long a2);

/// Character mass of one shell ||x||_p = p^alpha on which the local height
/// exponents min(alpha, v_p(l_k(u))) equal m.
struct OracleTerm {
  int alpha = 0;
  std::vector<int> m;
  CyclotomicSum mass;
  std::complex<long double> mass_value;
};

/// Everything the oracle needs that does not depend on s.
struct OracleMasses {
  long p = 0;
  int alpha_max = 0;
  long a1 = 0, a2 = 0;       // reduced mod p^alpha_max
  std::vector<OracleTerm> terms;
  long nodes = 0;            // residue classes visited
  bool integral = true;      // every mass is a rational integer (trivial residue character)
};

/// Residue classes visited before TruncationTooDeep is thrown.
constexpr long kOracleNodeGuard = 1L << 27;

OracleMasses oracle_masses(const SurfaceConfig& config, long p, long a1, long a2, int alpha_max);

struct OracleResult {
  std::complex<double> value;
  int alpha_max = 0;
  double tail_bound = 0;
  std::optional<Rational> exact;  // truncated integral, exact, for integral s and trivial residue character

  LocalFactor as_factor(long p) const;
};

/// Rigorous bound on the contribution of the shells alpha > alpha_max.
double oracle_tail_bound(const SurfaceConfig& config, long p, const PicardVector& s, int alpha_max);

/// Smallest alpha_max whose tail bound is <= target, limited by the work guard.
int default_alpha_max(const SurfaceConfig& config, long p, const PicardVector& s, double target = 1e-7);

OracleResult evaluate_oracle(const OracleMasses& masses, const SurfaceConfig& config, const PicardVector& s);

/// Integral of H_p(s;x)^{-1} psi_a(x) over ||x||_p <= p^alpha_max plus tail bound.
/// alpha_max <= 0 selects default_alpha_max.
OracleResult local_ft_oracle(const SurfaceConfig& config, long p, const PicardVector& s, long a1, long a2,
                             int alpha_max = 0);

/// Thread-safe memo of oracle masses keyed by (p, alpha_max, a mod p^alpha_max).
class OracleCache {
 public:
  explicit OracleCache(SurfaceConfig config) : config_(std::move(config)) {}
  std::shared_ptr<const OracleMasses> masses(long p, long a1, long a2, int alpha_max);
  OracleResult evaluate(long p, const PicardVector& s, long a1, long a2, int alpha_max = 0);
  const SurfaceConfig& config() const { return config_; }

 private:
  SurfaceConfig config_;
  std::mutex mu_;
  std::map<std::tuple<long, int, long, long>, std::shared_ptr<const OracleMasses>> memo_;
};

}  // namespace hzeta
