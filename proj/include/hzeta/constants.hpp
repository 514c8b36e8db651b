#pragma once

// Leading constants of the counting function, the P^n baseline, fits of
// count series, and the Poisson cross-check of the height zeta function.

#include <complex>
#include <string>
#include <vector>

#include "hzeta/counting.hpp"
#include "hzeta/fourier.hpp"
#include "hzeta/heights.hpp"
#include "hzeta/surface.hpp"

namespace hzeta {

struct Estimate {
  double value = 0;
  double abs_error = 0;
};

/// tau_inf = integral over R^2 of (1+|x|^2)^{(r-3)/2} prod_k (1+l_k(x)^2)^{-1/2}.
/// The error is the quadrature estimate plus the disagreement of two
/// independent rules; NumericalError when it exceeds 1e-6 relative.
Estimate arch_density(const SurfaceConfig& config);

/// (1 - 1/p)^{r+1} d_p with d_p = #X(F_p)/p^2, exact, for a good prime.
Rational tamagawa_factor(const SurfaceConfig& config, long p);

/// tau_inf * prod_p (1-1/p)^{r+1} d_p; bad primes use the residue oracle at the
/// anticanonical bundle and the trivial character. The bound covers the
/// omitted primes, the oracle tails and the archimedean error.
struct TamagawaValue {
  Estimate arch;
  EulerProductValue euler;  // the finite-place product alone
  double value = 0;
  double error_bound = 0;
};
TamagawaValue tamagawa(const SurfaceConfig& config, long p_max);

struct ConstantReport {
  std::string config_name;
  int r = 0;
  Estimate tau_arch;
  EulerProductValue euler;
  double tamagawa = 0;
  double tamagawa_error = 0;
  Rational alpha;
  double theta = 0;
  double predicted_leading_coeff = 0;
};

/// alpha = 1/(3 * 2^r), theta = alpha * tau, prediction = theta / r!.
ConstantReport peyre_constant(const SurfaceConfig& config, long p_max);

/// rho_n = pi^{n/2} Gamma(1/2) / Gamma((n+1)/2) / zeta(n+1), so that the number of
/// points of P^n(Q) with L2 height <= B is ~ (rho_n/(n+1)) B^{n+1}.
double pn_residue(int n);

struct FitResult {
  int degree = 0;
  std::vector<double> coefficients;  // N(B)/B ~ sum_j c_j (log B)^j
  double leading_estimate = 0;
  double residual = 0;
  double condition = 0;
  std::vector<double> stability_trace;  // leading estimate after dropping the 1, 2, 3 smallest bounds
};

/// Relative least squares of N(B_i)/B_i against polynomials of degree r in log B_i.
/// Needs >= r+3 points spanning >= 3 decades.
FitResult fit_leading(const CountSeries& series, int r);

struct PoissonOptions {
  double extension = 1e6;    // direct sum continued to extension * B_direct
  int shards = 1;
  int alpha_max = 0;         // oracle depth; 0 picks the default per prime
};

struct PoissonReport {
  std::complex<double> lhs;
  double lhs_tail = 0;
  ZetaPartial zeta;
  std::complex<double> rhs;
  double rhs_tail = 0;
  double rhs_euler_error = 0;      // Euler truncation and oracle tails
  double rhs_arch_error = 0;       // archimedean transform errors
  double rhs_character_tail = 0;   // estimate for |a|_inf > a_max
  std::vector<std::complex<double>> rhs_by_amax;  // partial sums over |a|_inf <= A, A = 0..a_max
  long characters = 0;
  long oracle_factors = 0;
  bool incomplete = false;
  std::string diagnostic;

  double difference() const { return std::abs(lhs - rhs); }
  bool consistent() const { return !incomplete && difference() <= lhs_tail + rhs_tail; }
};

/// Both sides of sum_{x in Q^2} H(s;x)^{-1} = sum_{a in Z^2} Hhat(s; psi_a).
/// Needs Re s_0 > 3 and Re s_k > 2.
PoissonReport poisson_check(const SurfaceConfig& config, const PicardVector& s, const Rational& B_direct, int a_max,
                            long p_max, const PoissonOptions& opts = {});

struct GrowthReport {
  std::vector<long> bounds;        // A
  std::vector<double> max_product; // max over 0 < |a|_inf <= A of prod_{p in S(a)} |oracle factor|
  double slope = 0;                // least squares slope of log max_product against log A
};

/// Growth of the S(a) part of the Euler product in |a|_inf.
GrowthReport bad_factor_growth(const SurfaceConfig& config, const PicardVector& s, const std::vector<long>& bounds,
                               double tail_target = 1e-4);

}  // namespace hzeta
