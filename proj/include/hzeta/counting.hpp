#pragma once

// Exact enumeration of rational points of bounded height on the affine plane
// inside the blow-up, and partial sums of the height zeta function.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hzeta/heights.hpp"
#include "hzeta/surface.hpp"

namespace hzeta {

/// Lower bound H(s;x) >= kappa * max(|a|,|b|,c)^lambda, available when every
/// e_k = s_0 - s_k is >= 0 and lambda = min_k s_k (s_0 when r = 0) is > 0.
struct PruningBound {
  bool available = false;
  double kappa = 0;
  double lambda = 0;
  std::string reason;
};

PruningBound pruning_bound(const SurfaceConfig& config, const PicardVector& s);

/// max(|a|,|b|,c) of every point with H <= B is at most this radius.
long pruning_radius(const SurfaceConfig& config, const PicardVector& s, const Rational& B);

struct CountOptions {
  int shards = 1;
  /// Forces the naive box scan with this half width (required when no pruning
  /// bound exists).
  std::optional<long> naive_radius;
  /// Cross-check the pruned sweep against the naive scan at a small bound
  /// before use; a mismatch throws NumericalError.
  bool validate_pruning = true;
};

struct CountSeries {
  std::string config_name;
  PicardVector bundle;
  std::vector<Rational> grid;
  std::vector<std::int64_t> counts;
  bool pruned = true;
  long radius = 0;
};

/// #{primitive (a,b,c), c >= 1, max(|a|,|b|,c) <= box : H(s;x) <= B}.
std::int64_t naive_count_oracle(const SurfaceConfig& config, const PicardVector& s, const Rational& B, long box);

std::int64_t enumerate_count(const SurfaceConfig& config, const PicardVector& s, const Rational& B,
                             const CountOptions& opts = {});

/// One sweep at max(grid), every point bucketed by exact comparisons.
CountSeries count_series(const SurfaceConfig& config, const PicardVector& s, const std::vector<Rational>& grid,
                         const CountOptions& opts = {});

/// Runs the pruned sweep against the naive scan at a bound with radius about
/// 12 (and at the explicitly given bounds); throws NumericalError on mismatch.
void validate_pruning(const SurfaceConfig& config, const PicardVector& s, const std::vector<Rational>& extra = {});

struct ZetaPartial {
  std::complex<double> direct;         // sum over H(Re s; x) <= B
  std::complex<double> shell;          // sum over B < H <= B_ext
  double B_ext = 0;
  std::complex<double> remainder;      // asymptotic estimate of the sum over H > B_ext
  double tail_bound = 0;               // uncertainty of direct + shell + remainder as a value of Z(s)
  std::int64_t points_direct = 0;
  std::int64_t points_total = 0;
  double growth_exponent = 0;          // a(s) in N(B) ~ B^a (log B)^b
  int log_power = 0;

  std::complex<double> estimate() const { return direct + shell + remainder; }
};

/// Partial height zeta sum. extension > 1 also sums the shell (B, extension*B]
/// and adds the asymptotic remainder estimate beyond it.
ZetaPartial zeta_partial(const SurfaceConfig& config, const PicardVector& s, const Rational& B,
                         double extension = 1.0, const CountOptions& opts = {});

/// CSV text "B,N" with header and LF endings.
std::string series_csv(const CountSeries& series);

}  // namespace hzeta
