#pragma once

// Thin wrappers over GSL special functions, adaptive quadrature and linear
// least squares.

#include <complex>
#include <functional>
#include <vector>

namespace hzeta {

/// Riemann zeta for real s > 1.
double zeta(double s);

/// log Gamma(z) for complex z (principal branch, continuous in Im z).
std::complex<double> log_gamma(std::complex<double> z);

struct Quadrature {
  double value = 0;
  double abs_error = 0;
  long evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 0;
  double rel_tol = 1e-10;
  int limit = 2000;
  /// Wynn-epsilon extrapolation for integrable endpoint singularities.
  bool singular = false;
};

/// Adaptive Gauss-Kronrod (21 point) with singularity-tolerant bisection on
/// [a, b]. Throws NumericalError when the tolerance cannot be met.
Quadrature integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureOptions& opts = {});

/// Same on a list of breakpoints, summing the pieces.
Quadrature integrate_pieces(const std::function<double(double)>& f, const std::vector<double>& points,
                            const QuadratureOptions& opts = {});

struct LinearFit {
  std::vector<double> coefficients;
  double residual = 0;      // root mean square of weighted residuals
  double condition = 0;     // ratio of extreme singular values
};

/// Weighted least squares min ||W^(1/2)(X c - y)||.
LinearFit least_squares(const std::vector<std::vector<double>>& rows, const std::vector<double>& y,
                        const std::vector<double>& weights);

}  // namespace hzeta
