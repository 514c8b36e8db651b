#pragma once

// Real-place integrals of the inverse height: the archimedean density and the
// Fourier transform at integral characters.

#include <complex>
#include <vector>

#include "hzeta/heights.hpp"
#include "hzeta/surface.hpp"

namespace hzeta {

/// H_inf(s; x)^{-1} = (1+|x|^2)^{-s_0/2} prod_k ((1+|x|^2)/(1+l_k(x)^2))^{e_k/2}, e_k = s_0 - s_k.
std::complex<double> arch_inverse_height(const SurfaceConfig& config, const PicardVector& s, double x1, double x2);

struct ArchValue {
  std::complex<double> value;
  double abs_error = 0;
  long evaluations = 0;
};

enum class PlaneRule {
  polar,      // x = rho (cos t, sin t); log rho on the middle range, rho^{-(s_0-2)} on the tail
  cartesian,  // x_i = tan(phi_i)
};

/// Integral of H_inf(s;x)^{-1} over R^2 by an iterated adaptive rule with
/// breakpoints on the lines l_k = 0. Needs Re s_k > 1 and Re s_0 > 2.
ArchValue arch_integral(const SurfaceConfig& config, const PicardVector& s, PlaneRule rule = PlaneRule::polar,
                        double rel_tol = 1e-10);

struct TrapezoidWindow {
  double step = 1.0 / 64;
  double flat = 16;   // window is 1 on [-flat, flat]^2
  double outer = 24;  // and 0 outside [-outer, outer]^2
  double flat_alt = 12;
  double outer_alt = 20;
};

/// Fourier transform Hhat_inf(s; a) for every integral a with |a|_inf <= a_max.
/// a = 0 comes from arch_integral; a != 0 from a smoothly windowed trapezoid
/// sum, with the error estimated by comparing two windows.
class ArchTransformTable {
 public:
  ArchTransformTable(const SurfaceConfig& config, const PicardVector& s, int a_max,
                     const TrapezoidWindow& window = {});

  int a_max() const { return a_max_; }
  std::complex<double> value(long a1, long a2) const;
  double error(long a1, long a2) const;

 private:
  std::size_t index(long a1, long a2) const;
  int a_max_;
  std::vector<std::complex<double>> values_;
  std::vector<double> errors_;
};

}  // namespace hzeta
