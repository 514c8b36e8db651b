#pragma once

// Local and global heights on the blow-up and on P^n.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "hzeta/arith.hpp"
#include "hzeta/surface.hpp"

namespace hzeta {

/// s = (s_0, ..., s_r) in the basis D_0, ..., D_r. Real parts are exact
/// rationals (they drive exact height comparisons); imaginary parts are
/// binary64.
struct PicardVector {
  std::vector<Rational> re;
  std::vector<double> im;

  PicardVector() = default;
  explicit PicardVector(std::vector<Rational> real_parts);
  PicardVector(std::vector<Rational> real_parts, std::vector<double> imag_parts);

  static PicardVector anticanonical(int r);
  static PicardVector hyperplane(int r);
  /// Parses "6,4" or "5/2,3/2"; entries may be finite decimals.
  static PicardVector parse(const std::string& text);

  int size() const { return static_cast<int>(re.size()); }
  int r() const { return size() - 1; }
  std::complex<double> operator[](int i) const;
  double real(int i) const { return re[i].get_d(); }
  bool is_real() const;
  /// Integer entries when the vector is real with integral coordinates.
  std::optional<std::vector<long>> integers() const;

  bool effective() const;
  /// s_0 > s_k for every k and s_0 (1 - r) + sum s_k > 0.
  bool ample() const;

  PicardVector operator+(const PicardVector& o) const;
  std::string to_string() const;
};

/// finite_part * sqrt(arch_sq).
struct HeightValue {
  Rational finite_part{1};
  Rational arch_sq{1};

  double value() const;
  Rational squared() const { return finite_part * finite_part * arch_sq; }
  HeightValue operator*(const HeightValue& o) const;
  HeightValue inverse() const;
};

/// H_{k,p}(x); k = 0 is the strict transform of the line at infinity.
PAdicValue local_height_finite(const SurfaceConfig& config, int k, const PrimitiveTriple& x, long p);

/// H_{k,infinity}(x) with its square kept exact.
HeightValue local_height_arch(const SurfaceConfig& config, int k, const PrimitiveTriple& x);

/// Closed global form: gcd(c, l_k(a,b)) * sqrt((a^2+b^2+c^2)/(c^2+l_k^2)).
/// For k = 0 the value is H_{O(1)} / prod_k H_k.
HeightValue global_height_component(const SurfaceConfig& config, int k, const PrimitiveTriple& x);

/// Same quantity assembled as the product of local heights over infinity and
/// every prime dividing c.
HeightValue global_height_by_places(const SurfaceConfig& config, int k, const PrimitiveTriple& x);

/// sqrt(a^2 + b^2 + c^2).
HeightValue height_o1(const PrimitiveTriple& x);

/// H(s; x) = prod_k H_k(x)^{s_k} for real s.
double height_bundle(const SurfaceConfig& config, const PicardVector& s, const PrimitiveTriple& x);

/// H(s; x)^{-1} for complex s.
std::complex<double> inverse_height_bundle(const SurfaceConfig& config, const PicardVector& s,
                                           const PrimitiveTriple& x);

/// H(s; x)^n as an exact rational; n * s_k / 2 must be integral for all
/// exponents that appear (n = 2 * common denominator always works).
Rational height_bundle_power(const SurfaceConfig& config, const PicardVector& s, const PrimitiveTriple& x,
                             long n);

/// Anticanonical height in its closed form, squared:
/// (a^2+b^2+c^2)^{3-r} * prod_k (c^2+l_k^2) / gcd(c,l_k)^2.
Rational anticanonical_height_squared(const SurfaceConfig& config, const PrimitiveTriple& x);

/// sqrt(sum x_i^2) for a primitive integer vector.
double pn_height(const std::vector<Integer>& x);

}  // namespace hzeta
