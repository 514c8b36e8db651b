#include "hzeta/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hzeta/errors.hpp"
#include "hzeta/numerics.hpp"

namespace hzeta {

namespace {

std::complex<double> ppow(long p, std::complex<double> s) { return std::exp(s * std::log(static_cast<double>(p))); }

void require_prime(long p) {
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
}

void require_good(const SurfaceConfig& config, long p) {
  require_prime(p);
  if (config.is_bad(p)) throw PreconditionError("prime " + std::to_string(p) + " is bad for the configuration");
}

void require_domain(const SurfaceConfig& config, const PicardVector& s) {
  if (s.size() != config.r() + 1) throw PreconditionError("Picard vector length does not match configuration");
  if (!convergence_domain(config, s))
    throw PreconditionError("s = " + s.to_string() + " is outside the convergence domain");
}

LocalFactor closed(std::complex<double> v, long p, std::optional<Rational> exact) {
  LocalFactor f;
  f.value = v;
  f.place = p;
  f.method = FactorMethod::closed;
  if (exact) {
    exact->canonicalize();
    f.exact = exact;
    f.value = exact->get_d();
  }
  return f;
}

Rational rp(long p, long e) { return rpow(Rational(p), e); }

double min_re(const PicardVector& s, int from, int skip = -1) {
  double m = std::numeric_limits<double>::infinity();
  for (int k = from; k < s.size(); ++k)
    if (k != skip) m = std::min(m, s.real(k));
  return m;
}

long threshold_prime(double exponent) {
  // smallest integer p >= 2 with p^exponent >= 2
  if (!(exponent > 0)) return std::numeric_limits<long>::max();
  double p = std::ceil(std::pow(2.0, 1.0 / exponent));
  if (p > 1e15) return std::numeric_limits<long>::max();
  return std::max(2L, static_cast<long>(p));
}

}  // namespace

std::string to_string(FactorMethod m) {
  switch (m) {
    case FactorMethod::closed: return "closed";
    case FactorMethod::oracle: return "oracle";
    case FactorMethod::quadrature: return "quadrature";
  }
  return "?";
}

bool convergence_domain(const SurfaceConfig& config, const PicardVector& s) {
  if (s.size() != config.r() + 1) return false;
  if (!(s.re[0] > 2)) return false;
  for (int k = 1; k < s.size(); ++k)
    if (!(s.re[k] > 1)) return false;
  return true;
}

LocalFactor local_ft_trivial(const SurfaceConfig& config, long p, const PicardVector& s) {
  require_good(config, p);
  require_domain(config, s);
  if (auto z = s.integers()) {
    const auto& v = *z;
    Rational den = rp(p, v[0]) - p * p;
    Rational sum = 0;
    for (int k = 1; k < s.size(); ++k) sum += (rp(p, v[0] - 1) - rp(p, v[k] - 1)) / (rp(p, v[k] - 1) - 1);
    Rational val = 1 + Rational(p * p - 1) / den + Rational(p - 1) / den * sum;
    return closed(0, p, val);
  }
  std::complex<double> den = ppow(p, s[0]) - static_cast<double>(p * p);
  std::complex<double> sum = 0;
  for (int k = 1; k < s.size(); ++k)
    sum += (ppow(p, s[0] - 1.0) - ppow(p, s[k] - 1.0)) / (ppow(p, s[k] - 1.0) - 1.0);
  return closed(1.0 + static_cast<double>(p * p - 1) / den + static_cast<double>(p - 1) / den * sum, p, std::nullopt);
}

LocalFactor local_ft_generic(const SurfaceConfig& config, long p, const PicardVector& s) {
  require_good(config, p);
  require_domain(config, s);
  const int r = config.r();
  if (auto z = s.integers()) {
    const auto& v = *z;
    Rational val = 1 + Rational(r - 1) / rp(p, v[0]);
    for (int k = 1; k <= r; ++k) val -= 1 / rp(p, v[k]);
    return closed(0, p, val);
  }
  std::complex<double> val = 1.0 + static_cast<double>(r - 1) / ppow(p, s[0]);
  for (int k = 1; k <= r; ++k) val -= 1.0 / ppow(p, s[k]);
  return closed(val, p, std::nullopt);
}

LocalFactor local_ft_special(const SurfaceConfig& config, long p, const PicardVector& s, int k) {
  require_good(config, p);
  require_domain(config, s);
  const int r = config.r();
  if (k < 1 || k > r) throw PreconditionError("special index out of range");
  if (auto z = s.integers()) {
    const auto& v = *z;
    Rational val = 1 + Rational(r - p - 1) / rp(p, v[0]);
    for (int j = 1; j <= r; ++j)
      if (j != k) val -= 1 / rp(p, v[j]);
    val += Rational(p - 1) * (1 - rp(p, 1 - v[0])) / (rp(p, v[k]) - p);
    return closed(0, p, val);
  }
  std::complex<double> val = 1.0 + static_cast<double>(r - p - 1) / ppow(p, s[0]);
  for (int j = 1; j <= r; ++j)
    if (j != k) val -= 1.0 / ppow(p, s[j]);
  val += static_cast<double>(p - 1) * (1.0 - ppow(p, 1.0 - s[0])) / (ppow(p, s[k]) - static_cast<double>(p));
  return closed(val, p, std::nullopt);
}

LocalFactor local_ft_closed(const SurfaceConfig& config, long p, const PicardVector& s, const CharacterClass& a) {
  if (a.in_bad_set(p))
    throw PreconditionError("prime " + std::to_string(p) + " lies in S(a); no closed form applies");
  switch (a.kind) {
    case CharacterKind::trivial: return local_ft_trivial(config, p, s);
    case CharacterKind::generic: return local_ft_generic(config, p, s);
    case CharacterKind::special: return local_ft_special(config, p, s, a.special_index);
  }
  throw PreconditionError("unknown character kind");
}

LocalFactor pn_local_ft(int n, long p, std::complex<double> s, PnCharacter kind) {
  require_prime(p);
  if (n < 1) throw PreconditionError("n must be positive");
  if (kind == PnCharacter::trivial) {
    if (!(s.real() > n)) throw PreconditionError("trivial P^n factor needs Re s > n");
    return closed((1.0 - 1.0 / ppow(p, s)) / (1.0 - 1.0 / ppow(p, s - static_cast<double>(n))), p, std::nullopt);
  }
  return closed(1.0 - 1.0 / ppow(p, s), p, std::nullopt);
}

Rational pn_local_ft_exact(int n, long p, long s, PnCharacter kind) {
  require_prime(p);
  if (n < 1) throw PreconditionError("n must be positive");
  Rational v;
  if (kind == PnCharacter::trivial) {
    if (s <= n) throw PreconditionError("trivial P^n factor needs s > n");
    v = (1 - 1 / rp(p, s)) / (1 - 1 / rp(p, s - n));
  } else {
    v = 1 - 1 / rp(p, s);
  }
  v.canonicalize();
  return v;
}

LocalFactor pn_arch_ft_trivial(int n, std::complex<double> s) {
  if (n < 1) throw PreconditionError("n must be positive");
  if (!(s.real() > n)) throw PreconditionError("archimedean P^n factor needs Re s > n");
  std::complex<double> lg = log_gamma((s - static_cast<double>(n)) / 2.0) - log_gamma(s / 2.0);
  LocalFactor f;
  f.value = std::pow(M_PI, n / 2.0) * std::exp(lg);
  f.place = 0;
  f.method = FactorMethod::closed;
  return f;
}

FactorMajorant factor_majorant(const SurfaceConfig& config, const PicardVector& s, CharacterKind kind,
                               int special_index) {
  const int r = config.r();
  const double s0 = s.real(0);
  FactorMajorant m;
  switch (kind) {
    case CharacterKind::generic: {
      // |sum_k p^{-s_k}| + (r-1)|p^{-s_0}|
      if (r == 0) {
        m.C = 1;
        m.gamma = s0;
      } else {
        m.C = r + (r - 1);
        m.gamma = std::min(min_re(s, 1), s0);
      }
      m.p0 = 2;
      break;
    }
    case CharacterKind::special: {
      // sum_{j != k} p^{-s_j}                      <= (r-1) p^{-min s_j}
      // |(r-p-1) p^{-s_0}|                         <= (r+2) p^{1-s_0}
      // (p-1)|1-p^{1-s_0}| / |p^{s_k}-p|           <= 4 p^{1-s_k}  once p^{s_k-1} >= 2
      const double sk = s.real(special_index);
      m.C = (r - 1) + (r + 2) + 4;
      m.gamma = std::min({min_re(s, 1, special_index), s0 - 1, sk - 1});
      m.p0 = threshold_prime(sk - 1);
      break;
    }
    case CharacterKind::trivial: {
      // |p^{s_0}-p^2| >= p^{s_0}/2 once p^{s_0-2} >= 2, and p^{s_k-1}-1 >= p^{s_k-1}/2
      // once p^{s_k-1} >= 2; then the two correction terms are bounded by
      // 2 p^{2-s_0} and 4 sum_k (p^{1-s_k} + p^{1-s_0}).
      const double sk = r > 0 ? min_re(s, 1) : std::numeric_limits<double>::infinity();
      m.C = 2 + 8.0 * r;
      m.gamma = std::min(s0 - 2, sk - 1);
      m.p0 = std::max(threshold_prime(s0 - 2), r > 0 ? threshold_prime(sk - 1) : 2L);
      break;
    }
  }
  return m;
}

double majorant_tail_sum(const FactorMajorant& m, long P) {
  if (!(m.gamma > 1))
    throw PreconditionError("Euler product is not absolutely convergent for this s (exponent " +
                            std::to_string(m.gamma) + " <= 1)");
  if (P + 1 < m.p0)
    throw PreconditionError("truncation prime " + std::to_string(P) + " is below the majorant threshold " +
                            std::to_string(m.p0));
  double Pd = static_cast<double>(P);
  return m.C * std::pow(Pd, 1 - m.gamma) / (m.gamma - 1);
}

EulerProductValue euler_product(const SurfaceConfig& config, const PicardVector& s, const CharacterClass& a,
                                long p_max, const BadFactorSource& bad_factor_source) {
  return euler_product(config, s, a, p_max, bad_factor_source,
                       [&](long p) { return local_ft_closed(config, p, s, a); });
}

EulerProductValue euler_product(const SurfaceConfig& config, const PicardVector& s, const CharacterClass& a,
                                long p_max, const BadFactorSource& bad_factor_source,
                                const BadFactorSource& good_factor_source) {
  require_domain(config, s);
  FactorMajorant maj = factor_majorant(config, s, a.kind, a.special_index);
  double tail = majorant_tail_sum(maj, p_max);

  std::vector<long> primes = primes_up_to(p_max);
  for (long p : a.bad_set)
    if (p > p_max) primes.push_back(p);

  std::complex<double> good = 1.0;
  std::complex<double> bad = 1.0;
  double bad_abs = 1.0, bad_abs_plus = 1.0;
  EulerProductValue out;
  for (long p : primes) {
    if (a.in_bad_set(p)) {
      if (!bad_factor_source)
        throw IncompleteInput("no factor supplied for prime " + std::to_string(p) + " in S(a)");
      LocalFactor f = bad_factor_source(p);
      bad *= f.value;
      bad_abs *= std::abs(f.value);
      bad_abs_plus *= std::abs(f.value) + f.tail_bound;
      out.oracle_primes.push_back(p);
    } else {
      good *= good_factor_source(p).value;
    }
  }
  double eT = std::exp(tail);
  out.value = good * bad;
  out.truncation_prime = p_max;
  out.truncation_error_bound = std::abs(good) * ((bad_abs_plus - bad_abs) * eT + bad_abs * (eT - 1));
  return out;
}

}  // namespace hzeta
