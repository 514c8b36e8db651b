#include "hzeta/padic_oracle.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <unordered_map>

#include "hzeta/errors.hpp"

namespace hzeta {

namespace {

using i128 = __int128;

long ipow_long(long p, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<long>::max() / p) throw TruncationTooDeep("p^alpha overflows 64-bit residues");
    r *= p;
  }
  return r;
}

long mod_long(i128 x, long n) {
  i128 m = x % n;
  if (m < 0) m += n;
  return static_cast<long>(m);
}

Integer to_integer(i128 x) {
  bool neg = x < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(x + 1)) + 1 : static_cast<unsigned __int128>(x);
  Integer hi(static_cast<unsigned long>(u >> 64));
  Integer lo(static_cast<unsigned long>(u & ~0ULL));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

// Neumaier compensated summation of complex long doubles.
struct CompensatedSum {
  long double re = 0, im = 0, cre = 0, cim = 0;
  static void add1(long double& s, long double& c, long double x) {
    long double t = s + x;
    if (std::fabs(s) >= std::fabs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  void add(std::complex<long double> z) {
    add1(re, cre, z.real());
    add1(im, cim, z.imag());
  }
  std::complex<long double> value() const { return {re + cre, im + cim}; }
};

void require_good(const SurfaceConfig& config, long p) {
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  if (config.is_bad(p)) throw PreconditionError("cell decomposition needs a good prime; " + std::to_string(p) + " is bad");
}

void require_cell(const SurfaceConfig& config, const Cell& cell) {
  switch (cell.kind) {
    case Cell::Kind::U0: return;
    case Cell::Kind::Uk_ab:
      if (!(cell.beta >= 1 && cell.beta < cell.alpha)) throw PreconditionError("U_k(alpha,beta) needs 1 <= beta < alpha");
      [[fallthrough]];
    case Cell::Kind::Uk_a:
      if (cell.k < 1 || cell.k > config.r()) throw PreconditionError("cell form index out of range");
      [[fallthrough]];
    case Cell::Kind::U_a:
      if (cell.alpha < 1) throw PreconditionError("cell needs alpha >= 1");
      return;
  }
}

// min(alpha, v_p(value)) for value taken mod p^alpha.
int capped_valuation(i128 value, long p, int alpha, long N) {
  long v = mod_long(value, N);
  if (v == 0) return alpha;
  int e = 0;
  while (v % p == 0) {
    v /= p;
    ++e;
  }
  return e;
}

template <typename F>
void for_each_cell_residue(const SurfaceConfig& config, long p, const Cell& cell, F&& f) {
  require_good(config, p);
  require_cell(config, cell);
  const int alpha = cell.alpha;
  const long N = ipow_long(p, alpha);
  if (N > (1L << 13)) throw TruncationTooDeep("cell enumeration over (Z/p^alpha)^2 is too large");
  std::vector<int> val(config.r());
  for (long u1 = 0; u1 < N; ++u1) {
    for (long u2 = 0; u2 < N; ++u2) {
      if (u1 % p == 0 && u2 % p == 0) continue;
      for (int k = 0; k < config.r(); ++k) {
        const LinearForm& l = config.forms[k];
        val[k] = capped_valuation(static_cast<i128>(l.u) * u1 + static_cast<i128>(l.v) * u2, p, alpha, N);
      }
      bool member = false;
      switch (cell.kind) {
        case Cell::Kind::U0: break;
        case Cell::Kind::Uk_ab: member = val[cell.k - 1] == cell.beta; break;
        case Cell::Kind::Uk_a: member = val[cell.k - 1] == alpha; break;
        case Cell::Kind::U_a:
          member = std::all_of(val.begin(), val.end(), [](int v) { return v == 0; });
          break;
      }
      if (member) f(u1, u2, N);
    }
  }
}

long max_det_valuation(const SurfaceConfig& config, long p) {
  long V = 0;
  for (int j = 0; j < config.r(); ++j)
    for (int k = j + 1; k < config.r(); ++k) {
      long d = det(config.forms[j], config.forms[k]);
      if (d % p == 0) V = std::max(V, valuation(Integer(d), p));
    }
  return V;
}

// Depth-first walk over the residue tree of one shell ||x||_p = p^alpha,
// x = p^{-alpha} u with u primitive. A node is a class u = u0 mod p^j. The
// local height on the class is constant once every v_p(l_k(u)) is known (it is
// known when l_k(u0) is nonzero mod p^j) or j = alpha (then min(alpha, v) is
// alpha for the undecided forms). The integral of the character over a class
// at level j is p^{-2j} e(<a,u0>/p^alpha) when p^{alpha-j} | a and 0 otherwise.
class ShellWalker {
 public:
  using Acc = std::map<std::vector<int>, std::unordered_map<long, i128>>;

  ShellWalker(const SurfaceConfig& config, long p, int alpha, long a1, long a2, Acc& acc, long& nodes)
      : config_(config), p_(p), alpha_(alpha), acc_(acc), nodes_(nodes) {
    N_ = ipow_long(p, alpha);
    pw_.resize(alpha + 1);
    for (int j = 0; j <= alpha; ++j) pw_[j] = ipow_long(p, j);
    a1_ = mod_long(a1, N_);
    a2_ = mod_long(a2, N_);
    vals_.assign(alpha + 1, std::vector<int>(config.r(), -1));
    sig_.resize(config.r());
  }

  void run() {
    const int r = config_.r();
    for (long u1 = 0; u1 < p_; ++u1) {
      for (long u2 = 0; u2 < p_; ++u2) {
        if (u1 == 0 && u2 == 0) continue;
        for (int k = 0; k < r; ++k)
          vals_[1][k] = mod_long(form(k, u1, u2), p_) == 0 ? -1 : 0;
        visit(u1, u2, 1);
      }
    }
  }

 private:
  i128 form(int k, long u1, long u2) const {
    const LinearForm& l = config_.forms[k];
    return static_cast<i128>(l.u) * u1 + static_cast<i128>(l.v) * u2;
  }

  void visit(long u1, long u2, int j) {
    if (++nodes_ > kOracleNodeGuard)
      throw TruncationTooDeep("residue tree exceeded " + std::to_string(kOracleNodeGuard) + " classes at p = " +
                              std::to_string(p_) + ", alpha = " + std::to_string(alpha_));
    const int r = config_.r();
    const std::vector<int>& v = vals_[j];
    bool open = false;
    for (int k = 0; k < r; ++k)
      if (v[k] < 0) open = true;
    if (!open || j == alpha_) {
      const long step = pw_[alpha_ - j];
      if (a1_ % step != 0 || a2_ % step != 0) return;
      for (int k = 0; k < r; ++k) sig_[k] = v[k] < 0 ? alpha_ : v[k];
      long e = mod_long(static_cast<i128>(a1_) * u1 + static_cast<i128>(a2_) * u2, N_);
      i128 w = static_cast<i128>(step) * step;
      acc_[sig_][e] += w;
      return;
    }
    const long pj = pw_[j];
    const long pj1 = pw_[j + 1];
    std::vector<int>& cv = vals_[j + 1];
    for (long w1 = 0; w1 < p_; ++w1) {
      for (long w2 = 0; w2 < p_; ++w2) {
        long c1 = u1 + pj * w1, c2 = u2 + pj * w2;
        for (int k = 0; k < r; ++k) {
          if (v[k] >= 0)
            cv[k] = v[k];
          else
            cv[k] = mod_long(form(k, c1, c2), pj1) == 0 ? -1 : j;
        }
        visit(c1, c2, j + 1);
      }
    }
  }

  const SurfaceConfig& config_;
  long p_;
  int alpha_;
  long N_;
  long a1_, a2_;
  std::vector<long> pw_;
  std::vector<std::vector<int>> vals_;
  std::vector<int> sig_;
  Acc& acc_;
  long& nodes_;
};

}  // namespace

CyclotomicSum::CyclotomicSum(long p, int alpha) : p_(p), alpha_(alpha), modulus_(ipow_long(p, alpha)) {}

void CyclotomicSum::add(long exponent, const Integer& weight) {
  if (weight == 0) return;
  long e = mod_long(exponent, modulus_);
  Integer& c = coeffs_[e];
  c += weight;
  if (c == 0) coeffs_.erase(e);
}

CyclotomicSum& CyclotomicSum::operator+=(const CyclotomicSum& o) {
  if (o.coeffs_.empty()) return *this;
  if (coeffs_.empty() && modulus_ == 1) {
    *this = o;
    return *this;
  }
  if (o.modulus_ != modulus_) throw PreconditionError("adding cyclotomic sums of different moduli");
  for (const auto& [e, c] : o.coeffs_) add(e, c);
  return *this;
}

std::vector<Integer> CyclotomicSum::canonical() const {
  if (alpha_ == 0) {
    Integer total = 0;
    for (const auto& [e, c] : coeffs_) total += c;
    return {total};
  }
  const long block = modulus_ / p_;         // p^{alpha-1}
  const long phi = (p_ - 1) * block;
  if (phi > (1L << 26)) throw TruncationTooDeep("cyclotomic reduction too large");
  std::vector<Integer> out(phi);
  for (const auto& [e, c] : coeffs_) {
    if (e < phi) {
      out[e] += c;
    } else {
      // zeta^{(p-1)p^{alpha-1} + m'} = -sum_{i=0}^{p-2} zeta^{m' + i p^{alpha-1}}
      long m = e - phi;
      for (long i = 0; i <= p_ - 2; ++i) out[m + i * block] -= c;
    }
  }
  return out;
}

std::optional<Integer> CyclotomicSum::as_integer() const {
  if (coeffs_.empty()) return Integer(0);
  std::vector<Integer> c = canonical();
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) return std::nullopt;
  return c[0];
}

bool CyclotomicSum::is_zero() const {
  if (coeffs_.empty()) return true;
  for (const Integer& c : canonical())
    if (c != 0) return false;
  return true;
}

std::complex<long double> CyclotomicSum::to_complex() const {
  CompensatedSum acc;
  const long double two_pi = 2.0L * 3.141592653589793238462643383279502884L;
  for (const auto& [e, c] : coeffs_) {
    long double w = c.fits_slong_p() ? static_cast<long double>(c.get_si()) : static_cast<long double>(c.get_d());
    if (e == 0) {
      acc.add({w, 0});
      continue;
    }
    long double angle = two_pi * static_cast<long double>(e) / static_cast<long double>(modulus_);
    acc.add({w * cosl(angle), w * sinl(angle)});
  }
  return acc.value();
}

long double CyclotomicSum::abs_weight() const {
  long double s = 0;
  for (const auto& [e, c] : coeffs_) s += std::fabs(static_cast<long double>(c.get_d()));
  return s;
}

Rational cell_volume(const SurfaceConfig& config, long p, const Cell& cell) {
  require_good(config, p);
  require_cell(config, cell);
  const long r = config.r();
  Rational v;
  switch (cell.kind) {
    case Cell::Kind::U0: v = 1; break;
    case Cell::Kind::Uk_ab:
      v = rpow(Rational(p), 2 * cell.alpha - cell.beta) * Rational((p - 1) * (p - 1), p * p);
      break;
    case Cell::Kind::Uk_a: v = rpow(Rational(p), cell.alpha) * Rational(p - 1, p); break;
    case Cell::Kind::U_a: v = rpow(Rational(p), 2 * cell.alpha) * Rational((p - 1) * (p + 1 - r), p * p); break;
  }
  v.canonicalize();
  return v;
}

Rational cell_character_integral(const SurfaceConfig& config, long p, const Cell& cell, long a1, long a2) {
  require_good(config, p);
  require_cell(config, cell);
  CharacterClass cc = classify_character(config, a1, a2);
  if (cc.kind == CharacterKind::trivial) return cell_volume(config, p, cell);
  if (cc.in_bad_set(p))
    throw PreconditionError("prime " + std::to_string(p) + " lies in S(a); the closed cell integrals do not apply");
  if (cell.kind == Cell::Kind::U0) return 1;
  const long r = config.r();
  const int alpha = cell.alpha;
  const bool own = cc.kind == CharacterKind::special && cell.k == cc.special_index;
  Rational v = 0;
  switch (cell.kind) {
    case Cell::Kind::U0: break;
    case Cell::Kind::Uk_ab:
      if (own && cell.beta == alpha - 1) v = -rpow(Rational(p), alpha) * Rational(p - 1, p);
      break;
    case Cell::Kind::Uk_a:
      if (own)
        v = rpow(Rational(p), alpha) * Rational(p - 1, p);
      else if (alpha == 1)
        v = -1;
      break;
    case Cell::Kind::U_a:
      if (alpha == 1) v = cc.kind == CharacterKind::special ? Rational(-(p + 1 - r)) : Rational(r - 1);
      break;
  }
  v.canonicalize();
  return v;
}

Rational cell_volume_enumerated(const SurfaceConfig& config, long p, const Cell& cell) {
  if (cell.kind == Cell::Kind::U0) {
    require_good(config, p);
    return 1;
  }
  long count = 0;
  for_each_cell_residue(config, p, cell, [&](long, long, long) { ++count; });
  return Rational(count);
}

CyclotomicSum cell_character_sum_enumerated(const SurfaceConfig& config, long p, const Cell& cell, long a1,
                                            long a2) {
  if (cell.kind == Cell::Kind::U0) {
    // a is integral, so psi_a is identically 1 on Z_p^2.
    require_good(config, p);
    CyclotomicSum one(p, 0);
    one.add(0, 1);
    return one;
  }
  CyclotomicSum sum(p, cell.alpha);
  for_each_cell_residue(config, p, cell, [&](long u1, long u2, long N) {
    sum.add(mod_long(static_cast<i128>(mod_long(a1, N)) * u1 + static_cast<i128>(mod_long(a2, N)) * u2, N), 1);
  });
  return sum;
}

OracleMasses oracle_masses(const SurfaceConfig& config, long p, long a1, long a2, int alpha_max) {
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  if (alpha_max < 1) throw PreconditionError("alpha_max must be >= 1");
  OracleMasses out;
  out.p = p;
  out.alpha_max = alpha_max;
  const long NA = ipow_long(p, alpha_max);
  if (NA > (1L << 40)) throw TruncationTooDeep("p^alpha_max exceeds the residue guard");
  out.a1 = mod_long(a1, NA);
  out.a2 = mod_long(a2, NA);
  for (int alpha = 1; alpha <= alpha_max; ++alpha) {
    ShellWalker::Acc acc;
    ShellWalker walker(config, p, alpha, out.a1, out.a2, acc, out.nodes);
    walker.run();
    for (auto& [sig, exps] : acc) {
      OracleTerm t;
      t.alpha = alpha;
      t.m = sig;
      t.mass = CyclotomicSum(p, alpha);
      std::vector<std::pair<long, i128>> sorted(exps.begin(), exps.end());
      std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      for (const auto& [e, w] : sorted) {
        t.mass.add(e, to_integer(w));
        if (e != 0) out.integral = false;
      }
      t.mass_value = t.mass.to_complex();
      out.terms.push_back(std::move(t));
    }
  }
  return out;
}

double oracle_tail_bound(const SurfaceConfig& config, long p, const PicardVector& s, int alpha_max) {
  // Shell alpha: x = p^{-alpha} u, |H^{-1}| = p^{-alpha Re s_0 + sum_k m_k Re e_k}
  // with e_k = s_0 - s_k and m_k = min(alpha, v_p(l_k(u))). The set
  // {v_p(l_k(u)) >= m} has measure p^{-m}, and two forms can only be divisible
  // together up to V = max v_p(det); hence
  //   |shell| <= p^{V E} (1 + r alpha) q^alpha,  q = p^{-(sigma-2)},
  // sigma = min(Re s_0, Re s_k + 1), E = sum_k max(Re e_k, 0).
  const int r = config.r();
  double sigma = s.real(0);
  double E = 0;
  for (int k = 1; k <= r; ++k) {
    sigma = std::min(sigma, s.real(k) + 1);
    E += std::max(0.0, s.real(0) - s.real(k));
  }
  if (!(sigma > 2)) throw PreconditionError("oracle tail diverges: need Re s_0 > 2 and Re s_k > 1");
  const double pd = static_cast<double>(p);
  const double q = std::pow(pd, -(sigma - 2));
  const double A = alpha_max;
  const double qA1 = std::pow(q, A + 1);
  const double geo = qA1 / (1 - q);
  if (r == 0) return geo;
  const double lin = qA1 * ((A + 1) - A * q) / ((1 - q) * (1 - q));
  const double V = static_cast<double>(max_det_valuation(config, p));
  return std::pow(pd, V * E) * (geo + r * lin);
}

int default_alpha_max(const SurfaceConfig& config, long p, const PicardVector& s, double target) {
  const double pd = static_cast<double>(p);
  const int r = std::max(1, config.r());
  const double V = static_cast<double>(max_det_valuation(config, p));
  int best = 1;
  for (int A = 1; A <= 60; ++A) {
    double work = A * pd * pd + 2.0 * r * std::pow(pd, A + 1 + V);
    if (A > 1 && (work > kOracleNodeGuard / 4.0 || std::pow(pd, A) > 1e12)) break;
    best = A;
    if (oracle_tail_bound(config, p, s, A) <= target) break;
  }
  return best;
}

OracleResult evaluate_oracle(const OracleMasses& masses, const SurfaceConfig& config, const PicardVector& s) {
  if (s.size() != config.r() + 1) throw PreconditionError("Picard vector length does not match configuration");
  const long p = masses.p;
  const long double lp = std::log(static_cast<long double>(p));
  CompensatedSum acc;
  acc.add({1.0L, 0.0L});
  long double magnitude = 1;
  std::vector<std::complex<long double>> e(config.r() + 1);
  for (int k = 1; k <= config.r(); ++k)
    e[k] = std::complex<long double>(s.re[0].get_d() - s.re[k].get_d(), s.im[0] - s.im[k]);
  const std::complex<long double> s0(s.re[0].get_d(), s.im[0]);
  for (const OracleTerm& t : masses.terms) {
    std::complex<long double> expo = static_cast<long double>(t.alpha) * s0;
    for (int k = 1; k <= config.r(); ++k) expo -= static_cast<long double>(t.m[k - 1]) * e[k];
    std::complex<long double> w = std::exp(-expo * lp);
    acc.add(t.mass_value * w);
    magnitude += t.mass.abs_weight() * std::abs(w);
  }
  OracleResult res;
  std::complex<long double> v = acc.value();
  res.value = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  res.alpha_max = masses.alpha_max;
  // rounding allowance for the floating conversion on top of the analytic tail
  res.tail_bound = oracle_tail_bound(config, p, s, masses.alpha_max) +
                   static_cast<double>(64 * LDBL_EPSILON * magnitude) + 4 * DBL_EPSILON * std::abs(res.value);
  if (masses.integral) {
    if (auto z = s.integers()) {
      Rational sum = 1;
      const auto& v = *z;
      for (const OracleTerm& t : masses.terms) {
        long ex = t.alpha * v[0];
        for (int k = 1; k <= config.r(); ++k) ex -= t.m[k - 1] * (v[0] - v[k]);
        sum += Rational(*t.mass.as_integer()) * rpow(Rational(p), -ex);
      }
      sum.canonicalize();
      res.exact = sum;
    }
  }
  return res;
}

LocalFactor OracleResult::as_factor(long p) const {
  LocalFactor f;
  f.value = value;
  f.tail_bound = tail_bound;
  f.method = FactorMethod::oracle;
  f.place = p;
  return f;
}

OracleResult local_ft_oracle(const SurfaceConfig& config, long p, const PicardVector& s, long a1, long a2,
                             int alpha_max) {
  if (s.size() != config.r() + 1) throw PreconditionError("Picard vector length does not match configuration");
  if (!convergence_domain(config, s))
    throw PreconditionError("s = " + s.to_string() + " is outside the convergence domain");
  if (alpha_max <= 0) alpha_max = default_alpha_max(config, p, s);
  return evaluate_oracle(oracle_masses(config, p, a1, a2, alpha_max), config, s);
}

std::shared_ptr<const OracleMasses> OracleCache::masses(long p, long a1, long a2, int alpha_max) {
  const long NA = ipow_long(p, alpha_max);
  auto key = std::make_tuple(p, alpha_max, mod_long(a1, NA), mod_long(a2, NA));
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  auto m = std::make_shared<const OracleMasses>(oracle_masses(config_, p, a1, a2, alpha_max));
  std::lock_guard<std::mutex> lock(mu_);
  memo_.emplace(key, m);
  return m;
}

OracleResult OracleCache::evaluate(long p, const PicardVector& s, long a1, long a2, int alpha_max) {
  if (!convergence_domain(config_, s))
    throw PreconditionError("s = " + s.to_string() + " is outside the convergence domain");
  if (alpha_max <= 0) alpha_max = default_alpha_max(config_, p, s);
  return evaluate_oracle(*masses(p, a1, a2, alpha_max), config_, s);
}

}  // namespace hzeta
