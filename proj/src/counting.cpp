#include "hzeta/counting.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "hzeta/errors.hpp"

namespace hzeta {

namespace {

using i128 = __int128;

long fdiv(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
long cdiv(long a, long b) { return -fdiv(-a, b); }

bool mul_into(i128& acc, i128 x) { return !__builtin_mul_overflow(acc, x, &acc); }

bool pow_into(i128& acc, i128 base, long e) {
  for (long i = 0; i < e; ++i)
    if (!mul_into(acc, base)) return false;
  return true;
}

Integer to_integer(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer hi = static_cast<unsigned long>(u >> 64);
  Integer lo = static_cast<unsigned long>(u & 0xffffffffffffffffULL);
  Integer z = (hi << 64) + lo;
  return neg ? Integer(-z) : z;
}

bool to_i128(const Integer& z, i128& out) {
  if (mpz_sizeinbase(z.get_mpz_t(), 2) > 125) return false;
  Integer a = abs(z);
  Integer hi = a >> 64;
  Integer lo = a - (hi << 64);
  unsigned __int128 u = (static_cast<unsigned __int128>(hi.get_ui()) << 64) | lo.get_ui();
  out = sgn(z) < 0 ? -static_cast<i128>(u) : static_cast<i128>(u);
  return true;
}

long isqrt_floor(i128 x) {
  if (x < 0) return -1;
  long r = static_cast<long>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && static_cast<i128>(r) * r > x) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= x) ++r;
  return r;
}

// floor(x^{1/k}) for x >= 0
long iroot_floor(i128 x, long k) {
  if (k == 1) return x > std::numeric_limits<long>::max() ? std::numeric_limits<long>::max() : static_cast<long>(x);
  if (k == 2) return isqrt_floor(x);
  long r = static_cast<long>(std::pow(static_cast<long double>(x), 1.0L / k));
  auto le = [&](long v) {
    i128 acc = 1;
    return pow_into(acc, v, k) && acc <= x;
  };
  while (r > 0 && !le(r)) --r;
  while (le(r + 1)) ++r;
  return r;
}

struct Components {
  i128 Q = 0;
  i128 N2[64];
  long g[64];
};

// H(s;x)^E = L / R with E = 2q/d as small integer exponents, so that H <= B
// becomes L * den(B)^E <= R * num(B)^E.
class HeightTest {
 public:
  HeightTest(const SurfaceConfig& config, const PicardVector& s, const std::vector<Rational>& grid)
      : r_(config.r()), forms_(config.forms) {
    if (!s.is_real()) throw PreconditionError("counting needs a real Picard vector");
    if (s.size() != r_ + 1) throw PreconditionError("Picard vector length does not match configuration");
    if (r_ > 60) throw PreconditionError("too many forms");
    Integer q = 1;
    for (const auto& x : s.re) q = lcm(q, Rational(x).get_den());
    std::vector<Integer> e(r_);
    Rational sigma = s.re[0];
    for (int k = 0; k < r_; ++k) {
      Rational ek = s.re[0] - s.re[k + 1];
      sigma -= ek;
      Rational t = ek * q;
      t.canonicalize();
      e[k] = t.get_num();
    }
    Rational sq = sigma * q;
    sq.canonicalize();
    Integer d = gcd(sq.get_num(), Integer(2 * q));
    for (const auto& x : e) d = gcd(d, x);
    xQ_ = Integer(sq.get_num() / d).get_si();
    for (const auto& x : e) xN_.push_back(Integer(x / d).get_si());
    xB_ = Integer(2 * q / d).get_si();
    if (std::abs(xQ_) > 64 || xB_ > 64) throw PreconditionError("height exponents too large for exact comparison");
    for (long x : xN_)
      if (std::abs(x) > 64) throw PreconditionError("height exponents too large for exact comparison");
    set_grid(grid);
  }

  void set_grid(const std::vector<Rational>& grid) {
    bn_.clear();
    bd_.clear();
    bnz_.clear();
    bdz_.clear();
    fits_.clear();
    for (const auto& B : grid) {
      if (sgn(B) <= 0) throw PreconditionError("height bounds must be positive");
      Integer n = ipow(B.get_num(), xB_), dd = ipow(B.get_den(), xB_);
      i128 ni = 0, di = 0;
      bool ok = to_i128(n, ni) && to_i128(dd, di);
      bnz_.push_back(n);
      bdz_.push_back(dd);
      bn_.push_back(ni);
      bd_.push_back(di);
      fits_.push_back(ok);
    }
  }

  std::size_t grid_size() const { return bnz_.size(); }
  long xQ() const { return xQ_; }
  const std::vector<long>& xN() const { return xN_; }
  long xB() const { return xB_; }
  const Integer& bn(std::size_t i) const { return bnz_[i]; }
  const Integer& bd(std::size_t i) const { return bdz_[i]; }

  Components components(long a, long b, long c) const {
    Components x;
    x.Q = static_cast<i128>(a) * a + static_cast<i128>(b) * b + static_cast<i128>(c) * c;
    for (int k = 0; k < r_; ++k) {
      i128 l = static_cast<i128>(forms_[k].u) * a + static_cast<i128>(forms_[k].v) * b;
      x.N2[k] = static_cast<i128>(c) * c + l * l;
      long la = static_cast<long>(l < 0 ? -l : l);
      x.g[k] = std::gcd(c, la);
    }
    return x;
  }

  // smallest i with H <= grid[i], grid_size() if none
  std::size_t bucket(const Components& x) const {
    i128 L = 1, R = 1;
    bool ok = sides(x, L, R);
    std::size_t lo = 0, hi = grid_size();
    if (ok) {
      while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (le_fast(L, R, mid)) hi = mid;
        else lo = mid + 1;
      }
      return lo;
    }
    Integer Lz, Rz;
    sides_big(x, Lz, Rz);
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      if (Lz * bdz_[mid] <= Rz * bnz_[mid]) hi = mid;
      else lo = mid + 1;
    }
    return lo;
  }

 private:
  bool sides(const Components& x, i128& L, i128& R) const {
    if (xQ_ >= 0 ? !pow_into(L, x.Q, xQ_) : !pow_into(R, x.Q, -xQ_)) return false;
    for (int k = 0; k < r_; ++k) {
      long e = xN_[k];
      if (e == 0) continue;
      i128 g2 = static_cast<i128>(x.g[k]) * x.g[k];
      if (e > 0) {
        if (!pow_into(L, x.N2[k], e) || !pow_into(R, g2, e)) return false;
      } else {
        if (!pow_into(R, x.N2[k], -e) || !pow_into(L, g2, -e)) return false;
      }
    }
    return true;
  }

  void sides_big(const Components& x, Integer& L, Integer& R) const {
    L = 1;
    R = 1;
    Integer Q = to_integer(x.Q);
    if (xQ_ >= 0) L *= ipow(Q, xQ_);
    else R *= ipow(Q, -xQ_);
    for (int k = 0; k < r_; ++k) {
      long e = xN_[k];
      Integer N2 = to_integer(x.N2[k]);
      Integer g2 = Integer(x.g[k]) * x.g[k];
      if (e > 0) {
        L *= ipow(N2, e);
        R *= ipow(g2, e);
      } else if (e < 0) {
        R *= ipow(N2, -e);
        L *= ipow(g2, -e);
      }
    }
  }

  bool le_fast(i128 L, i128 R, std::size_t i) const {
    if (fits_[i]) {
      i128 lhs = L, rhs = R;
      if (mul_into(lhs, bd_[i]) && mul_into(rhs, bn_[i])) return lhs <= rhs;
    }
    return to_integer(L) * bdz_[i] <= to_integer(R) * bnz_[i];
  }

  int r_;
  std::vector<LinearForm> forms_;
  long xQ_ = 0;
  std::vector<long> xN_;
  long xB_ = 1;
  std::vector<i128> bn_, bd_;
  std::vector<Integer> bnz_, bdz_;
  std::vector<bool> fits_;
};

struct Neumaier {
  double sum = 0, comp = 0;
  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// Smallest-prime-factor table, for the coprimality counts.
std::vector<int> spf_table(long n) {
  std::vector<int> spf(static_cast<std::size_t>(n + 1), 0);
  for (long i = 2; i <= n; ++i)
    if (spf[i] == 0)
      for (long j = i; j <= n; j += i)
        if (spf[j] == 0) spf[j] = static_cast<int>(i);
  return spf;
}

// #{t in [lo, hi] : gcd(t, n) = 1} where primes are the prime divisors of n.
std::int64_t coprime_in_range(long lo, long hi, const std::vector<long>& primes) {
  if (hi < lo) return 0;
  std::int64_t total = 0;
  const std::size_t n = primes.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    long d = 1;
    int bits = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) {
        d *= primes[i];
        ++bits;
      }
    std::int64_t cnt = fdiv(hi, d) - fdiv(lo - 1, d);
    total += (bits & 1) ? -cnt : cnt;
  }
  return total;
}

// Parametrization of the plane by the pivot form: (a, b) = (z m - v t, -y m + u t)
// with u z - v y = 1, so that pivot(a, b) = m and a^2+b^2 = w (t - m h / w)^2 + m^2 / w.
struct Pivot {
  long u = 1, v = 0, y = 0, z = 1;
  long w = 1, h = 0;
  int index = -1;  // 0-based form index, -1 when r = 0
};

Pivot make_pivot(const SurfaceConfig& config) {
  Pivot p;
  if (config.r() > 0) {
    p.index = 0;
    p.u = config.forms[0].u;
    p.v = config.forms[0].v;
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), Integer(p.u).get_mpz_t(), Integer(p.v).get_mpz_t());
    p.z = s.get_si();
    p.y = -t.get_si();
  }
  p.w = p.u * p.u + p.v * p.v;
  p.h = p.u * p.y + p.v * p.z;
  return p;
}

struct SweepResult {
  std::vector<std::int64_t> buckets;  // per grid index (non-cumulative), last entry unused
  Neumaier re[2], im[2];
};

class Sweeper {
 public:
  Sweeper(const SurfaceConfig& config, const PicardVector& s, const std::vector<Rational>& grid, long radius,
          const PruningBound& bound)
      : config_(config), test_(config, s, grid), R_(radius), pivot_(make_pivot(config)) {
    (void)bound;
    const int r = config.r();
    sigma_ = s.real(0);
    for (int k = 1; k <= r; ++k) {
      e_.push_back(s.real(0) - s.real(k));
      sigma_ -= e_.back();
    }
    log_bmax_ = std::log(grid.back().get_d());
    for (int k = 0; k < r; ++k) {
      const auto& f = config.forms[k];
      alpha_.push_back(f.u * pivot_.z - f.v * pivot_.y);
      beta_.push_back(pivot_.u * f.v - pivot_.v * f.u);
    }
    for (int j = 0; j < r; ++j)
      for (int k = j + 1; k < r; ++k) dets_.push_back(std::abs(det(config.forms[j], config.forms[k])));
    e_other_sum_ = 0;
    e_other_max_ = 0;
    for (int k = 1; k < r; ++k) {
      e_other_sum_ += e_[k];
      e_other_max_ = std::max(e_other_max_, e_[k]);
    }
    fast_ = r <= 1;
    if (fast_) spf_ = spf_table(std::max(2L, R_));
  }

  bool fast() const { return fast_; }

  // Exact per-bucket counts for every c in the shard, by interval counting (r <= 1).
  void count_fast(long c, SweepResult& out) const {
    const std::size_t G = test_.grid_size();
    std::vector<long> cprimes;
    for (long n = c; n > 1;) {
      long p = spf_[n];
      cprimes.push_back(p);
      while (n % p == 0) n /= p;
    }
    const long mmax = (std::abs(pivot_.u) + std::abs(pivot_.v)) * R_;
    const i128 c2 = static_cast<i128>(c) * c;
    std::vector<long> primes;
    for (long m = -mmax; m <= mmax; ++m) {
      long g = std::gcd(c, std::abs(m));
      primes.clear();
      for (long p : cprimes)
        if (g % p == 0) primes.push_back(p);
      std::int64_t last = 0;
      for (std::size_t i = 0; i < G; ++i) {
        i128 Qmax = qmax(c, m, g, i);
        std::int64_t cnt = 0;
        if (Qmax >= c2) {
          i128 K = Qmax - c2;
          i128 Dp;
          bool ok = !__builtin_mul_overflow(static_cast<i128>(pivot_.w), K, &Dp);
          if (!ok) throw NumericalError("count bound overflow");
          Dp -= static_cast<i128>(m) * m;
          if (Dp >= 0) {
            long S = isqrt_floor(Dp);
            long mh = m * pivot_.h;
            long lo = cdiv(mh - S, pivot_.w), hi = fdiv(mh + S, pivot_.w);
            cnt = coprime_in_range(lo, hi, primes);
          }
        }
        out.buckets[i] += cnt - last;
        last = cnt;
      }
    }
  }

  // Visits every point with H <= max(grid) having this denominator.
  template <class F>
  void visit(long c, F&& on_point) const {
    const int r = config_.r();
    const double lc = std::log(static_cast<double>(c));
    const double c2 = static_cast<double>(c) * c;
    const long mmax = (std::abs(pivot_.u) + std::abs(pivot_.v)) * R_;
    double logDc = 0;
    for (long d : dets_) logDc += std::log(static_cast<double>(std::gcd(c, d)));
    const double sig_far = sigma_ < 0 ? 0.5 * sigma_ * std::log(3.0 * static_cast<double>(R_) * R_) : 0;
    const double tol = 1e-9 * std::max(1.0, std::abs(log_bmax_));
    const double w = static_cast<double>(pivot_.w);
    std::vector<double> Dk(static_cast<std::size_t>(std::max(r, 1)));

    for (long m = -mmax; m <= mmax; ++m) {
      const long gp = std::gcd(c, std::abs(m));
      const double md = static_cast<double>(m);
      double base = 0;
      if (pivot_.index >= 0) {
        base += e_[0] * (0.5 * std::log(c2 + md * md) - std::log(static_cast<double>(gp)));
        double G1 = e_other_sum_ * lc;
        double G2 = e_other_max_ * (lc + logDc - std::log(static_cast<double>(gp)));
        base -= std::min(G1, G2);
      }
      const double tQ = md * pivot_.h / w;
      for (int k = 1; k < r; ++k) Dk[k] = std::abs(tQ + md * alpha_[k] / beta_[k]);
      auto lower = [&](double d) {
        double v = base + (sigma_ >= 0 ? 0.5 * sigma_ * std::log(c2 + md * md / w + w * d * d) : sig_far);
        for (int k = 1; k < r; ++k) {
          double n = std::max(static_cast<double>(c), std::abs(static_cast<double>(beta_[k])) * std::max(0.0, d - Dk[k]));
          v += e_[k] * std::log(n);
        }
        return v;
      };
      if (lower(0) > log_bmax_ + tol) continue;

      // box |a| <= R, |b| <= R
      long tlo = std::numeric_limits<long>::min(), thi = std::numeric_limits<long>::max();
      auto clip = [&](long coef, long offset) {
        if (coef == 0) {
          if (std::abs(offset) > R_) {
            tlo = 1;
            thi = 0;
          }
          return;
        }
        if (coef < 0) {
          coef = -coef;
          offset = -offset;
        }
        tlo = std::max(tlo, cdiv(-R_ - offset, coef));
        thi = std::min(thi, fdiv(R_ - offset, coef));
      };
      clip(-pivot_.v, pivot_.z * m);
      clip(pivot_.u, -pivot_.y * m);
      if (tlo > thi) continue;

      const long t0 = static_cast<long>(std::floor(tQ));
      auto run = [&](long t) {
        if (std::gcd(gp, std::abs(t)) != 1) return;
        long a = pivot_.z * m - pivot_.v * t;
        long b = -pivot_.y * m + pivot_.u * t;
        Components x = test_.components(a, b, c);
        std::size_t i = test_.bucket(x);
        if (i < test_.grid_size()) on_point(a, b, c, x, i);
      };
      for (long t = std::max(t0 + 1, tlo); t <= thi; ++t) {
        if (lower(static_cast<double>(t) - tQ) > log_bmax_ + tol) break;
        run(t);
      }
      for (long t = std::min(t0, thi); t >= tlo; --t) {
        if (lower(tQ - static_cast<double>(t)) > log_bmax_ + tol) break;
        run(t);
      }
    }
  }

  const HeightTest& test() const { return test_; }

 private:
  // largest Q with H <= grid[i] at fixed (c, m), for r <= 1 (sigma > 0, e >= 0)
  i128 qmax(long c, long m, long g, std::size_t i) const {
    const long xQ = test_.xQ();
    i128 num = 1, den = 1;
    bool ok = true;
    if (config_.r() == 1) {
      long e = test_.xN()[0];
      i128 N2 = static_cast<i128>(c) * c + static_cast<i128>(m) * m;
      ok = pow_into(num, static_cast<i128>(g) * g, e) && pow_into(den, N2, e);
    }
    i128 bn = 0, bd = 0;
    if (ok && to_i128(test_.bn(i), bn) && to_i128(test_.bd(i), bd) && mul_into(num, bn) && mul_into(den, bd))
      return iroot_floor(num / den, xQ);
    Integer nz = test_.bn(i), dz = test_.bd(i);
    if (config_.r() == 1) {
      long e = test_.xN()[0];
      nz *= ipow(Integer(g) * g, e);
      dz *= ipow(Integer(c) * c + Integer(m) * m, e);
    }
    Integer X = nz / dz, root;
    mpz_root(root.get_mpz_t(), X.get_mpz_t(), xQ);
    i128 out = 0;
    if (!to_i128(root, out) || out > (static_cast<i128>(1) << 100)) out = static_cast<i128>(1) << 100;
    return out;
  }

  const SurfaceConfig& config_;
  HeightTest test_;
  long R_;
  Pivot pivot_;
  double sigma_ = 0;
  std::vector<double> e_;
  std::vector<long> alpha_, beta_, dets_;
  double e_other_sum_ = 0, e_other_max_ = 0;
  double log_bmax_ = 0;
  bool fast_ = false;
  std::vector<int> spf_;
};

template <class Work>
void run_shards(int shards, long radius, Work&& work) {
  shards = std::max(1, shards);
  if (shards == 1) {
    for (long c = 1; c <= radius; ++c) work(0, c);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));
  for (int j = 0; j < shards; ++j) {
    threads.emplace_back([&, j] {
      try {
        for (long c = j + 1; c <= radius; c += shards) work(j, c);
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<std::int64_t> sweep_counts(const SurfaceConfig& config, const PicardVector& s,
                                       const std::vector<Rational>& grid, long radius, int shards) {
  PruningBound bound = pruning_bound(config, s);
  Sweeper sw(config, s, grid, radius, bound);
  const std::size_t G = grid.size();
  shards = std::max(1, shards);
  std::vector<SweepResult> parts(static_cast<std::size_t>(shards));
  for (auto& p : parts) p.buckets.assign(G, 0);
  run_shards(shards, radius, [&](int j, long c) {
    auto& out = parts[static_cast<std::size_t>(j)];
    if (sw.fast()) {
      sw.count_fast(c, out);
    } else {
      sw.visit(c, [&](long, long, long, const Components&, std::size_t i) { ++out.buckets[i]; });
    }
  });
  std::vector<std::int64_t> counts(G, 0);
  for (const auto& p : parts)
    for (std::size_t i = 0; i < G; ++i) counts[i] += p.buckets[i];
  for (std::size_t i = 1; i < G; ++i) counts[i] += counts[i - 1];
  return counts;
}

std::string validation_key(const SurfaceConfig& config, const PicardVector& s) {
  std::ostringstream os;
  for (const auto& f : config.forms) os << f.u << ',' << f.v << ';';
  os << '|' << s.to_string();
  return os.str();
}

std::mutex g_validated_mu;
std::set<std::string> g_validated;

void check_grid(const std::vector<Rational>& grid) {
  if (grid.empty()) throw PreconditionError("empty height grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (sgn(grid[i]) <= 0) throw PreconditionError("height bounds must be positive");
    if (i > 0 && grid[i] <= grid[i - 1]) throw PreconditionError("height grid must be strictly increasing");
  }
}

}  // namespace

PruningBound pruning_bound(const SurfaceConfig& config, const PicardVector& s) {
  PruningBound out;
  const int r = config.r();
  if (!s.is_real() || s.size() != r + 1) {
    out.reason = "needs a real Picard vector matching the configuration";
    return out;
  }
  const double s0 = s.real(0);
  std::vector<double> e;
  double sigma = s0, e_sum = 0, e_max = 0, e_min = std::numeric_limits<double>::infinity();
  double lambda = r == 0 ? s0 : std::numeric_limits<double>::infinity();
  for (int k = 1; k <= r; ++k) {
    if (s.re[k] > s.re[0]) {
      out.reason = "s_" + std::to_string(k) + " exceeds s_0";
      return out;
    }
    double ek = s0 - s.real(k);
    e.push_back(ek);
    sigma -= ek;
    e_sum += ek;
    e_max = std::max(e_max, ek);
    e_min = std::min(e_min, ek);
    lambda = std::min(lambda, s.real(k));
  }
  if (!(lambda > 0)) {
    out.reason = "the bound exponent min_k s_k is not positive";
    return out;
  }
  // (i) At most one form is small: if |l_j|, |l_k| < delta M with
  //     M = max(|a|,|b|), then |det| M <= |v_k l_j| + |v_j l_k| < 2 W delta M.
  // (ii) prod_k gcd(c, l_k) divides c * prod_{j<k} |det(l_j, l_k)|, prime by
  //     prime, because two forms sharing p^e with c give p^e | det.
  // With N_k >= c and N_k >= delta' M for all but one form,
  //   H >= min(1, 3^{sigma/2}) delta'^{sum e - e_min} D^{-e_max} M^lambda.
  double kappa = sigma >= 0 ? 1.0 : std::pow(3.0, sigma / 2);
  if (r >= 2) {
    long wmax = 0, dmin = std::numeric_limits<long>::max();
    double logD = 0;
    for (const auto& f : config.forms) wmax = std::max(wmax, std::abs(f.u) + std::abs(f.v));
    for (int j = 0; j < r; ++j)
      for (int k = j + 1; k < r; ++k) {
        long d = std::abs(det(config.forms[j], config.forms[k]));
        dmin = std::min(dmin, d);
        logD += std::log(static_cast<double>(d));
      }
    double delta = std::min(1.0, static_cast<double>(dmin) / (2.0 * wmax));
    kappa *= std::exp((e_sum - e_min) * std::log(delta) - e_max * logD);
  }
  out.available = true;
  out.kappa = kappa;
  out.lambda = lambda;
  return out;
}

long pruning_radius(const SurfaceConfig& config, const PicardVector& s, const Rational& B) {
  PruningBound pb = pruning_bound(config, s);
  if (!pb.available) throw PreconditionError("no pruning bound for s = " + s.to_string() + ": " + pb.reason);
  if (sgn(B) <= 0) throw PreconditionError("height bound must be positive");
  double R = std::exp((std::log(B.get_d()) - std::log(pb.kappa)) / pb.lambda);
  if (!(R < 1e9)) throw PreconditionError("height bound too large to enumerate");
  return static_cast<long>(std::floor(R * (1 + 1e-9))) + 1;
}

std::int64_t naive_count_oracle(const SurfaceConfig& config, const PicardVector& s, const Rational& B, long box) {
  if (box < 1) return 0;
  if (box > 100000) throw PreconditionError("naive box too large");
  HeightTest test(config, s, {B});
  std::int64_t n = 0;
  for (long c = 1; c <= box; ++c)
    for (long a = -box; a <= box; ++a) {
      long gac = std::gcd(std::abs(a), c);
      for (long b = -box; b <= box; ++b) {
        if (std::gcd(gac, std::abs(b)) != 1) continue;
        if (test.bucket(test.components(a, b, c)) == 0) ++n;
      }
    }
  return n;
}

void validate_pruning(const SurfaceConfig& config, const PicardVector& s, const std::vector<Rational>& extra) {
  PruningBound pb = pruning_bound(config, s);
  if (!pb.available) throw PreconditionError("no pruning bound for s = " + s.to_string() + ": " + pb.reason);
  std::vector<Rational> bounds = extra;
  // a bound whose radius is about 12, checked on a box of twice that radius
  Rational small(pb.kappa * std::pow(12.0, pb.lambda));
  small.canonicalize();
  if (sgn(small) > 0) bounds.push_back(small);
  for (const auto& B : bounds) {
    long R = pruning_radius(config, s, B);
    std::int64_t fast = sweep_counts(config, s, {B}, R, 1).front();
    std::int64_t naive = naive_count_oracle(config, s, B, 2 * R);
    if (fast != naive) {
      std::ostringstream os;
      os << "pruned enumeration disagrees with the naive scan for " << (config.name.empty() ? "config" : config.name)
         << ", s = " << s.to_string() << ", B = " << to_string(B) << ": " << fast << " vs " << naive
         << " (radius " << R << ", kappa " << pb.kappa << ")";
      throw NumericalError(os.str());
    }
  }
}

CountSeries count_series(const SurfaceConfig& config, const PicardVector& s, const std::vector<Rational>& grid,
                         const CountOptions& opts) {
  check_grid(grid);
  CountSeries out;
  out.config_name = config.name;
  out.bundle = s;
  out.grid = grid;
  if (opts.naive_radius) {
    out.pruned = false;
    out.radius = *opts.naive_radius;
    for (const auto& B : grid) out.counts.push_back(naive_count_oracle(config, s, B, *opts.naive_radius));
    return out;
  }
  PruningBound pb = pruning_bound(config, s);
  if (!pb.available)
    throw PreconditionError("no pruning bound for s = " + s.to_string() + " (" + pb.reason +
                            "); supply an explicit naive radius");
  if (opts.validate_pruning) {
    std::string key = validation_key(config, s);
    bool done;
    {
      std::lock_guard<std::mutex> lock(g_validated_mu);
      done = g_validated.count(key) > 0;
    }
    if (!done) {
      validate_pruning(config, s);
      std::lock_guard<std::mutex> lock(g_validated_mu);
      g_validated.insert(key);
    }
  }
  out.radius = pruning_radius(config, s, grid.back());
  out.counts = sweep_counts(config, s, grid, out.radius, opts.shards);
  return out;
}

std::int64_t enumerate_count(const SurfaceConfig& config, const PicardVector& s, const Rational& B,
                             const CountOptions& opts) {
  return count_series(config, s, {B}, opts).counts.front();
}

ZetaPartial zeta_partial(const SurfaceConfig& config, const PicardVector& s, const Rational& B, double extension,
                         const CountOptions& opts) {
  const int r = config.r();
  if (s.size() != r + 1) throw PreconditionError("Picard vector length does not match configuration");
  if (!(s.real(0) > 2)) throw PreconditionError("zeta sum needs Re s_0 > 2");
  for (int k = 1; k <= r; ++k)
    if (!(s.real(k) > 1)) throw PreconditionError("zeta sum needs Re s_k > 1");
  if (!(extension >= 1)) throw PreconditionError("extension factor must be >= 1");
  PicardVector sr(s.re);
  std::vector<Rational> grid{B};
  if (extension > 1) {
    Rational ext(extension);
    grid.push_back(B * ext);
  }
  PruningBound pb = pruning_bound(config, sr);
  if (!pb.available) throw PreconditionError("no pruning bound for s = " + sr.to_string() + ": " + pb.reason);
  if (opts.validate_pruning) validate_pruning(config, sr);
  const long radius = pruning_radius(config, sr, grid.back());
  Sweeper sw(config, sr, grid, radius, pb);

  // complex log H(s;x) = s_0 log H_O1 - sum_k e_k log H_k with
  // H_k = gcd(c, l_k) sqrt(Q / N_k^2)
  std::vector<std::complex<double>> ec;
  for (int k = 1; k <= r; ++k) ec.push_back(s[0] - s[k]);
  const std::complex<double> s0 = s[0];

  const int shards = std::max(1, opts.shards);
  std::vector<SweepResult> parts(static_cast<std::size_t>(shards));
  for (auto& p : parts) p.buckets.assign(grid.size(), 0);
  run_shards(shards, radius, [&](int j, long c) {
    auto& out = parts[static_cast<std::size_t>(j)];
    sw.visit(c, [&](long, long, long, const Components& x, std::size_t i) {
      double lq = 0.5 * std::log(static_cast<double>(x.Q));
      std::complex<double> lh = s0 * lq;
      for (int k = 0; k < r; ++k)
        lh -= ec[k] * (std::log(static_cast<double>(x.g[k])) + lq - 0.5 * std::log(static_cast<double>(x.N2[k])));
      std::complex<double> v = std::exp(-lh);
      out.re[i].add(v.real());
      out.im[i].add(v.imag());
      ++out.buckets[i];
    });
  });
  ZetaPartial z;
  Neumaier re[2], im[2];
  std::int64_t n[2] = {0, 0};
  for (const auto& p : parts)
    for (std::size_t i = 0; i < grid.size(); ++i) {
      re[i].add(p.re[i].value());
      im[i].add(p.im[i].value());
      n[i] += p.buckets[i];
    }
  z.direct = {re[0].value(), im[0].value()};
  z.points_direct = n[0];
  z.points_total = n[0] + n[1];
  z.B_ext = grid.back().get_d();
  if (grid.size() > 1) z.shell = {re[1].value(), im[1].value()};

  // N(X) ~ c X^a (log X)^b with a = max(3/s_0, 2/s_k) and b + 1 the number of
  // coordinates attaining it; then sum_{H > X} H^{-1} ~ N(X)/X (a/(1-a) + b/((1-a)^2 log X)).
  double a = 3.0 / sr.real(0);
  int attain = 1;
  for (int k = 1; k <= r; ++k) {
    double ak = 2.0 / sr.real(k);
    if (std::abs(ak - a) < 1e-12) ++attain;
    else if (ak > a) {
      a = ak;
      attain = 1;
    }
  }
  z.growth_exponent = a;
  z.log_power = attain - 1;
  const double X = z.B_ext;
  double est = static_cast<double>(z.points_total) / X *
               (a / (1 - a) + z.log_power / ((1 - a) * (1 - a) * std::log(X)));
  if (s.is_real()) z.remainder = est;
  z.tail_bound = std::abs(est);
  return z;
}

std::string series_csv(const CountSeries& series) {
  std::string out = "B,N\n";
  for (std::size_t i = 0; i < series.grid.size(); ++i) {
    const Rational& B = series.grid[i];
    out += (B.get_den() == 1 ? B.get_num().get_str() : to_string(B)) + "," + std::to_string(series.counts[i]) + "\n";
  }
  return out;
}

}  // namespace hzeta
