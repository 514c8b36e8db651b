#include "hzeta/constants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "hzeta/arch_fourier.hpp"
#include "hzeta/errors.hpp"
#include "hzeta/numerics.hpp"
#include "hzeta/padic_oracle.hpp"

namespace hzeta {

namespace {

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// sum_{j >= 2} |c_j| for (1-y)^{r+1} (1 + (r+1) y + y^2) = 1 + sum_j c_j y^j,
// so that |factor - 1| <= C / p^2 at good primes.
double density_majorant(int r) {
  std::vector<Integer> poly{1, r + 1, 1};
  for (int i = 0; i < r + 1; ++i) {
    std::vector<Integer> next(poly.size() + 1, 0);
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j] += poly[j];
      next[j + 1] -= poly[j];
    }
    poly = next;
  }
  if (poly[1] != 0) throw NumericalError("density expansion has a linear term");
  double C = 0;
  for (std::size_t j = 2; j < poly.size(); ++j) C += std::abs(poly[j].get_d());
  return C;
}

}  // namespace

Estimate arch_density(const SurfaceConfig& config) {
  PicardVector s = PicardVector::anticanonical(config.r());
  ArchValue a = arch_integral(config, s, PlaneRule::polar, 1e-10);
  ArchValue b = arch_integral(config, s, PlaneRule::cartesian, 1e-10);
  Estimate e;
  e.value = a.value.real();
  e.abs_error = a.abs_error + std::abs(a.value - b.value);
  if (!(e.value > 0) || e.abs_error > 1e-6 * e.value)
    throw NumericalError("archimedean density did not converge: polar " + std::to_string(a.value.real()) + " +- " +
                         std::to_string(a.abs_error) + ", cartesian " + std::to_string(b.value.real()) + " +- " +
                         std::to_string(b.abs_error));
  return e;
}

Rational tamagawa_factor(const SurfaceConfig& config, long p) {
  LocalFactor d = local_ft_trivial(config, p, PicardVector::anticanonical(config.r()));
  Rational f = rpow(Rational(p - 1, p), config.r() + 1) * *d.exact;
  f.canonicalize();
  return f;
}

TamagawaValue tamagawa(const SurfaceConfig& config, long p_max) {
  const int r = config.r();
  if (!config.bad_primes.empty() && p_max < config.bad_primes.back())
    throw PreconditionError("p_max must be at least the largest bad prime");
  const double C = density_majorant(r);
  if (C / (static_cast<double>(p_max) * static_cast<double>(p_max)) > 0.5)
    throw PreconditionError("p_max too small for the density tail bound");
  const PicardVector s = PicardVector::anticanonical(r);

  TamagawaValue out;
  out.arch = arch_density(config);
  long double good = 1, bad = 1, bad_abs_plus = 1;
  for (long p : primes_up_to(p_max)) {
    if (config.is_bad(p)) {
      OracleResult o = local_ft_oracle(config, p, s, 0, 0);
      double conv = std::pow(1 - 1.0 / static_cast<double>(p), r + 1);
      double v = o.value.real() * conv;
      bad *= v;
      bad_abs_plus *= std::abs(v) + o.tail_bound * conv;
      out.euler.oracle_primes.push_back(p);
    } else {
      good *= static_cast<long double>(tamagawa_factor(config, p).get_d());
    }
  }
  // sum_{p > P} |log f_p| <= sum_{m > P} 2 C / m^2 <= 2 C / P
  const double T = 2 * C / static_cast<double>(p_max);
  const double eT = std::exp(T);
  const double babs = std::abs(static_cast<double>(bad));
  out.euler.value = static_cast<double>(good * bad);
  out.euler.truncation_prime = p_max;
  out.euler.truncation_error_bound =
      std::abs(static_cast<double>(good)) * ((static_cast<double>(bad_abs_plus) - babs) * eT + babs * (eT - 1));
  const double ev = out.euler.value.real();
  out.value = out.arch.value * ev;
  out.error_bound = out.arch.value * out.euler.truncation_error_bound +
                    out.arch.abs_error * (std::abs(ev) + out.euler.truncation_error_bound);
  return out;
}

ConstantReport peyre_constant(const SurfaceConfig& config, long p_max) {
  const int r = config.r();
  TamagawaValue t = tamagawa(config, p_max);
  ConstantReport rep;
  rep.config_name = config.name;
  rep.r = r;
  rep.tau_arch = t.arch;
  rep.euler = t.euler;
  rep.tamagawa = t.value;
  rep.tamagawa_error = t.error_bound;
  rep.alpha = Rational(1, 3 * (1L << r));
  rep.alpha.canonicalize();
  rep.theta = rep.alpha.get_d() * t.value;
  rep.predicted_leading_coeff = rep.theta / factorial(r);
  return rep;
}

double pn_residue(int n) {
  if (n < 1) throw PreconditionError("n must be positive");
  double lg = log_gamma(0.5).real() - log_gamma(0.5 * (n + 1)).real();
  return std::pow(M_PI, n / 2.0) * std::exp(lg) / zeta(n + 1.0);
}

FitResult fit_leading(const CountSeries& series, int r) {
  if (r < 0) throw PreconditionError("degree must be nonnegative");
  const std::size_t n = series.grid.size();
  if (series.counts.size() != n) throw PreconditionError("series grid and counts differ in length");
  if (n < static_cast<std::size_t>(r + 3))
    throw PreconditionError("fit needs at least r+3 grid points, got " + std::to_string(n));
  const double span = std::log10(series.grid.back().get_d() / series.grid.front().get_d());
  if (span < 3 - 1e-9) throw PreconditionError("grid spans fewer than 3 decades");

  auto fit = [&](std::size_t first) {
    std::vector<std::vector<double>> rows;
    std::vector<double> y, w;
    for (std::size_t i = first; i < n; ++i) {
      if (series.counts[i] <= 0) throw PreconditionError("fit needs positive counts");
      const double B = series.grid[i].get_d();
      const double L = std::log(B);
      std::vector<double> row;
      double x = 1;
      for (int j = 0; j <= r; ++j) {
        row.push_back(x);
        x *= L;
      }
      rows.push_back(row);
      const double v = static_cast<double>(series.counts[i]) / B;
      y.push_back(v);
      w.push_back(1 / (v * v));
    }
    LinearFit lf = least_squares(rows, y, w);
    if (!(lf.condition < 1e12)) throw NumericalError("grid too narrow: design matrix is ill-conditioned");
    return lf;
  };

  LinearFit lf = fit(0);
  FitResult out;
  out.degree = r;
  out.coefficients = lf.coefficients;
  out.leading_estimate = lf.coefficients.back();
  out.residual = lf.residual;
  out.condition = lf.condition;
  for (std::size_t drop = 1; drop <= 3; ++drop) {
    if (n - drop < static_cast<std::size_t>(r + 2)) break;
    out.stability_trace.push_back(fit(drop).coefficients.back());
  }
  return out;
}

PoissonReport poisson_check(const SurfaceConfig& config, const PicardVector& s, const Rational& B_direct, int a_max,
                            long p_max, const PoissonOptions& opts) {
  const int r = config.r();
  if (s.size() != r + 1) throw PreconditionError("Picard vector length does not match configuration");
  if (!(s.real(0) > 3)) throw PreconditionError("Poisson check needs Re s_0 > 3");
  for (int k = 1; k <= r; ++k)
    if (!(s.real(k) > 2)) throw PreconditionError("Poisson check needs Re s_k > 2");
  if (a_max < 0) throw PreconditionError("a_max must be nonnegative");

  PoissonReport rep;
  CountOptions co;
  co.shards = opts.shards;
  rep.zeta = zeta_partial(config, s, B_direct, opts.extension, co);
  rep.lhs = rep.zeta.estimate();
  rep.lhs_tail = rep.zeta.tail_bound;

  ArchTransformTable arch(config, s, a_max);
  OracleCache cache(config);

  const std::vector<long> primes = primes_up_to(p_max);
  std::unordered_map<long, std::size_t> prime_index;
  for (std::size_t i = 0; i < primes.size(); ++i) prime_index[primes[i]] = i;
  // closed factors depend on the character only through its kind
  std::map<std::pair<CharacterKind, int>, std::vector<LocalFactor>> closed;
  auto closed_factors = [&](const CharacterClass& cls) -> const std::vector<LocalFactor>& {
    auto key = std::make_pair(cls.kind, cls.special_index);
    auto it = closed.find(key);
    if (it != closed.end()) return it->second;
    CharacterClass pure = cls;
    pure.bad_set.clear();
    std::vector<LocalFactor> v;
    for (long p : primes)
      v.push_back(config.is_bad(p) ? LocalFactor{} : local_ft_closed(config, p, s, pure));
    return closed.emplace(key, std::move(v)).first->second;
  };

  std::vector<std::complex<double>> shell(static_cast<std::size_t>(a_max) + 1, 0);
  std::vector<double> shell_abs(static_cast<std::size_t>(a_max) + 1, 0);
  try {
    // a and -a give equal terms (the heights are even), so one of each pair
    for (long a1 = 0; a1 <= a_max; ++a1)
      for (long a2 = (a1 == 0 ? 0 : -a_max); a2 <= a_max; ++a2) {
        CharacterClass cls = classify_character(config, a1, a2);
        const auto& table = closed_factors(cls);
        auto good = [&](long p) { return table[prime_index.at(p)]; };
        auto bad = [&](long p) {
          ++rep.oracle_factors;
          return cache.evaluate(p, s, a1, a2, opts.alpha_max).as_factor(p);
        };
        EulerProductValue e = euler_product(config, s, cls, p_max, bad, good);
        const std::complex<double> h = arch.value(a1, a2);
        const double herr = arch.error(a1, a2);
        const double mult = (a1 == 0 && a2 == 0) ? 1 : 2;
        const std::complex<double> term = mult * e.value * h;
        const std::size_t A = static_cast<std::size_t>(std::max(std::abs(a1), std::abs(a2)));
        shell[A] += term;
        shell_abs[A] += std::abs(term);
        rep.rhs_euler_error += mult * e.truncation_error_bound * (std::abs(h) + herr);
        rep.rhs_arch_error += mult * std::abs(e.value) * herr;
        rep.characters += (mult == 1 ? 1 : 2);
      }
  } catch (const TruncationTooDeep& ex) {
    rep.incomplete = true;
    rep.diagnostic = ex.what();
  } catch (const IncompleteInput& ex) {
    rep.incomplete = true;
    rep.diagnostic = ex.what();
  }
  std::complex<double> acc = 0;
  for (const auto& v : shell) {
    acc += v;
    rep.rhs_by_amax.push_back(acc);
  }
  rep.rhs = acc;
  // beyond a_max: geometric continuation of the last two shells when they
  // decrease, otherwise a_max more shells of the last size
  if (a_max >= 2) {
    const double last = shell_abs[static_cast<std::size_t>(a_max)];
    const double prev = shell_abs[static_cast<std::size_t>(a_max) - 1];
    const double q = prev > 0 ? last / prev : 1;
    rep.rhs_character_tail = q < 1 ? last * q / (1 - q) : last * a_max;
  } else if (a_max == 1) {
    rep.rhs_character_tail = shell_abs[1];
  } else {
    rep.rhs_character_tail = std::numeric_limits<double>::infinity();
  }
  rep.rhs_tail = rep.rhs_euler_error + rep.rhs_arch_error + rep.rhs_character_tail;
  return rep;
}

GrowthReport bad_factor_growth(const SurfaceConfig& config, const PicardVector& s, const std::vector<long>& bounds,
                               double tail_target) {
  if (bounds.size() < 2) throw PreconditionError("growth fit needs at least two bounds");
  std::vector<long> sorted = bounds;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 1) throw PreconditionError("bounds must be positive");
  const long amax = sorted.back();
  OracleCache cache(config);
  std::map<long, int> depth;
  std::vector<double> shell_max(static_cast<std::size_t>(amax) + 1, 0);
  for (long a1 = 0; a1 <= amax; ++a1)
    for (long a2 = (a1 == 0 ? 1 : -amax); a2 <= amax; ++a2) {
      CharacterClass cls = classify_character(config, a1, a2);
      double prod = 1;
      for (long p : cls.bad_set) {
        auto it = depth.find(p);
        if (it == depth.end()) it = depth.emplace(p, default_alpha_max(config, p, s, tail_target)).first;
        prod *= std::abs(cache.evaluate(p, s, a1, a2, it->second).value);
      }
      const std::size_t A = static_cast<std::size_t>(std::max(std::abs(a1), std::abs(a2)));
      shell_max[A] = std::max(shell_max[A], prod);
    }
  GrowthReport out;
  double running = 0;
  std::size_t next = 0;
  for (long A = 1; A <= amax; ++A) {
    running = std::max(running, shell_max[static_cast<std::size_t>(A)]);
    while (next < sorted.size() && sorted[next] == A) {
      out.bounds.push_back(A);
      out.max_product.push_back(running);
      ++next;
    }
  }
  std::vector<std::vector<double>> rows;
  std::vector<double> y, w;
  for (std::size_t i = 0; i < out.bounds.size(); ++i) {
    if (!(out.max_product[i] > 0)) throw NumericalError("vanishing bad-prime product");
    rows.push_back({1.0, std::log(static_cast<double>(out.bounds[i]))});
    y.push_back(std::log(out.max_product[i]));
    w.push_back(1.0);
  }
  out.slope = least_squares(rows, y, w).coefficients[1];
  return out;
}

}  // namespace hzeta
