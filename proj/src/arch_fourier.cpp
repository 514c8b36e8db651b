#include "hzeta/arch_fourier.hpp"

#include <algorithm>
#include <cmath>

#include "hzeta/errors.hpp"
#include "hzeta/numerics.hpp"

namespace hzeta {

namespace {

// log H_inf(s;x)^{-1} = -s_0/2 log X + sum_k e_k/2 (log X - log(1 + l_k^2)), X = 1 + |x|^2
class InverseHeight {
 public:
  InverseHeight(const SurfaceConfig& config, const PicardVector& s) : forms_(config.forms) {
    if (s.size() != config.r() + 1) throw PreconditionError("Picard vector length does not match configuration");
    cX_ = -0.5 * s[0];
    for (int k = 1; k < s.size(); ++k) {
      std::complex<double> e = s[0] - s[k];
      cX_ += 0.5 * e;
      cL_.push_back(-0.5 * e);
    }
    real_ = s.is_real();
  }

  std::complex<double> operator()(double x1, double x2) const {
    std::complex<double> lg = cX_ * std::log1p(x1 * x1 + x2 * x2);
    for (std::size_t k = 0; k < forms_.size(); ++k) {
      double l = forms_[k].u * x1 + forms_[k].v * x2;
      lg += cL_[k] * std::log1p(l * l);
    }
    if (real_) return std::exp(lg.real());
    return std::exp(lg);
  }

  bool real() const { return real_; }

 private:
  std::vector<LinearForm> forms_;
  std::complex<double> cX_;
  std::vector<std::complex<double>> cL_;
  bool real_ = true;
};

void require_domain(const SurfaceConfig& config, const PicardVector& s) {
  if (s.size() != config.r() + 1) throw PreconditionError("Picard vector length does not match configuration");
  if (!(s.real(0) > 2)) throw PreconditionError("archimedean integral needs Re s_0 > 2");
  for (int k = 1; k < s.size(); ++k)
    if (!(s.real(k) > 1)) throw PreconditionError("archimedean integral needs Re s_k > 1");
}

std::vector<double> sorted_points(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > 1e-12) out.push_back(x);
  return out;
}

// One real component (0 = real part, 1 = imaginary part) of the polar rule over
// the half plane 0 <= theta < pi, doubled by x -> -x symmetry.
ArchValue polar_component(const SurfaceConfig& config, const InverseHeight& f, double s0_re, int part,
                          double rel_tol) {
  std::vector<double> angles{0.0, M_PI};
  for (const auto& l : config.forms) {
    double t = std::atan2(-static_cast<double>(l.u), static_cast<double>(l.v));
    if (t < 0) t += M_PI;
    if (t >= M_PI) t -= M_PI;
    angles.push_back(t);
  }
  angles = sorted_points(angles);

  QuadratureOptions inner_opts;
  inner_opts.rel_tol = rel_tol * 0.1;
  inner_opts.abs_tol = 1e-15;
  inner_opts.singular = true;
  QuadratureOptions outer_opts;
  outer_opts.rel_tol = rel_tol;
  outer_opts.abs_tol = 1e-14;
  outer_opts.singular = true;

  double inner_err = 0;
  long evals = 0;
  // Along a ray the integrand is smooth up to the transitions rho_k = 1/|L_k(theta)|
  // and behaves like rho^{1-s_0} beyond them. The tail rho = rho* w^{-1/(s_0-2)}
  // makes that part constant in w.
  const double tail_exp = 1.0 / (s0_re - 2);
  auto ray = [&](double theta) {
    const double ct = std::cos(theta), st = std::sin(theta);
    double rho_max = 1;
    std::vector<double> logs{0.0};
    for (const auto& l : config.forms) {
      double L = std::abs(l.u * ct + l.v * st);
      if (L > 0 && L < 1) {
        logs.push_back(-std::log(L));
        rho_max = std::max(rho_max, 1 / L);
      }
    }
    const double rho_star = 4 * rho_max;
    logs.push_back(std::log(rho_star));
    logs = sorted_points(logs);
    auto value = [&](double rho) {
      std::complex<double> v = f(rho * ct, rho * st);
      return part == 0 ? v.real() : v.imag();
    };
    Quadrature q = integrate([&](double rho) { return value(rho) * rho; }, 0.0, 1.0, inner_opts);
    Quadrature q2 = integrate_pieces(
        [&](double t) {
          double rho = std::exp(t);
          return value(rho) * rho * rho;
        },
        logs, inner_opts);
    Quadrature q3 = integrate(
        [&](double w) {
          double rho = rho_star * std::pow(w, -tail_exp);
          return value(rho) * rho * rho * tail_exp / w;
        },
        0.0, 1.0, inner_opts);
    double err = q.abs_error + q2.abs_error + q3.abs_error;
    inner_err = std::max(inner_err, err);
    evals += q.evaluations + q2.evaluations + q3.evaluations;
    return q.value + q2.value + q3.value;
  };
  Quadrature q = integrate_pieces(ray, angles, outer_opts);
  ArchValue out;
  out.value = 2 * q.value;
  out.abs_error = 2 * (q.abs_error + M_PI * inner_err);
  out.evaluations = evals;
  return out;
}

// x_1 = tan(phi_1), x_2 = sqrt(1 + x_1^2) tan(phi_2) on 0 < phi_1 < pi/2, doubled
// by symmetry. The scaling keeps the turnover of each column at phi_2 = +-pi/4.
ArchValue cartesian_component(const SurfaceConfig& config, const InverseHeight& f, int part, double rel_tol) {
  QuadratureOptions inner_opts;
  inner_opts.rel_tol = rel_tol * 0.1;
  inner_opts.abs_tol = 1e-15;
  inner_opts.singular = true;
  QuadratureOptions outer_opts;
  outer_opts.rel_tol = rel_tol;
  outer_opts.abs_tol = 1e-14;
  outer_opts.singular = true;

  double inner_err = 0;
  long evals = 0;
  auto column = [&](double phi1) {
    const double x1 = std::tan(phi1);
    const double sec1 = 1 + x1 * x1;
    const double S = std::sqrt(sec1);
    std::vector<double> pts{-M_PI / 2, -M_PI / 4, 0.0, M_PI / 4, M_PI / 2};
    for (const auto& l : config.forms)
      if (l.v != 0) pts.push_back(std::atan(-static_cast<double>(l.u) * x1 / (static_cast<double>(l.v) * S)));
    pts = sorted_points(pts);
    auto F = [&](double phi2) {
      double t = std::tan(phi2);
      std::complex<double> v = f(x1, S * t);
      return (part == 0 ? v.real() : v.imag()) * sec1 * S * (1 + t * t);
    };
    Quadrature q = integrate_pieces(F, pts, inner_opts);
    inner_err = std::max(inner_err, q.abs_error);
    evals += q.evaluations;
    return q.value;
  };
  Quadrature q = integrate(column, 0.0, M_PI / 2, outer_opts);
  ArchValue out;
  out.value = 2 * q.value;
  out.abs_error = 2 * (q.abs_error + M_PI / 2 * inner_err);
  out.evaluations = evals;
  return out;
}

// Smooth step: 1 on [0, flat], 0 beyond outer.
double window(double t, double flat, double outer) {
  t = std::abs(t);
  if (t <= flat) return 1;
  if (t >= outer) return 0;
  double y = (outer - t) / (outer - flat);
  return 1 / (1 + std::exp(1 / y - 1 / (1 - y)));
}

}  // namespace

std::complex<double> arch_inverse_height(const SurfaceConfig& config, const PicardVector& s, double x1, double x2) {
  return InverseHeight(config, s)(x1, x2);
}

ArchValue arch_integral(const SurfaceConfig& config, const PicardVector& s, PlaneRule rule, double rel_tol) {
  require_domain(config, s);
  InverseHeight f(config, s);
  auto run = [&](int part) {
    return rule == PlaneRule::polar ? polar_component(config, f, s.real(0), part, rel_tol)
                                    : cartesian_component(config, f, part, rel_tol);
  };
  ArchValue re = run(0);
  if (f.real()) return re;
  ArchValue im = run(1);
  ArchValue out;
  out.value = {re.value.real(), im.value.real()};
  out.abs_error = std::hypot(re.abs_error, im.abs_error);
  out.evaluations = re.evaluations + im.evaluations;
  return out;
}

ArchTransformTable::ArchTransformTable(const SurfaceConfig& config, const PicardVector& s, int a_max,
                                       const TrapezoidWindow& win)
    : a_max_(a_max) {
  require_domain(config, s);
  if (a_max < 0) throw PreconditionError("a_max must be nonnegative");
  const double inv = 1 / win.step;
  const long M = std::lround(inv);
  if (M < 4 || std::abs(inv - static_cast<double>(M)) > 1e-9)
    throw PreconditionError("trapezoid step must be 1/M for an integer M >= 4");
  // the sum at a picks up Hhat(a - M j); those must lie far out in the decay
  if (M - a_max < 8) throw PreconditionError("trapezoid step too coarse for a_max");
  if (!(win.flat < win.outer && win.flat_alt < win.outer_alt))
    throw PreconditionError("window must satisfy flat < outer");

  const std::size_t A = static_cast<std::size_t>(a_max);
  const std::size_t side = 2 * A + 1;
  values_.assign(side * side, 0);
  errors_.assign(side * side, 0);
  if (a_max > 0) {
    InverseHeight f(config, s);
    const double outer = std::max(win.outer, win.outer_alt);
    const long N = static_cast<long>(std::ceil(outer * static_cast<double>(M)));
    std::vector<double> cs(static_cast<std::size_t>(M)), sn(static_cast<std::size_t>(M));
    for (long j = 0; j < M; ++j) {
      cs[static_cast<std::size_t>(j)] = std::cos(2 * M_PI * static_cast<double>(j) / static_cast<double>(M));
      sn[static_cast<std::size_t>(j)] = std::sin(2 * M_PI * static_cast<double>(j) / static_cast<double>(M));
    }
    auto phase = [&](long a, long i) {
      long k = (a * i) % M;
      if (k < 0) k += M;
      return static_cast<std::size_t>(k);
    };
    std::vector<double> w1(static_cast<std::size_t>(2 * N + 1)), w2(w1.size());
    for (long i = -N; i <= N; ++i) {
      double x = static_cast<double>(i) / static_cast<double>(M);
      w1[static_cast<std::size_t>(i + N)] = window(x, win.flat, win.outer);
      w2[static_cast<std::size_t>(i + N)] = window(x, win.flat_alt, win.outer_alt);
    }
    // E[w][i1][a2] = sum_{i2} g_w(x1, x2) e^{-2 pi i a2 x2}
    std::vector<std::complex<double>> E1((2 * N + 1) * (A + 1)), E2(E1.size());
    std::vector<std::complex<double>> g1(static_cast<std::size_t>(2 * N + 1)), g2(g1.size());
    for (long i1 = -N; i1 <= N; ++i1) {
      const double x1 = static_cast<double>(i1) / static_cast<double>(M);
      const double wa = w1[static_cast<std::size_t>(i1 + N)], wb = w2[static_cast<std::size_t>(i1 + N)];
      if (wa == 0 && wb == 0) continue;
      for (long i2 = -N; i2 <= N; ++i2) {
        const std::size_t j = static_cast<std::size_t>(i2 + N);
        if (w1[j] * wa == 0 && w2[j] * wb == 0) {
          g1[j] = g2[j] = 0;
          continue;
        }
        std::complex<double> v = f(x1, static_cast<double>(i2) / static_cast<double>(M));
        g1[j] = v * (wa * w1[j]);
        g2[j] = v * (wb * w2[j]);
      }
      const std::size_t row = static_cast<std::size_t>(i1 + N) * (A + 1);
      for (std::size_t a2 = 0; a2 <= A; ++a2) {
        std::complex<double> s1 = 0, s2 = 0;
        for (long i2 = -N; i2 <= N; ++i2) {
          const std::size_t j = static_cast<std::size_t>(i2 + N);
          const std::size_t k = phase(static_cast<long>(a2), i2);
          const std::complex<double> e(cs[k], -sn[k]);
          s1 += g1[j] * e;
          s2 += g2[j] * e;
        }
        E1[row + a2] = s1;
        E2[row + a2] = s2;
      }
    }
    const double h2 = 1.0 / static_cast<double>(M * M);
    for (long a1 = -a_max; a1 <= a_max; ++a1)
      for (long a2 = 0; a2 <= a_max; ++a2) {
        if (a1 == 0 && a2 == 0) continue;
        std::complex<double> s1 = 0, s2 = 0;
        for (long i1 = -N; i1 <= N; ++i1) {
          const std::size_t row = static_cast<std::size_t>(i1 + N) * (A + 1) + static_cast<std::size_t>(a2);
          const std::size_t k = phase(a1, i1);
          const std::complex<double> e(cs[k], -sn[k]);
          s1 += E1[row] * e;
          s2 += E2[row] * e;
        }
        s1 *= h2;
        s2 *= h2;
        double err = std::abs(s1 - s2) + 1e-15;
        values_[index(a1, a2)] = s1;
        errors_[index(a1, a2)] = err;
        values_[index(-a1, -a2)] = s1;
        errors_[index(-a1, -a2)] = err;
      }
  }
  ArchValue zero = arch_integral(config, s, PlaneRule::polar);
  values_[index(0, 0)] = zero.value;
  errors_[index(0, 0)] = zero.abs_error;
}

std::size_t ArchTransformTable::index(long a1, long a2) const {
  if (std::abs(a1) > a_max_ || std::abs(a2) > a_max_) throw PreconditionError("character outside the table");
  const std::size_t side = 2 * static_cast<std::size_t>(a_max_) + 1;
  return static_cast<std::size_t>(a1 + a_max_) * side + static_cast<std::size_t>(a2 + a_max_);
}

std::complex<double> ArchTransformTable::value(long a1, long a2) const { return values_[index(a1, a2)]; }
double ArchTransformTable::error(long a1, long a2) const { return errors_[index(a1, a2)]; }

}  // namespace hzeta
