#include "hzeta/heights.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "hzeta/errors.hpp"

namespace hzeta {

namespace {

long log_max1(const Rational& q, long p) {
  if (q == 0) return 0;
  return std::max(0L, -valuation(q, p));
}

long log_max1_norm(const PrimitiveTriple& x, long p) {
  Rational x1(x.a, x.c), x2(x.b, x.c);
  x1.canonicalize();
  x2.canonicalize();
  return std::max(log_max1(x1, p), log_max1(x2, p));
}

Rational form_value(const LinearForm& f, const PrimitiveTriple& x) {
  Rational q(f.eval(x.a, x.b), x.c);
  q.canonicalize();
  return q;
}

Integer norm_sq(const PrimitiveTriple& x) { return x.a * x.a + x.b * x.b + x.c * x.c; }

Integer gcd_int(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

double log_of(const Integer& n) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, n.get_mpz_t());
  return std::log(m) + static_cast<double>(e) * std::log(2.0);
}

void check_size(const SurfaceConfig& config, const PicardVector& s) {
  if (s.size() != config.r() + 1)
    throw PreconditionError("Picard vector has " + std::to_string(s.size()) + " entries, expected " +
                            std::to_string(config.r() + 1));
}

Integer as_integer(const Rational& q, const char* what) {
  if (q.get_den() != 1) throw DomainError(std::string("non-integral exponent in ") + what);
  return q.get_num();
}

}  // namespace

PicardVector::PicardVector(std::vector<Rational> real_parts)
    : re(std::move(real_parts)), im(re.size(), 0.0) {}

PicardVector::PicardVector(std::vector<Rational> real_parts, std::vector<double> imag_parts)
    : re(std::move(real_parts)), im(std::move(imag_parts)) {
  if (im.size() != re.size()) throw PreconditionError("real and imaginary parts differ in length");
}

PicardVector PicardVector::anticanonical(int r) {
  std::vector<Rational> v(r + 1, Rational(2));
  v[0] = 3;
  return PicardVector(v);
}

PicardVector PicardVector::hyperplane(int r) { return PicardVector(std::vector<Rational>(r + 1, Rational(1))); }

PicardVector PicardVector::parse(const std::string& text) {
  std::vector<Rational> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
  if (v.empty()) throw std::invalid_argument("empty Picard vector");
  return PicardVector(v);
}

std::complex<double> PicardVector::operator[](int i) const { return {re[i].get_d(), im[i]}; }

bool PicardVector::is_real() const {
  for (double x : im)
    if (x != 0.0) return false;
  return true;
}

std::optional<std::vector<long>> PicardVector::integers() const {
  if (!is_real()) return std::nullopt;
  std::vector<long> out;
  for (const Rational& q : re) {
    if (q.get_den() != 1 || !q.get_num().fits_slong_p()) return std::nullopt;
    out.push_back(q.get_num().get_si());
  }
  return out;
}

bool PicardVector::effective() const {
  for (const Rational& q : re)
    if (q < 0) return false;
  return true;
}

bool PicardVector::ample() const {
  // Kleiman: positive on the generators D_0, D_k of the cone of curves, with
  // D_0^2 = 1 - r, D_0.D_k = 1, D_k^2 = -1.
  if (!is_real()) return false;
  const int r = size() - 1;
  Rational on_d0 = re[0] * (1 - r);
  for (int k = 1; k <= r; ++k) {
    if (re[0] - re[k] <= 0) return false;
    on_d0 += re[k];
  }
  return on_d0 > 0;
}

PicardVector PicardVector::operator+(const PicardVector& o) const {
  if (o.size() != size()) throw PreconditionError("Picard vectors differ in length");
  PicardVector out = *this;
  for (int i = 0; i < size(); ++i) {
    out.re[i] += o.re[i];
    out.im[i] += o.im[i];
  }
  return out;
}

std::string PicardVector::to_string() const {
  std::string out = "(";
  for (int i = 0; i < size(); ++i) {
    if (i) out += ",";
    Rational q = re[i];
    q.canonicalize();
    out += q.get_den() == 1 ? q.get_num().get_str() : hzeta::to_string(q);
    if (im[i] != 0.0) {
      std::ostringstream os;
      os.precision(12);
      os << (im[i] >= 0 ? "+" : "") << im[i] << "i";
      out += os.str();
    }
  }
  return out + ")";
}

double HeightValue::value() const { return finite_part.get_d() * std::sqrt(arch_sq.get_d()); }

HeightValue HeightValue::operator*(const HeightValue& o) const {
  HeightValue h{finite_part * o.finite_part, arch_sq * o.arch_sq};
  h.finite_part.canonicalize();
  h.arch_sq.canonicalize();
  return h;
}

HeightValue HeightValue::inverse() const {
  HeightValue h{1 / finite_part, 1 / arch_sq};
  h.finite_part.canonicalize();
  h.arch_sq.canonicalize();
  return h;
}

PAdicValue local_height_finite(const SurfaceConfig& config, int k, const PrimitiveTriple& x, long p) {
  if (k < 0 || k > config.r()) throw PreconditionError("divisor index out of range");
  long ex = log_max1_norm(x, p);
  auto log_hk = [&](int j) { return ex - log_max1(form_value(config.forms[j - 1], x), p); };
  long e = 0;
  if (k == 0) {
    e = ex;
    for (int j = 1; j <= config.r(); ++j) e -= log_hk(j);
  } else {
    e = log_hk(k);
  }
  return PAdicValue{p, -e};
}

HeightValue local_height_arch(const SurfaceConfig& config, int k, const PrimitiveTriple& x) {
  if (k < 0 || k > config.r()) throw PreconditionError("divisor index out of range");
  Rational x1(x.a, x.c), x2(x.b, x.c);
  x1.canonicalize();
  x2.canonicalize();
  Rational top = 1 + x1 * x1 + x2 * x2;
  auto factor = [&](int j) {
    Rational l = form_value(config.forms[j - 1], x);
    Rational q = top / (1 + l * l);
    q.canonicalize();
    return q;
  };
  HeightValue h;
  if (k == 0) {
    h.arch_sq = top;
    for (int j = 1; j <= config.r(); ++j) h.arch_sq /= factor(j);
  } else {
    h.arch_sq = factor(k);
  }
  h.arch_sq.canonicalize();
  return h;
}

HeightValue global_height_component(const SurfaceConfig& config, int k, const PrimitiveTriple& x) {
  if (k < 0 || k > config.r()) throw PreconditionError("divisor index out of range");
  if (k == 0) {
    HeightValue h = height_o1(x);
    for (int j = 1; j <= config.r(); ++j) h = h * global_height_component(config, j, x).inverse();
    return h;
  }
  Integer l = config.forms[k - 1].eval(x.a, x.b);
  HeightValue h;
  h.finite_part = Rational(gcd_int(x.c, l));
  h.arch_sq = Rational(norm_sq(x), x.c * x.c + l * l);
  h.arch_sq.canonicalize();
  return h;
}

HeightValue global_height_by_places(const SurfaceConfig& config, int k, const PrimitiveTriple& x) {
  HeightValue h = local_height_arch(config, k, x);
  if (x.c > 1) {
    for (long p : prime_divisors(x.c)) {
      PAdicValue v = local_height_finite(config, k, x, p);
      h.finite_part *= v.value();
    }
  }
  h.finite_part.canonicalize();
  return h;
}

HeightValue height_o1(const PrimitiveTriple& x) { return HeightValue{Rational(1), Rational(norm_sq(x))}; }

std::complex<double> inverse_height_bundle(const SurfaceConfig& config, const PicardVector& s,
                                           const PrimitiveTriple& x) {
  check_size(config, s);
  std::complex<double> sigma = s[0];
  std::complex<double> log_h = 0;
  for (int k = 1; k <= config.r(); ++k) {
    std::complex<double> e = s[0] - s[k];
    sigma -= e;
    Integer l = config.forms[k - 1].eval(x.a, x.b);
    double log_ratio = 0.5 * log_of(x.c * x.c + l * l) - log_of(gcd_int(x.c, l));
    log_h += e * log_ratio;
  }
  log_h += 0.5 * sigma * log_of(norm_sq(x));
  return std::exp(-log_h);
}

double height_bundle(const SurfaceConfig& config, const PicardVector& s, const PrimitiveTriple& x) {
  if (!s.is_real()) throw PreconditionError("height_bundle needs a real Picard vector");
  return 1.0 / inverse_height_bundle(config, s, x).real();
}

Rational height_bundle_power(const SurfaceConfig& config, const PicardVector& s, const PrimitiveTriple& x,
                             long n) {
  check_size(config, s);
  if (!s.is_real()) throw PreconditionError("exact heights need a real Picard vector");
  Rational sigma = s.re[0];
  Rational result = 1;
  for (int k = 1; k <= config.r(); ++k) {
    Rational e = s.re[0] - s.re[k];
    sigma -= e;
    Integer l = config.forms[k - 1].eval(x.a, x.b);
    Integer en = as_integer(e * n / 2, "height_bundle_power");
    Integer eg = as_integer(e * n, "height_bundle_power");
    result *= rpow(Rational(x.c * x.c + l * l), en.get_si());
    result /= rpow(Rational(gcd_int(x.c, l)), eg.get_si());
  }
  Integer sn = as_integer(sigma * n / 2, "height_bundle_power");
  result *= rpow(Rational(norm_sq(x)), sn.get_si());
  result.canonicalize();
  return result;
}

Rational anticanonical_height_squared(const SurfaceConfig& config, const PrimitiveTriple& x) {
  Rational h = rpow(Rational(norm_sq(x)), 3 - config.r());
  for (const LinearForm& f : config.forms) {
    Integer l = f.eval(x.a, x.b);
    Integer g = gcd_int(x.c, l);
    h *= Rational(x.c * x.c + l * l, g * g);
  }
  h.canonicalize();
  return h;
}

double pn_height(const std::vector<Integer>& x) {
  if (x.empty()) throw DomainError("empty coordinate vector");
  Integer g = 0, sum = 0;
  for (const Integer& xi : x) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), xi.get_mpz_t());
    sum += xi * xi;
  }
  if (g == 0) throw DomainError("zero vector is not a projective point");
  if (g != 1) throw DomainError("coordinates are not coprime");
  return std::sqrt(sum.get_d());
}

}  // namespace hzeta
