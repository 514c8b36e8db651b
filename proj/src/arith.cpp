#include "hzeta/arith.hpp"

#include <cmath>
#include <stdexcept>

#include "hzeta/errors.hpp"

namespace hzeta {

std::string PrimitiveTriple::to_string() const {
  return "(" + a.get_str() + "," + b.get_str() + "," + c.get_str() + ")";
}

PrimitiveTriple make_triple(const Integer& a, const Integer& b, const Integer& c) {
  if (c == 0) throw DomainError("triple with c = 0 is a point at infinity");
  Integer g = gcd3(a, b, c);
  PrimitiveTriple t{a / g, b / g, c / g};
  if (t.c < 0) {
    t.a = -t.a;
    t.b = -t.b;
    t.c = -t.c;
  }
  return t;
}

PrimitiveTriple normalize_point(const Rational& x1, const Rational& x2) {
  Rational q1 = x1, q2 = x2;
  q1.canonicalize();
  q2.canonicalize();
  Integer d1 = q1.get_den(), d2 = q2.get_den();
  Integer c;
  mpz_lcm(c.get_mpz_t(), d1.get_mpz_t(), d2.get_mpz_t());
  Integer a = q1.get_num() * (c / d1);
  Integer b = q2.get_num() * (c / d2);
  return make_triple(a, b, c);
}

Rational PAdicValue::value() const { return rpow(Rational(prime), -valuation); }

double PAdicValue::to_double() const { return std::pow(static_cast<double>(prime), -valuation); }

long valuation(const Integer& n, long p) {
  if (n == 0) throw DomainError("valuation of 0 is +infinity");
  if (p < 2) throw DomainError("valuation needs a prime >= 2");
  Integer m = abs(n);
  long v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

long valuation(const Rational& q, long p) {
  Rational c = q;
  c.canonicalize();
  if (c == 0) throw DomainError("valuation of 0 is +infinity");
  return valuation(c.get_num(), p) - valuation(c.get_den(), p);
}

PAdicValue abs_p(const Rational& q, long p) { return PAdicValue{p, valuation(q, p)}; }

bool is_prime(long n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (long d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<long> primes_up_to(long n) {
  std::vector<long> out;
  if (n < 2) return out;
  std::vector<char> composite(static_cast<size_t>(n) + 1, 0);
  for (long i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (long j = i * i; j <= n; j += i) composite[j] = 1;
  }
  return out;
}

std::vector<long> prime_divisors(const Integer& n) {
  if (n == 0) throw DomainError("prime divisors of 0");
  Integer m = abs(n);
  std::vector<long> out;
  for (long d = 2; Integer(d) * d <= m; d += (d == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(d))) {
      out.push_back(d);
      while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(d)))
        mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(d));
    }
  }
  if (m > 1) {
    if (!m.fits_slong_p()) throw DomainError("prime divisor exceeds long range");
    out.push_back(m.get_si());
  }
  return out;
}

Rational product_formula_value(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c == 0) throw DomainError("product formula needs q != 0");
  Rational result = abs(c);
  std::vector<long> ps = prime_divisors(c.get_num() * c.get_den());
  for (long p : ps) result *= abs_p(c, p).value();
  return result;
}

Integer gcd3(const Integer& a, const Integer& b, const Integer& c) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational rpow(const Rational& base, long e) {
  if (e >= 0) {
    Rational r(ipow(base.get_num(), static_cast<unsigned long>(e)),
               ipow(base.get_den(), static_cast<unsigned long>(e)));
    r.canonicalize();
    return r;
  }
  if (base == 0) throw DomainError("negative power of zero");
  Rational r(ipow(base.get_den(), static_cast<unsigned long>(-e)),
             ipow(base.get_num(), static_cast<unsigned long>(-e)));
  r.canonicalize();
  return r;
}

Rational parse_rational(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ' && ch != '\t') t.push_back(ch);
  if (t.empty()) throw std::invalid_argument("empty rational");
  auto dot = t.find('.');
  auto exp = t.find_first_of("eE");
  if (dot == std::string::npos && exp == std::string::npos) {
    Rational r;
    if (r.set_str(t, 10) != 0) throw std::invalid_argument("not a rational: " + text);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    r.canonicalize();
    return r;
  }
  // finite decimal with optional exponent
  std::string mant = exp == std::string::npos ? t : t.substr(0, exp);
  long e10 = exp == std::string::npos ? 0 : std::stol(t.substr(exp + 1));
  bool neg = !mant.empty() && mant[0] == '-';
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) mant = mant.substr(1);
  auto d = mant.find('.');
  std::string digits = mant;
  if (d != std::string::npos) {
    digits = mant.substr(0, d) + mant.substr(d + 1);
    e10 -= static_cast<long>(mant.size() - d - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("not a decimal: " + text);
  Rational r{Integer(digits)};
  r *= rpow(Rational(10), e10);
  if (neg) r = -r;
  return r;
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

}  // namespace hzeta
