#pragma once

// Exact integer and rational primitives: primitive triples, p-adic valuations,
// prime utilities and the product formula.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace hzeta {

using Integer = mpz_class;
using Rational = mpq_class;

/// A point x = (a/c, b/c) of the affine plane, stored as the unique primitive
/// triple with c >= 1 and gcd(a, b, c) = 1.
struct PrimitiveTriple {
  Integer a;
  Integer b;
  Integer c;

  bool operator==(const PrimitiveTriple& o) const { return a == o.a && b == o.b && c == o.c; }
  std::string to_string() const;
};

/// Builds a triple from arbitrary integers (c != 0), dividing out the gcd and
/// moving the sign onto a and b.
PrimitiveTriple make_triple(const Integer& a, const Integer& b, const Integer& c);

/// Returns the primitive triple representing (x1, x2).
PrimitiveTriple normalize_point(const Rational& x1, const Rational& x2);

/// |q|_p = prime^(-valuation).
struct PAdicValue {
  long prime = 2;
  long valuation = 0;

  Rational value() const;
  double to_double() const;
  bool operator==(const PAdicValue& o) const { return prime == o.prime && valuation == o.valuation; }
};

/// v_p(q); throws DomainError for q = 0.
long valuation(const Rational& q, long p);
long valuation(const Integer& n, long p);

/// |q|_p as an exact power of p.
PAdicValue abs_p(const Rational& q, long p);

bool is_prime(long n);
std::vector<long> primes_up_to(long n);

/// Distinct prime divisors of |n| by trial division, ascending. n = 0 is a DomainError.
std::vector<long> prime_divisors(const Integer& n);

/// |q|_inf * prod_{p | num*den} |q|_p, evaluated exactly. Equals 1 for every q != 0.
Rational product_formula_value(const Rational& q);

Integer gcd3(const Integer& a, const Integer& b, const Integer& c);
Integer ipow(const Integer& base, unsigned long e);
Rational rpow(const Rational& base, long e);

/// Parses "7", "-3/4" or a finite decimal such as "1.25" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

}  // namespace hzeta
