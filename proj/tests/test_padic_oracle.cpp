#include <doctest.h>

#include <cmath>

#include "hzeta/errors.hpp"
#include "hzeta/fourier.hpp"
#include "hzeta/padic_oracle.hpp"
#include "support.hpp"

using namespace hzeta;
using hzeta::testing::config_r;
using hzeta::testing::uniform_s;

TEST_CASE("cell volumes") {
  CHECK(cell_volume(config_r(1), 3, Cell::uk_ab(1, 2, 1)) == 12);
  CHECK(cell_volume(config_r(2), 5, Cell::u_a(1)) == 16);
  CHECK(cell_volume(config_r(1), 2, Cell::uk_a(1, 1)) == 1);
  CHECK(cell_volume(config_r(2), 7, Cell::u0()) == 1);
  CHECK(cell_volume_enumerated(config_r(1), 3, Cell::uk_ab(1, 2, 1)) == 12);
  CHECK(cell_volume_enumerated(config_r(2), 5, Cell::u_a(1)) == 16);
  CHECK(cell_volume_enumerated(config_r(1), 2, Cell::uk_a(1, 1)) == 1);
  CHECK_THROWS_AS(cell_volume(validate_config({{1, 0}, {1, 2}}), 2, Cell::u_a(1)), PreconditionError);
}

TEST_CASE("cells at one level partition the sphere") {
  for (int r = 1; r <= 3; ++r)
    for (long p : {2L, 3L, 5L})
      for (int alpha = 1; alpha <= 3; ++alpha) {
        SurfaceConfig c = config_r(r);
        Rational total = cell_volume_enumerated(c, p, Cell::u_a(alpha));
        for (int k = 1; k <= r; ++k) {
          total += cell_volume_enumerated(c, p, Cell::uk_a(k, alpha));
          for (int beta = 1; beta < alpha; ++beta) total += cell_volume_enumerated(c, p, Cell::uk_ab(k, alpha, beta));
        }
        const Rational p2a = Rational(ipow(Integer(p), 2 * alpha));
        CHECK(total == p2a * (1 - Rational(1, p * p)));
      }
}

TEST_CASE("cell character integrals") {
  // a = (1,2): generic for x1, x2, x1+x2 away from 2
  CHECK(cell_character_integral(config_r(3), 5, Cell::u_a(1), 1, 2) == 2);
  CHECK(cell_character_sum_enumerated(config_r(3), 5, Cell::u_a(1), 1, 2).as_integer() == Integer(2));
  CHECK(cell_character_integral(config_r(1), 3, Cell::uk_ab(1, 2, 1), 1, 0) == -6);
  CHECK(cell_character_sum_enumerated(config_r(1), 3, Cell::uk_ab(1, 2, 1), 1, 0).as_integer() == Integer(-6));
  for (int alpha = 2; alpha <= 3; ++alpha)
    for (int beta = 1; beta < alpha; ++beta) {
      CHECK(cell_character_integral(config_r(2), 3, Cell::uk_ab(1, alpha, beta), 1, 1) == 0);
      CHECK(cell_character_sum_enumerated(config_r(2), 3, Cell::uk_ab(1, alpha, beta), 1, 1).is_zero());
    }
  CHECK(cell_character_integral(config_r(2), 7, Cell::u0(), 3, 5) == 1);
}

TEST_CASE("nontrivial characters sum to zero over a complete residue system") {
  for (long p : {2L, 3L, 5L})
    for (int alpha = 1; alpha <= 3; ++alpha) {
      const long n = ipow(Integer(p), alpha).get_si();
      for (long a1 = 0; a1 < std::min(n, 6L); ++a1)
        for (long a2 = 0; a2 < std::min(n, 6L); ++a2) {
          CyclotomicSum sum(p, alpha);
          for (long u1 = 0; u1 < n; ++u1)
            for (long u2 = 0; u2 < n; ++u2) sum.add((a1 * u1 + a2 * u2) % n, 1);
          if (a1 == 0 && a2 == 0)
            CHECK(sum.as_integer() == Integer(n * n));
          else
            CHECK(sum.is_zero());
        }
    }
}

TEST_CASE("cyclotomic reduction") {
  CyclotomicSum s(3, 1);  // 1 + zeta + zeta^2 = 0
  s.add(0, 1);
  s.add(1, 1);
  s.add(2, 1);
  CHECK(s.is_zero());
  CyclotomicSum t(2, 2);  // zeta_4^2 = -1
  t.add(2, 3);
  CHECK(t.as_integer() == Integer(-3));
  CHECK(std::abs(t.to_complex() + std::complex<long double>(3)) < 1e-15L);
}

TEST_CASE("oracle against a generic closed form") {
  OracleResult o = local_ft_oracle(config_r(2), 2, uniform_s(2, 4, 3), 1, 1, 6);
  const double expected = 1 - 2 * std::pow(2.0, -3) + std::pow(2.0, -4);
  CHECK(std::abs(o.value - expected) <= o.tail_bound);
  CHECK(o.alpha_max == 6);
  CHECK(o.tail_bound > 0);
}

TEST_CASE("oracle tail bounds and truncations") {
  SurfaceConfig c = config_r(1);
  PicardVector s = uniform_s(1, 5, 3);
  OracleResult deep = local_ft_oracle(c, 3, s, 0, 0, 9);
  for (int a = 1; a <= 6; ++a) {
    OracleResult o = local_ft_oracle(c, 3, s, 0, 0, a);
    CHECK(std::abs(o.value - deep.value) <= o.tail_bound);
    CHECK(o.tail_bound == doctest::Approx(oracle_tail_bound(c, 3, s, a)));
    REQUIRE(o.exact);
    CHECK(o.exact->get_d() == doctest::Approx(o.value.real()).epsilon(1e-14));
  }
  CHECK(default_alpha_max(c, 3, s, 1e-7) <= default_alpha_max(c, 3, s, 1e-10));
  CHECK(oracle_tail_bound(c, 3, s, default_alpha_max(c, 3, s, 1e-7)) <= 1e-7);
  CHECK_THROWS_AS(local_ft_oracle(config_r(3), 11, uniform_s(3, 4, 3), 0, 0, 9), TruncationTooDeep);
  CHECK_THROWS_AS(local_ft_oracle(c, 3, PicardVector::parse("2,2"), 0, 0, 3), PreconditionError);
}

TEST_CASE("oracle at a bad prime") {
  SurfaceConfig b = validate_config({{1, 0}, {1, 2}});
  OracleResult o = local_ft_oracle(b, 2, PicardVector::anticanonical(2), 0, 0);
  CHECK(std::isfinite(o.value.real()));
  CHECK(o.value.real() > 1);
  // anticanonical s decays like 2^{-alpha}; the depth guard caps the precision
  CHECK(o.tail_bound < 1e-3);
  CHECK(local_ft_oracle(b, 2, PicardVector::parse("6,4,4"), 0, 0).tail_bound < 1e-6);
  // a character special for x1 with the bad prime in S(a)
  OracleResult s = local_ft_oracle(b, 2, PicardVector::parse("6,4,4"), 1, 0);
  CHECK(std::abs(s.value.imag()) < 1e-12);
}

TEST_CASE("oracle cache matches direct evaluation") {
  SurfaceConfig c = config_r(2);
  OracleCache cache(c);
  PicardVector s = uniform_s(2, 6, 4);
  for (long a1 : {0L, 1L, 3L})
    for (long a2 : {0L, 2L, 9L}) {
      OracleResult d = local_ft_oracle(c, 3, s, a1, a2, 5);
      OracleResult m = cache.evaluate(3, s, a1, a2, 5);
      CHECK(std::abs(d.value - m.value) < 1e-15);
      CHECK(d.tail_bound == m.tail_bound);
    }
  // the masses depend on a only modulo p^alpha_max
  CHECK(cache.masses(3, 1, 2, 4) == cache.masses(3, 1 + 81, 2 - 162, 4));
}
