#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hzeta/constants.hpp"
#include "hzeta/errors.hpp"
#include "hzeta/numerics.hpp"
#include "support.hpp"

using namespace hzeta;
using hzeta::testing::config_r;
using hzeta::testing::uniform_s;

TEST_CASE("archimedean density") {
  Estimate e = arch_density(config_r(0));
  CHECK(e.value == doctest::Approx(pn_arch_ft_trivial(2, 3.0).value.real()).epsilon(1e-6));
  CHECK(arch_density(config_r(1)).value == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-9));
}

TEST_CASE("Tamagawa factors") {
  CHECK(tamagawa_factor(config_r(2), 5) == Rational(64, 125) * Rational(41, 25));
  for (long p : primes_up_to(60)) {
    // (1-1/p)(1+1/p+1/p^2) = 1 - p^{-3}
    CHECK(tamagawa_factor(config_r(0), p) == 1 - Rational(1, p * p * p));
  }
  // (1-x)^{r+1} (1+(r+1)x+x^2) = 1 - c2 x^2 + O(x^3), c2 = (r+1)^2 - 1 - r(r+1)/2
  for (int r = 0; r <= 3; ++r) {
    const long p = 101;
    const Rational scaled = (1 - tamagawa_factor(config_r(r), p)) * p * p;
    const long c2 = (r + 1) * (r + 1) - 1 - r * (r + 1) / 2;
    CHECK(std::abs(Rational(scaled - c2).get_d()) < 100.0 / p);
  }
  CHECK_THROWS_AS(tamagawa_factor(validate_config({{1, 0}, {1, 2}}), 2), PreconditionError);
}

TEST_CASE("Tamagawa number of the plane") {
  // r = 0: tau = 2 pi / zeta(3)
  TamagawaValue t = tamagawa(config_r(0), 20000);
  CHECK(std::abs(t.value - pn_residue(2)) <= t.error_bound);
  CHECK(t.error_bound < 1e-3);
  CHECK(pn_residue(2) == doctest::Approx(2 * std::numbers::pi / 1.2020569031595942).epsilon(1e-12));
  CHECK(pn_residue(1) == doctest::Approx(6 / std::numbers::pi).epsilon(1e-12));
}

TEST_CASE("leading constant predictions") {
  ConstantReport r1 = peyre_constant(config_r(1), 20000);
  CHECK(r1.alpha == Rational(1, 6));
  CHECK(r1.theta == doctest::Approx(r1.tamagawa / 6).epsilon(1e-15));
  CHECK(r1.predicted_leading_coeff == doctest::Approx(r1.theta).epsilon(1e-15));
  CHECK(peyre_constant(config_r(3), 100).alpha == Rational(1, 24));
  ConstantReport r0 = peyre_constant(config_r(0), 20000);
  CHECK(r0.predicted_leading_coeff == doctest::Approx(2 * std::numbers::pi / (3 * 1.2020569031595942)).epsilon(1e-4));

  // order of the forms does not matter
  ConstantReport a = peyre_constant(validate_config({{1, 0}, {0, 1}, {1, 1}}), 2000);
  ConstantReport b = peyre_constant(validate_config({{1, 1}, {1, 0}, {0, 1}}), 2000);
  CHECK(a.predicted_leading_coeff == doctest::Approx(b.predicted_leading_coeff).epsilon(1e-12));
  // nor does a unimodular change of coordinates
  ConstantReport u = peyre_constant(validate_config({{1, 0}, {1, 1}, {2, 1}}), 2000);
  CHECK(a.predicted_leading_coeff == doctest::Approx(u.predicted_leading_coeff).epsilon(1e-6));

  // bad primes go through the oracle
  ConstantReport bad = peyre_constant(validate_config({{1, 0}, {1, 2}}), 2000);
  CHECK(bad.euler.oracle_primes == std::vector<long>{2});
  CHECK(bad.predicted_leading_coeff > 0);
}

TEST_CASE("polynomial fits") {
  CountSeries exact;
  // large bounds so that rounding N to an integer stays below 1e-11 relative
  for (int i = 0; i < 8; ++i) {
    const double B = 1e9 * std::pow(4.0, i);
    exact.grid.emplace_back(static_cast<long>(B));
    exact.counts.push_back(std::llround(B * (2 + 3 * std::log(B))));
  }
  FitResult f = fit_leading(exact, 1);
  CHECK(f.leading_estimate == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.coefficients[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(f.stability_trace.size() == 3);
  CHECK(f.condition < 1e12);

  // noise of size B^0.9 still gives the leading term within 2% over 4+ decades
  hzeta::testing::Gen g;
  CountSeries noisy;
  for (int i = 0; i < 16; ++i) {
    const double B = 100 * std::pow(2.0, i);
    const double noise = std::pow(B, 0.9) * (g.range(-1000, 1000) / 1000.0);
    noisy.grid.emplace_back(static_cast<long>(B));
    noisy.counts.push_back(std::llround(B * (2 + 3 * std::log(B)) + noise));
  }
  CHECK(fit_leading(noisy, 1).leading_estimate == doctest::Approx(3.0).epsilon(0.02));

  CountSeries short_series;
  for (long B : {10L, 100L, 1000L}) {
    short_series.grid.emplace_back(B);
    short_series.counts.push_back(B);
  }
  CHECK_THROWS_AS(fit_leading(short_series, 1), PreconditionError);
}

TEST_CASE("Poisson check on a small instance") {
  PoissonOptions o;
  o.extension = 1e3;
  PoissonReport rep = poisson_check(config_r(1), uniform_s(1, 6, 4), 1000, 8, 1000, o);
  CHECK_FALSE(rep.incomplete);
  CHECK(rep.rhs_by_amax.size() == 9);
  CHECK(rep.characters == 17 * 17);
  CHECK(rep.consistent());
  CHECK(rep.difference() <= 1e-2 * std::abs(rep.lhs));
  // a_max = 0 leaves only the trivial character; the gap is the rest of the sum
  PoissonReport zero = poisson_check(config_r(1), uniform_s(1, 6, 4), 1000, 0, 1000, o);
  CHECK(std::abs(zero.rhs - rep.rhs_by_amax[0]) < 1e-12);
  CHECK(zero.difference() > rep.difference());
  CHECK_THROWS_AS(poisson_check(config_r(1), PicardVector::anticanonical(1), 100, 2, 100), PreconditionError);
}

TEST_CASE("bad factor growth report") {
  GrowthReport g = bad_factor_growth(validate_config({{1, 0}, {1, 2}}), PicardVector::parse("6,4,4"), {5, 10});
  CHECK(g.bounds == std::vector<long>{5, 10});
  CHECK(g.max_product.size() == 2);
  CHECK(g.max_product[0] <= g.max_product[1]);
  CHECK(std::isfinite(g.slope));
}
