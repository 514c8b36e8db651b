#include "property_checks.hpp"

#include <sstream>

#include "hzeta/fourier.hpp"
#include "hzeta/heights.hpp"
#include "support.hpp"

namespace hzeta::testing {

namespace {

/// Runs body(gen, detail) `cases` times; a false return or an exception counts
/// as a failure and the first one is described.
PropertyOutcome run(const std::string& name, std::uint64_t seed, int cases,
                    const std::function<bool(Gen&, std::ostringstream&)>& body) {
  PropertyOutcome out{name, cases, 0, ""};
  Gen gen(seed);
  for (int i = 0; i < cases; ++i) {
    std::ostringstream detail;
    bool ok = false;
    try {
      ok = body(gen, detail);
    } catch (const std::exception& e) {
      detail << " threw " << e.what();
    }
    if (!ok && out.failures++ == 0) out.first_failure = "case " + std::to_string(i) + ": " + detail.str();
  }
  return out;
}

std::string config_text(const SurfaceConfig& c) {
  std::string s = "[";
  for (const auto& f : c.forms) s += "(" + std::to_string(f.u) + "," + std::to_string(f.v) + ")";
  return s + "]";
}

PrimitiveTriple shifted(const PrimitiveTriple& x, const Integer& t1, const Integer& t2) {
  return make_triple(x.a + t1 * x.c, x.b + t2 * x.c, x.c);
}

}  // namespace

PropertyOutcome prop_product_formula(std::uint64_t seed, int cases) {
  return run("product formula", seed, cases, [](Gen& g, std::ostringstream& d) {
    Rational q = g.coin() ? Rational(g.nonzero(1000000), g.range(1, 1000000)) : g.smooth_rational();
    q.canonicalize();
    d << "q = " << q.get_str();
    if (product_formula_value(q) != 1) return false;
    // each p-adic absolute value against the definition
    Rational prod = abs(q);
    for (long p : ref_primes_of(q.get_num() * q.get_den())) {
      if (abs_p(q, p).value() != ref_abs_p(q, p)) return false;
      prod *= ref_abs_p(q, p);
    }
    return prod == 1;
  });
}

PropertyOutcome prop_factorization(std::uint64_t seed, int cases) {
  return run("H_0 * prod H_k = H_O(1)", seed, cases, [](Gen& g, std::ostringstream& d) {
    const SurfaceConfig c = g.config();
    const PrimitiveTriple x = g.triple();
    d << config_text(c) << " x = " << x.to_string();
    HeightValue prod = global_height_component(c, 0, x);
    for (int k = 1; k <= c.r(); ++k) prod = prod * global_height_component(c, k, x);
    return prod.squared() == height_o1(x).squared();
  });
}

PropertyOutcome prop_height_by_places(std::uint64_t seed, int cases) {
  return run("closed global height = product over places", seed, cases, [](Gen& g, std::ostringstream& d) {
    const SurfaceConfig c = g.config(4, 7);
    const PrimitiveTriple x = g.triple();
    d << config_text(c) << " x = " << x.to_string();
    for (int k = 1; k <= c.r(); ++k) {
      const Rational closed = global_height_component(c, k, x).squared();
      if (closed != global_height_by_places(c, k, x).squared()) return false;
      if (closed != ref_global_height_sq(c.forms[k - 1], x)) return false;
    }
    return true;
  });
}

PropertyOutcome prop_translation_invariance(std::uint64_t seed, int cases) {
  return run("finite-place translation invariance", seed, cases, [](Gen& g, std::ostringstream& d) {
    const SurfaceConfig c = g.config(4, 7);
    if (c.r() == 0) return true;
    const PrimitiveTriple x = g.triple();
    const PrimitiveTriple y = shifted(x, g.integer(), g.integer());
    const int k = static_cast<int>(g.range(1, c.r()));
    std::vector<long> primes = ref_primes_of(x.c);
    primes.push_back(g.prime(60));
    d << config_text(c) << " k = " << k << " x = " << x.to_string() << " x+t = " << y.to_string();
    for (long p : primes) {
      const PAdicValue hx = local_height_finite(c, k, x, p), hy = local_height_finite(c, k, y, p);
      if (!(hx == hy)) return false;
      const Rational ref = ref_local_height_p(c.forms[k - 1], Rational(y.a, y.c), Rational(y.b, y.c), p);
      if (hy.value() != ref) return false;
    }
    return true;
  });
}

PropertyOutcome prop_pn_degeneration(std::uint64_t seed, int cases) {
  const SurfaceConfig plane = validate_config({}, "P2");
  return run("r = 0 local factors = P^2 factors", seed, cases, [&](Gen& g, std::ostringstream& d) {
    const long p = g.prime(60);
    const long s0 = g.range(3, 14);
    const PicardVector s(std::vector<Rational>{Rational(s0)});
    d << "p = " << p << " s = " << s0;
    const LocalFactor t = local_ft_trivial(plane, p, s);
    const LocalFactor n = local_ft_generic(plane, p, s);
    if (!t.exact || !n.exact) return false;
    return *t.exact == pn_local_ft_exact(2, p, s0, PnCharacter::trivial) &&
           *n.exact == pn_local_ft_exact(2, p, s0, PnCharacter::nontrivial_good);
  });
}

PropertyOutcome prop_normalize_point(std::uint64_t seed, int cases) {
  return run("normalize_point idempotent and scale invariant", seed, cases, [](Gen& g, std::ostringstream& d) {
    const PrimitiveTriple x = g.triple();
    const Integer lambda = g.nonzero(1000);
    d << "x = " << x.to_string() << " lambda = " << lambda.get_str();
    const PrimitiveTriple n1 = normalize_point(Rational(x.a, x.c), Rational(x.b, x.c));
    const PrimitiveTriple n2 = normalize_point(Rational(lambda * x.a, lambda * x.c), Rational(lambda * x.b, lambda * x.c));
    const PrimitiveTriple n3 = normalize_point(Rational(n1.a, n1.c), Rational(n1.b, n1.c));
    return n1 == x && n2 == x && n3 == n1;
  });
}

PropertyOutcome prop_anticanonical_closed_form(std::uint64_t seed, int cases) {
  return run("anticanonical closed form = H(K^-1)", seed, cases, [](Gen& g, std::ostringstream& d) {
    const SurfaceConfig c = g.config(4, 7);
    const PrimitiveTriple x = g.triple();
    d << config_text(c) << " x = " << x.to_string();
    // (a^2+b^2+c^2)^{3-r} prod (c^2+l^2)/gcd(c,l)^2, computed here from scratch
    const Integer q = x.a * x.a + x.b * x.b + x.c * x.c;
    Rational ref = ref_pow(Rational(q), 3 - c.r());
    for (const auto& f : c.forms) {
      const Integer l = f.u * x.a + f.v * x.b;
      Integer gcl;
      mpz_gcd(gcl.get_mpz_t(), x.c.get_mpz_t(), l.get_mpz_t());
      ref *= Rational(x.c * x.c + l * l, gcl * gcl);
    }
    ref.canonicalize();
    return anticanonical_height_squared(c, x) == ref &&
           height_bundle_power(c, PicardVector::anticanonical(c.r()), x, 2) == ref;
  });
}

PropertyOutcome prop_bundle_multiplicativity(std::uint64_t seed, int cases) {
  return run("H(s+s') = H(s) H(s')", seed, cases, [](Gen& g, std::ostringstream& d) {
    const SurfaceConfig c = g.config(3, 5);
    const PrimitiveTriple x = g.triple(200);
    std::vector<Rational> a, b;
    for (int k = 0; k <= c.r(); ++k) {
      a.emplace_back(g.range(-4, 6));
      b.emplace_back(g.range(-4, 6));
    }
    const PicardVector s(a), t(b);
    d << config_text(c) << " x = " << x.to_string() << " s = " << s.to_string() << " s' = " << t.to_string();
    return height_bundle_power(c, s + t, x, 2) == height_bundle_power(c, s, x, 2) * height_bundle_power(c, t, x, 2);
  });
}

PropertyOutcome prop_local_height_lower_bound(std::uint64_t seed, int cases) {
  return run("H_{k,p} >= 1, = 1 off c", seed, cases, [](Gen& g, std::ostringstream& d) {
    const SurfaceConfig c = g.config(4, 7);
    if (c.r() == 0) return true;
    const PrimitiveTriple x = g.triple();
    const long p = g.prime(30);
    d << config_text(c) << " x = " << x.to_string() << " p = " << p;
    for (int k = 1; k <= c.r(); ++k) {
      const PAdicValue h = local_height_finite(c, k, x, p);
      if (h.value() < 1) return false;
      if (x.c % p != 0 && h.value() != 1) return false;
    }
    return true;
  });
}

PropertyOutcome prop_character_scaling(std::uint64_t seed, int cases) {
  return run("character class under scaling", seed, cases, [](Gen& g, std::ostringstream& d) {
    const SurfaceConfig c = g.config(4, 5);
    const long a1 = g.range(-30, 30), a2 = g.range(-30, 30);
    if (a1 == 0 && a2 == 0) return true;
    const long lambda = g.nonzero(20);
    d << config_text(c) << " a = (" << a1 << "," << a2 << ") lambda = " << lambda;
    const CharacterClass x = classify_character(c, a1, a2), y = classify_character(c, lambda * a1, lambda * a2);
    if (x.kind != y.kind || x.special_index != y.special_index) return false;
    for (long p : c.bad_primes)
      if (!x.in_bad_set(p)) return false;
    return true;
  });
}

std::vector<PropertyOutcome> acceptance_properties(std::uint64_t seed, int cases) {
  return {prop_product_formula(seed, cases), prop_factorization(seed + 1, cases), prop_height_by_places(seed + 2, cases),
          prop_translation_invariance(seed + 3, cases), prop_pn_degeneration(seed + 4, cases)};
}

}  // namespace hzeta::testing
