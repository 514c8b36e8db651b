#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hzeta/config_io.hpp"
#include "hzeta/constants.hpp"
#include "hzeta/counting.hpp"
#include "hzeta/errors.hpp"
#include "hzeta/fourier.hpp"
#include "hzeta/heights.hpp"
#include "hzeta/padic_oracle.hpp"

using namespace hzeta;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& text, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<Rational> parse_rationals(const std::string& text) {
  std::vector<Rational> v;
  for (const auto& t : split(text)) v.push_back(parse_rational(t));
  return v;
}

PicardVector bundle_or_default(const std::string& text, int r) {
  if (text.empty()) return PicardVector::anticanonical(r);
  PicardVector s = PicardVector::parse(text);
  if (s.size() != r + 1)
    throw PreconditionError("bundle " + s.to_string() + " has " + std::to_string(s.size()) + " entries, expected " +
                            std::to_string(r + 1));
  return s;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json height_json(const HeightValue& h) {
  return {{"value", json_real(h.value())}, {"squared", json_rational(h.squared())}};
}

int cmd_validate(const std::string& path) {
  SurfaceConfig c = load_config(path);
  emit(config_json(c));
  return 0;
}

int cmd_height(const std::string& path, const std::string& point, const std::string& triple,
               const std::string& bundle) {
  SurfaceConfig c = load_config(path);
  PrimitiveTriple x;
  if (!triple.empty()) {
    auto v = split(triple);
    if (v.size() != 3) throw PreconditionError("--triple expects a,b,c");
    x = make_triple(Integer(v[0]), Integer(v[1]), Integer(v[2]));
  } else {
    auto v = parse_rationals(point);
    if (v.size() != 2) throw PreconditionError("--point expects x1,x2");
    x = normalize_point(v[0], v[1]);
  }
  PicardVector s = bundle_or_default(bundle, c.r());
  json comps = json::array();
  for (int k = 1; k <= c.r(); ++k) {
    json e = height_json(global_height_component(c, k, x));
    e["k"] = k;
    comps.push_back(e);
  }
  json out = {{"triple", {x.a.get_str(), x.b.get_str(), x.c.get_str()}},
              {"height_O1", height_json(height_o1(x))},
              {"components", comps},
              {"bundle", s.to_string()},
              {"height", json_real(height_bundle(c, s, x))}};
  if (s.is_real()) {
    Integer den = 1;
    for (const auto& q : s.re) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    const long n = 2 * den.get_si();
    out["power"] = n;
    out["height_power"] = json_rational(height_bundle_power(c, s, x, n));
  }
  emit(out);
  return 0;
}

int cmd_count(const std::string& path, const std::string& bundle, const std::string& bmax, const std::string& grid,
              const std::string& geometric, int shards, const std::string& out_csv, long naive_radius) {
  SurfaceConfig c = load_config(path);
  PicardVector s = bundle_or_default(bundle, c.r());
  std::vector<Rational> g;
  if (!grid.empty()) {
    g = parse_rationals(grid);
  } else if (!geometric.empty()) {
    auto v = split(geometric);
    if (v.size() != 3) throw PreconditionError("--geometric expects start,ratio,count");
    Rational b = parse_rational(v[0]), q = parse_rational(v[1]);
    long n = std::stol(v[2]);
    for (long i = 0; i < n; ++i, b *= q) g.push_back(b);
  } else if (!bmax.empty()) {
    g.push_back(parse_rational(bmax));
  } else {
    throw PreconditionError("one of --bmax, --grid, --geometric is required");
  }
  CountOptions opts;
  opts.shards = shards;
  if (naive_radius > 0) opts.naive_radius = naive_radius;
  CountSeries cs = count_series(c, s, g, opts);
  std::string csv = series_csv(cs);
  if (out_csv.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out_csv, std::ios::binary);
    if (!f) throw PreconditionError("cannot write " + out_csv);
    f << csv;
    std::cerr << "wrote " << cs.grid.size() << " rows to " << out_csv << "\n";
  }
  return 0;
}

int cmd_fourier(const std::string& path, long p, const std::string& chr, const std::string& svec, int alpha_max) {
  SurfaceConfig c = load_config(path);
  PicardVector s = bundle_or_default(svec, c.r());
  auto a = split(chr);
  if (a.size() != 2) throw PreconditionError("--char expects a1,a2");
  const long a1 = std::stol(a[0]), a2 = std::stol(a[1]);
  CharacterClass cls = classify_character(c, a1, a2);
  OracleResult o = local_ft_oracle(c, p, s, a1, a2, alpha_max);
  json out = {{"p", p},
              {"character", {{"a", {a1, a2}}, {"kind", to_string(cls.kind)}, {"bad_set", cls.bad_set}}},
              {"s", s.to_string()},
              {"oracle",
               {{"value", json_complex(o.value)}, {"alpha_max", o.alpha_max}, {"tail_bound", json_real(o.tail_bound)}}}};
  if (cls.kind == CharacterKind::special) out["character"]["special_index"] = cls.special_index;
  if (o.exact) out["oracle"]["truncated_exact"] = json_rational(*o.exact);
  bool pass = true;
  if (c.is_bad(p) || cls.in_bad_set(p)) {
    out["closed"] = "n/a";
    out["verdict"] = "n/a";
  } else {
    LocalFactor f = local_ft_closed(c, p, s, cls);
    double diff = std::abs(f.value - o.value);
    pass = diff <= o.tail_bound;
    out["closed"] = {{"value", json_complex(f.value)}};
    if (f.exact) out["closed"]["exact"] = json_rational(*f.exact);
    out["difference"] = json_real(diff);
    out["verdict"] = pass ? "PASS" : "FAIL";
  }
  emit(out);
  return pass ? 0 : 1;
}

int cmd_zeta_check(const std::string& path, const std::string& svec, const std::string& b_direct, int a_max,
                   long p_max, int alpha_max, double extension, int shards) {
  SurfaceConfig c = load_config(path);
  PicardVector s = bundle_or_default(svec, c.r());
  PoissonOptions opts;
  opts.alpha_max = alpha_max;
  opts.extension = extension;
  opts.shards = shards;
  PoissonReport rep = poisson_check(c, s, parse_rational(b_direct), a_max, p_max, opts);
  json by = json::array();
  for (const auto& v : rep.rhs_by_amax) by.push_back(json_complex(v));
  json out = {{"config", c.name},
              {"r", c.r()},
              {"s", s.to_string()},
              {"lhs", json_complex(rep.lhs)},
              {"lhs_tail", json_real(rep.lhs_tail)},
              {"lhs_parts",
               {{"direct", json_complex(rep.zeta.direct)},
                {"shell", json_complex(rep.zeta.shell)},
                {"B_ext", json_real(rep.zeta.B_ext)},
                {"remainder", json_complex(rep.zeta.remainder)},
                {"points", rep.zeta.points_total}}},
              {"rhs", json_complex(rep.rhs)},
              {"rhs_tail", json_real(rep.rhs_tail)},
              {"rhs_parts",
               {{"euler_error", json_real(rep.rhs_euler_error)},
                {"arch_error", json_real(rep.rhs_arch_error)},
                {"character_tail", json_real(rep.rhs_character_tail)},
                {"characters", rep.characters},
                {"oracle_factors", rep.oracle_factors}}},
              {"rhs_by_a_max", by},
              {"difference", json_real(rep.difference())},
              {"incomplete", rep.incomplete},
              {"verdict", rep.consistent() ? "PASS" : "FAIL"}};
  if (rep.incomplete) out["diagnostic"] = rep.diagnostic;
  emit(out);
  return rep.consistent() ? 0 : 1;
}

int cmd_constant(const std::string& path, long p_max) {
  SurfaceConfig c = load_config(path);
  ConstantReport rep = peyre_constant(c, p_max);
  emit({{"config", rep.config_name},
        {"r", rep.r},
        {"alpha", json_rational(rep.alpha)},
        {"tau_arch", {{"value", json_real(rep.tau_arch.value)}, {"err", json_real(rep.tau_arch.abs_error)}}},
        {"euler",
         {{"value", json_real(rep.euler.value.real())},
          {"p_max", rep.euler.truncation_prime},
          {"tail_bound", json_real(rep.euler.truncation_error_bound)},
          {"oracle_primes", rep.euler.oracle_primes}}},
        {"tamagawa", {{"value", json_real(rep.tamagawa)}, {"err", json_real(rep.tamagawa_error)}}},
        {"theta", json_real(rep.theta)},
        {"predicted_leading_coeff", json_real(rep.predicted_leading_coeff)}});
  return 0;
}

int cmd_fit(const std::string& csv_path, int r) {
  std::ifstream in(csv_path);
  if (!in) throw PreconditionError("cannot open " + csv_path);
  CountSeries cs;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line == "B,N") continue;
    }
    auto v = split(line);
    if (v.size() != 2) throw PreconditionError("malformed CSV row: " + line);
    cs.grid.push_back(parse_rational(v[0]));
    cs.counts.push_back(std::stoll(v[1]));
  }
  FitResult f = fit_leading(cs, r);
  json coeffs = json::array(), trace = json::array();
  for (double x : f.coefficients) coeffs.push_back(json_real(x));
  for (double x : f.stability_trace) trace.push_back(json_real(x));
  emit({{"degree", f.degree},
        {"coefficients", coeffs},
        {"leading_estimate", json_real(f.leading_estimate)},
        {"residual", json_real(f.residual)},
        {"condition", json_real(f.condition)},
        {"stability_trace", trace}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Height zeta functions and rational point counts on blow-ups of the projective plane"};
  app.require_subcommand(1);

  std::string config, bundle, point, triple, bmax, grid, geometric, out_csv, chr = "0,0", svec, b_direct = "10000",
                                                                                csv;
  int shards = 1, alpha_max = 0, a_max = 50, r = 1;
  long naive_radius = 0, p = 2, p_max = 100000;
  double extension = 1e6;

  auto* v = app.add_subcommand("validate", "load a configuration and print r, forms and bad primes");
  v->add_option("config", config, "configuration JSON")->required();

  auto* h = app.add_subcommand("height", "heights of a point");
  h->add_option("--config", config, "configuration JSON")->required();
  auto* po = h->add_option("--point", point, "affine point x1,x2 (rationals)");
  h->add_option("--triple", triple, "primitive triple a,b,c")->excludes(po);
  h->add_option("--bundle", bundle, "Picard vector s_0,...,s_r (default anticanonical)");

  auto* c = app.add_subcommand("count", "count points of bounded height, CSV B,N");
  c->add_option("--config", config, "configuration JSON")->required();
  c->add_option("--bundle", bundle, "Picard vector (default anticanonical)");
  c->add_option("--bmax", bmax, "single height bound");
  c->add_option("--grid", grid, "comma separated increasing bounds");
  c->add_option("--geometric", geometric, "start,ratio,count");
  c->add_option("--shards", shards, "parallel shards (output is identical for any value)")->check(CLI::PositiveNumber);
  c->add_option("--out", out_csv, "write CSV here instead of stdout");
  c->add_option("--naive-radius", naive_radius, "scan the box of this half width instead of pruning");

  auto* f = app.add_subcommand("fourier", "closed form against the residue oracle at one prime");
  f->add_option("--config", config, "configuration JSON")->required();
  f->add_option("--p", p, "prime")->required();
  f->add_option("--char", chr, "character a1,a2");
  f->add_option("--s", svec, "Picard vector")->required();
  f->add_option("--alpha-max", alpha_max, "oracle depth (0 = default)");

  auto* z = app.add_subcommand("zeta-check", "direct height zeta sum against its Fourier expansion");
  z->add_option("--config", config, "configuration JSON")->required();
  z->add_option("--s", svec, "Picard vector")->required();
  z->add_option("--b-direct", b_direct, "height bound of the direct sum");
  z->add_option("--a-max", a_max, "largest |a|_inf");
  z->add_option("--p-max", p_max, "Euler product truncation");
  z->add_option("--alpha-max", alpha_max, "oracle depth (0 = default)");
  z->add_option("--extension", extension, "direct sum continued to extension * B");
  z->add_option("--shards", shards, "parallel shards")->check(CLI::PositiveNumber);

  auto* k = app.add_subcommand("constant", "archimedean density, Tamagawa number and predicted leading constant");
  k->add_option("--config", config, "configuration JSON")->required();
  k->add_option("--p-max", p_max, "Euler product truncation");

  auto* ft = app.add_subcommand("fit", "fit N(B)/B by a polynomial in log B");
  ft->add_option("--csv", csv, "CSV with B,N rows")->required();
  ft->add_option("--r", r, "polynomial degree")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*v) return cmd_validate(config);
    if (*h) {
      if (point.empty() && triple.empty()) throw PreconditionError("one of --point, --triple is required");
      return cmd_height(config, point, triple, bundle);
    }
    if (*c) return cmd_count(config, bundle, bmax, grid, geometric, shards, out_csv, naive_radius);
    if (*f) return cmd_fourier(config, p, chr, svec, alpha_max);
    if (*z) return cmd_zeta_check(config, svec, b_direct, a_max, p_max, alpha_max, extension, shards);
    if (*k) return cmd_constant(config, p_max);
    if (*ft) return cmd_fit(csv, r);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
