#include <doctest.h>

#include <cmath>
#include <limits>

#include "hzeta/config_io.hpp"
#include "hzeta/errors.hpp"

using namespace hzeta;

TEST_CASE("configuration documents") {
  SurfaceConfig c = parse_config(R"({"name": "skew", "forms": [[1, 0], [1, 2]]})");
  CHECK(c.name == "skew");
  CHECK(c.r() == 2);
  CHECK(c.bad_primes == std::vector<long>{2});
  CHECK(parse_config(R"({"forms": []})").r() == 0);
  CHECK_THROWS_AS(parse_config(R"({"forms": [[2, 0]]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"forms": [[1, 0, 3]]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"forms": [[1, "x"]]})"), ConfigError);
  CHECK_THROWS_AS(parse_config("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"name": "no forms"})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  nlohmann::json j = config_json(c);
  CHECK(j["bad_primes"] == nlohmann::json::array({2}));
  CHECK(j["r"] == 2);
}

TEST_CASE("number formatting") {
  CHECK(round12(1.0 / 3) == 0.333333333333);
  CHECK(round12(0.0) == 0.0);
  CHECK(json_real(2.0 / 3).dump() == "0.666666666667");
  CHECK(json_real(std::numeric_limits<double>::quiet_NaN()).is_null());
  CHECK(json_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(json_rational(Rational(-3, 4)) == "-3/4");
  CHECK(json_rational(Rational(5)) == "5/1");
  nlohmann::json z = json_complex({1.5, -0.25});
  CHECK(z["re"] == 1.5);
  CHECK(z["im"] == -0.25);
}
