#include "hzeta/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hzeta/errors.hpp"

namespace hzeta {

SurfaceConfig parse_config(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ConfigError("\"name\" must be a string");
    name = doc["name"].get<std::string>();
  }
  if (!doc.contains("forms") || !doc["forms"].is_array()) throw ConfigError("\"forms\" must be a list of integer pairs");
  std::vector<LinearForm> forms;
  for (const auto& f : doc["forms"]) {
    if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() || !f[1].is_number_integer())
      throw ConfigError("each form must be a pair of integers, got " + f.dump());
    forms.push_back({f[0].get<long>(), f[1].get<long>()});
  }
  return validate_config(forms, name);
}

SurfaceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json config_json(const SurfaceConfig& config) {
  nlohmann::json forms = nlohmann::json::array();
  for (const auto& f : config.forms) forms.push_back({f.u, f.v});
  return {{"name", config.name}, {"r", config.r()}, {"forms", forms}, {"bad_primes", config.bad_primes}};
}

double round12(double x) {
  if (!std::isfinite(x) || x == 0) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

nlohmann::json json_real(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

nlohmann::json json_complex(std::complex<double> z) { return {{"re", json_real(z.real())}, {"im", json_real(z.imag())}}; }

nlohmann::json json_rational(const Rational& q) { return to_string(q); }

}  // namespace hzeta
