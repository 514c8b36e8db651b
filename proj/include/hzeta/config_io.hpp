#pragma once

// Configuration documents and JSON payload helpers.

#include <complex>
#include <string>

#include <json.hpp>

#include "hzeta/arith.hpp"
#include "hzeta/surface.hpp"

namespace hzeta {

/// {"name": "...", "forms": [[u, v], ...]}; ConfigError on malformed input.
SurfaceConfig parse_config(const std::string& text);
SurfaceConfig load_config(const std::string& path);
nlohmann::json config_json(const SurfaceConfig& config);

/// Rounds to 12 significant digits so the serialized text is fixed.
double round12(double x);
nlohmann::json json_real(double x);
nlohmann::json json_complex(std::complex<double> z);
/// Exact rationals as "num/den".
nlohmann::json json_rational(const Rational& q);

}  // namespace hzeta
