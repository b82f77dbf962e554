#include <map>

#include "qrq/errors.hpp"
#include "qrq/sweeps.hpp"

namespace qrq {

namespace {

// Figure and table reproductions, one config per name.
const std::map<std::string, const char*>& presets() {
  static const std::map<std::string, const char*> m = {
      {"fig3", R"({
        "description": "(x, delta) maps at nu = 100, delta in (-pi/2, pi/2), all branches",
        "mode": "x_delta", "nu": 100,
        "x": {"min": 1.6, "max": 1e5, "n": 200, "log": true},
        "y": {"min": -1.57, "max": 1.57, "n": 200, "log": false},
        "branches": ["mm", "pm", "pp", "mp"]})"},
      {"fig4", R"({
        "description": "(x, nu) maps at delta = 0 for mm and pm",
        "mode": "x_nu", "delta": 0,
        "x": {"min": 1.6, "max": 1e5, "n": 200, "log": true},
        "y": {"min": 0.1, "max": 1000, "n": 200, "log": true},
        "branches": ["mm", "pm"]})"},
      {"fig5", R"({
        "description": "(x, delta) maps at nu = 100, delta in (pi/2, 3pi/2), all branches",
        "mode": "x_delta", "nu": 100,
        "x": {"min": 9.6, "max": 1e5, "n": 200, "log": true},
        "y": {"min": 1.5716, "max": 4.7116, "n": 200, "log": false},
        "branches": ["mm", "pm", "pp", "mp"]})"},
      {"fig5_zoom", R"({
        "description": "neighbourhood of delta = pi, x = nu^2 at nu = 100",
        "mode": "x_delta", "nu": 100,
        "x": {"min": 2000, "max": 50000, "n": 200, "log": true},
        "y": {"min": 3.0916, "max": 3.1916, "n": 200, "log": false},
        "branches": ["mm", "pm"]})"},
      {"fig6", R"({
        "description": "(x, nu) map at delta = 0, mm branch",
        "mode": "x_nu", "delta": 0,
        "x": {"min": 1.6, "max": 1e5, "n": 200, "log": true},
        "y": {"min": 0.1, "max": 1000, "n": 200, "log": true},
        "branches": ["mm"]})"},
      {"fig7", R"({
        "description": "(x, nu) maps at delta = pi for pm and mm",
        "mode": "x_nu", "delta": 3.141592653589793,
        "x": {"min": 9.6, "max": 1e5, "n": 200, "log": true},
        "y": {"min": 0.5, "max": 1000, "n": 200, "log": true},
        "branches": ["pm", "mm"]})"},
      {"fig8", R"({
        "description": "vacuum probability and f_I phase over (xi, theta2), xi1 = xi2, theta1 = theta2 + pi",
        "mode": "xi_theta2_appendix",
        "x": {"min": 0, "max": 4, "n": 201, "log": false},
        "y": {"min": 0, "max": 3.141592653589793, "n": 201, "log": false}})"},
      {"table1", R"({"mode": "tables", "table": 1})"},
      {"table2", R"({"mode": "tables", "table": 2})"},
      {"table3", R"({"mode": "tables", "table": 3})"},
  };
  return m;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> v;
  for (const auto& [k, _] : presets()) v.push_back(k);
  return v;
}

nlohmann::json preset(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw Error(ErrorCode::ConfigError, "unknown preset '" + name + "'");
  return nlohmann::json::parse(it->second);
}

}  // namespace qrq
