#include "nsac/presets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsac {

namespace {

constexpr double pi = std::numbers::pi;

// Periodic distance to the origin on [-1,1]^2.
double torus_radius(const Vec2& x) {
  auto wrap = [](double s) { return s - 2.0 * std::round(s / 2.0); };
  return std::hypot(wrap(x[0]), wrap(x[1]));
}

}  // namespace

InitialData preset(const std::string& name, double const_c) {
  if (name == "constant") {
    return {name, [](const Vec2&) { return 1.0; }, [](const Vec2&) { return Vec2(0.0, 0.0); },
            [const_c](const Vec2&) { return const_c; }};
  }
  if (name == "phase_blob") {
    return {name, [](const Vec2&) { return 1.0; }, [](const Vec2&) { return Vec2(0.0, 0.0); },
            [](const Vec2& x) { return -std::tanh((torus_radius(x) - 0.5) / (std::sqrt(2.0) * 0.2)); }};
  }
  if (name == "density_bump") {
    return {name,
            [](const Vec2& x) {
              const double r = torus_radius(x);
              return 1.0 + 0.5 * std::exp(-r * r / 0.1);
            },
            [](const Vec2&) { return Vec2(0.0, 0.0); },
            [](const Vec2& x) { return 0.5 * std::cos(pi * x[0]); }};
  }
  if (name == "shear") {
    return {name, [](const Vec2&) { return 1.0; },
            [](const Vec2& x) { return Vec2(0.5 * std::sin(pi * x[1]), 0.0); },
            [](const Vec2& x) { return 0.8 * std::cos(pi * x[1]); }};
  }
  if (name == "smooth") {
    return {name,
            [](const Vec2& x) { return 1.0 + 0.2 * std::sin(pi * x[0]) * std::sin(pi * x[1]); },
            [](const Vec2& x) {
              return Vec2(0.3 * std::sin(pi * x[1]), 0.2 * std::cos(pi * x[0]));
            },
            [](const Vec2& x) { return 0.5 * std::sin(pi * x[0]) * std::cos(pi * x[1]); }};
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"constant", "phase_blob", "density_bump", "shear", "smooth"};
}

}  // namespace nsac
