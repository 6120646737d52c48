#include "nsac/quadrature.hpp"

#include <cmath>

namespace nsac {

const TriangleRule& projection_rule() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    r.degree = 2;
    r.points = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
    r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return r;
  }();
  return rule;
}

const TriangleRule& volume_rule() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    r.degree = 4;
    const double a1 = 0.44594849091596488632;
    const double b1 = 1.0 - 2.0 * a1;
    const double w1 = 0.22338158967801146569;
    const double a2 = 0.091576213509770743460;
    const double b2 = 1.0 - 2.0 * a2;
    const double w2 = 0.10995174365532186764;
    r.points = {{a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1},
                {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}};
    // Normalise so the weights sum to one in floating point as well.
    const double total = 3.0 * (w1 + w2);
    r.weights = {w1 / total, w1 / total, w1 / total, w2 / total, w2 / total, w2 / total};
    return r;
  }();
  return rule;
}

const EdgeRule& face_rule() {
  static const EdgeRule rule = [] {
    EdgeRule r;
    const double d = 0.5 / std::sqrt(3.0);
    r.points = {0.5 - d, 0.5 + d};
    r.weights = {0.5, 0.5};
    return r;
  }();
  return rule;
}

}  // namespace nsac
