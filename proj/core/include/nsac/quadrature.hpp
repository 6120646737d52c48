#pragma once

#include <array>
#include <vector>

namespace nsac {

/// Triangle quadrature in barycentric coordinates; weights sum to one and
/// are multiplied by |K| at the call site.
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;
  std::size_t size() const { return weights.size(); }
};

/// Edge-midpoint rule, exact for quadratics. Used for projections.
const TriangleRule& projection_rule();

/// Six-point Dunavant rule, exact for degree 4. Every nonlinear volume
/// integral of the scheme and its diagnostics goes through this one rule.
const TriangleRule& volume_rule();

/// Two-point Gauss rule on a face parametrised by t in [0,1]; weights sum
/// to one and are multiplied by |sigma|.
struct EdgeRule {
  std::array<double, 2> points{};
  std::array<double, 2> weights{};
};

const EdgeRule& face_rule();

}  // namespace nsac
