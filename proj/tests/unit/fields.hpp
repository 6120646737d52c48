#pragma once

#include <random>

#include "nsac/spaces.hpp"

namespace testing_fields {

inline Eigen::VectorXd uniform(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline nsac::FieldX random_X(std::mt19937_64& rng, const nsac::Discretization& disc) {
  return {uniform(rng, 3 * disc.num_elements(), -1.0, 1.0)};
}
inline nsac::FieldV random_V(std::mt19937_64& rng, const nsac::Discretization& disc) {
  return {uniform(rng, 2 * disc.num_faces(), -1.0, 1.0)};
}
inline nsac::FieldQ random_rho(std::mt19937_64& rng, const nsac::Discretization& disc) {
  return {uniform(rng, disc.num_elements(), 0.5, 2.0)};
}

/// Continuous piecewise-linear field from values on the vertex classes.
template <class F>
nsac::FieldX continuous_P1(const nsac::Discretization& disc, F&& vertex_value) {
  const nsac::Mesh& m = disc.mesh();
  nsac::FieldX v = nsac::zero_X(disc);
  for (int k = 0; k < disc.num_elements(); ++k) {
    for (int a = 0; a < 3; ++a) {
      const auto& p = m.vertices()[static_cast<std::size_t>(m.element(k).vertex[static_cast<std::size_t>(a)])];
      v.values[3 * k + a] = vertex_value(p[0], p[1]);
    }
  }
  return v;
}

/// True when no face of element k lies on the periodic seam.
inline bool away_from_seam(const nsac::Discretization& disc, int k) {
  for (int f : disc.element(k).face) {
    const auto& s = disc.mesh().face(f).shift;
    if (s[0] != 0.0 || s[1] != 0.0) return false;
  }
  return true;
}

}  // namespace testing_fields
