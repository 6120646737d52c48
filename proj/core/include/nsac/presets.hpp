#pragma once

#include <string>
#include <vector>

#include "nsac/spaces.hpp"

namespace nsac {

/// Analytic initial data (rho0 > 0, u0, c0) on the torus [-1,1]^2.
struct InitialData {
  std::string name;
  ScalarFunction rho;
  VectorFunction u;
  ScalarFunction c;
};

/// Named presets:
///   constant      rho = 1, u = 0, c = const_c
///   phase_blob    rho = 1, u = 0, c a tanh disk profile (+1 inside, -1 outside)
///   density_bump  Gaussian density bump, u = 0, mild phase modulation
///   shear         rho = 1, sinusoidal shear velocity, phase band across the flow
///   smooth        smooth periodic perturbations of all three fields
/// Throws std::invalid_argument for an unknown name.
InitialData preset(const std::string& name, double const_c = 0.0);

std::vector<std::string> preset_names();

}  // namespace nsac
