#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "nsac/scheme.hpp"

namespace nsac {

/// Energy of one state. The seminorm part is 1/2 B(c, c).
struct EnergyParts {
  double kinetic = 0.0;    ///< int 1/2 rho |u hat|^2
  double internal = 0.0;   ///< int P(rho)
  double free = 0.0;       ///< int F(c), volume rule
  double gradient = 0.0;   ///< 1/2 B(c, c)
  double total() const { return kinetic + internal + free + gradient; }
};

EnergyParts energy(const Scheme& scheme, const State& s);

/// Both sides of the discrete energy balance for one step.
struct EnergyReport {
  int k = 0;
  double t = 0.0;
  double dt = 0.0;
  EnergyParts parts;
  double energy = 0.0;
  double energy_prev = 0.0;
  double visc_diss = 0.0;  ///< nu ||grad_h u||^2
  double div_diss = 0.0;   ///< eta ||div_h u||^2
  double ac_diss = 0.0;    ///< ||D_t c + u . grad_h c||^2
  /// Numerical dissipation: time increment of u hat, upwind and diffusive
  /// momentum face terms, density time and face Bregman terms, seminorm
  /// increment, potential splitting gap.
  std::array<double, 7> dnum{};
  double lhs = 0.0;         ///< D_t E + physical dissipation
  double residual = 0.0;    ///< |lhs + sum dnum|
  double internal_balance = 0.0;  ///< int D_t P(rho) + int p div_h u, should be <= 0
  double mass = 0.0;
  double min_rho = 0.0;
  /// rho_K >= rho_K_prev / (1 + dt |div_h u|_K) on the cell minimising rho.
  bool positivity_bound = true;

  double dnum_total() const;
  /// True when the identity closes and all dissipation terms are non-negative.
  bool consistent(double energy0, double identity_tol = 1e-10, double sign_tol = 1e-12) const;
};

/// dt is taken from the state times.
EnergyReport energy_report(const Scheme& scheme, const State& current, const State& prev);

/// Comparison triple for the relative energy, given analytically.
struct ReferenceFields {
  ScalarFunction rho;
  VectorFunction u;
  ScalarFunction c;
  GradientFunction grad_c;
};

/// int 1/2 rho |u - U|^2 + (c - C)^2 + 1/2 |grad c - grad C|^2 + P(rho) - P'(R)(rho - R) - P(R).
/// Throws std::invalid_argument when R <= 0 at a quadrature node.
double relative_energy(const Scheme& scheme, const State& s, const ReferenceFields& ref);
/// Same, with the reference taken from a state on a nested (equal or
/// finer) uniform mesh. The integral runs over the finer mesh.
double relative_energy(const Discretization& disc, const PressureLaw& law, const State& s,
                       const Discretization& ref_disc, const State& ref);

struct FluxIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double difference = 0.0;
  double relative() const;
};

/// Both sides of the flux identity, assembled separately:
///   sum_sigma int F(rho u hat, u) . [[u hat]] - F(rho, u) [[|u hat|^2 / 2]]
///   = -1/2 sum rho^up |u_sigma . n| |[[u hat]]|^2 - h^eps sum {{rho}} |[[u hat]]|^2.
FluxIdentity flux_identity_check(const Discretization& disc, const FieldQ& rho, const FieldV& u,
                                 double epsilon);

struct UniformBounds {
  double kinetic_l1 = 0.0;        ///< sup_t ||rho |u hat|^2||_L1
  double rho_lgamma = 0.0;        ///< sup_t ||rho||_L^gamma
  double momentum = 0.0;          ///< sup_t ||rho u hat||_L^{2 gamma/(gamma+1)}
  double grad_u_l2l2 = 0.0;       ///< ||grad_h u||_L2L2
  double div_u_l2l2 = 0.0;        ///< ||div_h u||_L2L2
  double c_seminorm = 0.0;        ///< sup_t B(c, c)^{1/2}
  double f_l2 = 0.0;              ///< sup_t ||f||_L2
  double lap_c_l2l2 = 0.0;        ///< ||Delta_h c||_L2L2
  double dt_c_l2l32 = 0.0;        ///< ||D_t c||_L2L^{3/2}
  double material_c_l2l2 = 0.0;   ///< ||D_t c + u . grad_h c||_L2L2
};

UniformBounds uniform_bounds_report(const Scheme& scheme, const Trajectory& traj);

void write_energy_csv_header(std::ostream& os);
void write_energy_csv_row(std::ostream& os, const EnergyReport& r);

}  // namespace nsac
