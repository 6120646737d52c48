#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsac/scheme.hpp"

namespace nsac {

using MatrixFunction = std::function<Mat2(const Vec2&)>;

/// Space-time test functions theta(t) S(x) with theta = (1 - t/T)^2, so
/// that they vanish at t = T. Empty spatial factors count as zero.
struct ConsistencyProbe {
  double final_time = 1.0;
  ScalarFunction phi;            ///< density test, spatial factor
  GradientFunction grad_phi;
  VectorFunction vphi;           ///< momentum test, spatial factor
  MatrixFunction grad_vphi;      ///< (d vphi_i / d x_j)
  ScalarFunction psi;            ///< phase test, spatial factor

  double theta(double t) const;
  /// int_a^b theta(t) dt, exact.
  double theta_integral(double a, double b) const;
};

/// Fixed smooth trigonometric probes on the torus.
ConsistencyProbe default_probe(double final_time);

struct ConsistencyResiduals {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
};

/// L1-in-time norms of the defects of the three weak forms, evaluated on
/// the piecewise-constant-in-time extension of the trajectory. The defect
/// of interval k is the part of the summed-by-parts weak form supported on
/// (t_{k-1}, t_k]; the L1 norm is the sum of their magnitudes.
ConsistencyResiduals consistency_residuals(const Scheme& scheme, const Trajectory& traj,
                                           const ConsistencyProbe& probe);

struct ConvergenceRow {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  double rel_energy = 0.0;  ///< against the finest member at the final time; NaN on that member
  ConsistencyResiduals e;
  // Observed orders against the previous (coarser) row; NaN on the first row.
  double order_rel_energy = 0.0;
  double order_e1 = 0.0;
  double order_e2 = 0.0;
  double order_e3 = 0.0;
  double runtime_s = 0.0;
};

struct ConvergenceTable {
  std::string preset;
  double final_time = 0.0;
  std::vector<ConvergenceRow> rows;
  bool complete = true;
  std::string failure;  ///< set when a member run did not converge
};

/// Runs `preset` on every n in n_list (strictly ascending, each dividing
/// the last) up to params.final_time. The finest member is the reference.
/// Throws std::invalid_argument for a bad list.
ConvergenceTable reference_convergence_study(const std::string& preset, const std::vector<int>& n_list,
                                             const Params& params);

/// Least-squares slope of log(err) against log(h).
double least_squares_order(const std::vector<double>& h, const std::vector<double>& err);

void write_study_csv(std::ostream& os, const ConvergenceTable& table);

struct Verdict {
  std::string name;
  bool ok = true;
  std::string message;
};

struct AdmissibilityReport {
  std::vector<Verdict> verdicts;
  bool admissible() const;
  /// Messages of the failed verdicts, one per line.
  std::string summary() const;
};

/// Hypotheses on (d, gamma, epsilon, eta, beta). With a mesh size h it also
/// reports whether the penalty makes B coercive on the uniform torus
/// family, which holds iff h^{-beta} > 2 + sqrt(2).
AdmissibilityReport theorem_condition_check(const Params& params, std::optional<double> h = std::nullopt);

}  // namespace nsac
