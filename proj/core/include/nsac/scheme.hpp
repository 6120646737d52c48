#pragma once

#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsac/constitutive.hpp"
#include "nsac/dg_operators.hpp"
#include "nsac/presets.hpp"
#include "nsac/spaces.hpp"

namespace nsac {

struct Params {
  int dim = 2;
  double nu = 1.0;      ///< shear viscosity
  double lambda = 1.0;  ///< bulk viscosity
  double gamma = 2.0;
  double a = 1.0;
  double epsilon = 1.0;  ///< artificial diffusion exponent
  double beta = 4.0;     ///< penalty exponent
  double dt_factor = 0.5;  ///< dt = dt_factor * h
  double final_time = 0.5;
  double newton_tol = 1e-12;
  int newton_max_iterations = 30;
  double homotopy_initial_step = 0.25;
  double homotopy_min_step = 1e-4;

  /// ((d-2)/d) nu + lambda.
  double eta() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// One time level. Fields are plain values; derived quantities (u hat,
/// Delta_h c, f) are recomputed on demand by the consumers.
struct State {
  int step = 0;
  double time = 0.0;
  FieldQ rho;
  FieldV u;
  FieldX c;
};

class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, int step, double time, double residual)
      : std::runtime_error(what), step(step), time(time), residual(residual) {}
  int step;
  double time;
  double residual;  ///< last residual infinity norm seen
};

struct StepResult {
  State state;
  int newton_iterations = 0;  ///< total over all solves, counting the converged pass
  bool used_homotopy = false;
  int homotopy_stages = 0;
  std::vector<double> residual_history;  ///< infinity norms of the zeta = 1 Newton solve
  double residual = 0.0;
};

struct Trajectory {
  std::vector<State> states;
  std::vector<StepResult> steps;  ///< steps[k-1] produced states[k]
};

/// The fully implicit DG-FE step and its solver.
///
/// Unknowns are packed as [rho (one per element) | u (two per face) |
/// c (three per element)]. assemble() evaluates the homotopy family
/// G(x; zeta): zeta = 1 is the scheme itself, zeta = 0 is the decoupled
/// linear system with rho = rho_prev.
class Scheme {
 public:
  /// Validates params; throws std::invalid_argument.
  Scheme(Discretization disc, Params params);

  const Discretization& disc() const { return disc_; }
  const DgOperators& ops() const { return ops_; }
  const Params& params() const { return params_; }
  const PressureLaw& law() const { return law_; }
  double dt() const { return params_.dt_factor * disc_.h(); }
  double h_pow_eps() const { return h_eps_; }

  int num_unknowns() const;
  Eigen::VectorXd pack(const State& s) const;
  /// Overwrites the fields of s from x, keeping step and time.
  void unpack(const Eigen::VectorXd& x, State& s) const;

  State initial_state(const InitialData& data) const;

  struct Assembly {
    Eigen::VectorXd residual;
    SparseMatrix jacobian;  ///< empty unless requested
  };
  /// Throws std::domain_error if the candidate density is not positive.
  Assembly assemble(const Eigen::VectorXd& candidate, const State& prev, double dt, double zeta,
                    bool with_jacobian) const;

  /// One backward-Euler step of length dt. Throws NonConvergence.
  StepResult step(const State& prev, double dt) const;

  using StepCallback = std::function<void(const State& prev, const StepResult& result)>;
  /// Steps from `initial` to `final_time`; the last step uses the exact
  /// remainder. Calls on_step after every accepted step.
  Trajectory run(const State& initial, double final_time, const StepCallback& on_step = {}) const;
  /// Exactly `steps` steps of length dt(); restarts from a saved state
  /// reproduce the uninterrupted run bit for bit.
  Trajectory run_steps(const State& initial, int steps, const StepCallback& on_step = {}) const;

 private:
  struct NewtonOutcome {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> history;
  };
  NewtonOutcome newton(Eigen::VectorXd& x, const State& prev, double dt, double zeta) const;

  Discretization disc_;
  Params params_;
  PressureLaw law_;
  DgOperators ops_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> laplacian_rows_;
  double h_eps_;
};

}  // namespace nsac
