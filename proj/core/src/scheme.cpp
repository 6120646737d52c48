#include "nsac/scheme.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsac/parallel.hpp"
#include "nsac/quadrature.hpp"

namespace nsac {

using Triplet = Eigen::Triplet<double>;

double Params::eta() const { return (dim - 2.0) / dim * nu + lambda; }

void Params::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument(field + ": " + why);
  };
  if (dim != 2) fail("d", "the scheme is implemented for d = 2 only");
  if (!(nu > 0.0)) fail("nu", "shear viscosity must be > 0");
  if (!(lambda >= 0.0)) fail("lambda", "bulk viscosity must be >= 0");
  if (!(eta() > 0.0)) {
    fail("lambda", "eta = ((d-2)/d) nu + lambda must be > 0; in 2D eta = lambda, so lambda = 0 is not allowed");
  }
  if (!(gamma > 1.0)) fail("gamma", "must be > 1");
  if (!(a > 0.0)) fail("a", "must be > 0");
  if (!(epsilon > 0.0)) fail("epsilon", "must be > 0");
  if (!(beta > 0.0)) fail("beta", "must be > 0");
  if (!(dt_factor > 0.0)) fail("dt_factor", "must be > 0");
  if (!(final_time >= 0.0)) fail("T", "must be >= 0");
  if (!(newton_tol > 0.0)) fail("newton_tol", "must be > 0");
  if (newton_max_iterations < 1) fail("newton_max_iterations", "must be >= 1");
  if (!(homotopy_initial_step > 0.0 && homotopy_initial_step <= 1.0)) {
    fail("homotopy_initial_step", "must lie in (0, 1]");
  }
  if (!(homotopy_min_step > 0.0 && homotopy_min_step <= homotopy_initial_step)) {
    fail("homotopy_min_step", "must lie in (0, homotopy_initial_step]");
  }
}

namespace {

const Params& checked(const Params& p) {
  p.validate();
  return p;
}

// Per-element data shared by the residual and the Jacobian.
struct LocalData {
  Vec2 u_hat;
  Vec2 m;
  Vec2 m_prev;
  Vec2 grad_c;
  std::array<Vec2, 3> grad_psi;
};

}  // namespace

Scheme::Scheme(Discretization disc, Params params)
    : disc_(std::move(disc)),
      params_(checked(params)),
      law_(params_.a, params_.gamma),
      ops_(disc_, params_.beta),
      laplacian_rows_(ops_.laplacian_matrix()),
      h_eps_(std::pow(disc_.h(), params_.epsilon)) {}

int Scheme::num_unknowns() const { return disc_.num_elements() + 2 * disc_.num_faces() + 3 * disc_.num_elements(); }

Eigen::VectorXd Scheme::pack(const State& s) const {
  const int nk = disc_.num_elements();
  const int nf = disc_.num_faces();
  Eigen::VectorXd x(num_unknowns());
  x.segment(0, nk) = s.rho.values;
  x.segment(nk, 2 * nf) = s.u.values;
  x.segment(nk + 2 * nf, 3 * nk) = s.c.values;
  return x;
}

void Scheme::unpack(const Eigen::VectorXd& x, State& s) const {
  const int nk = disc_.num_elements();
  const int nf = disc_.num_faces();
  s.rho.values = x.segment(0, nk);
  s.u.values = x.segment(nk, 2 * nf);
  s.c.values = x.segment(nk + 2 * nf, 3 * nk);
}

State Scheme::initial_state(const InitialData& data) const {
  State s;
  s.rho = project_Q(disc_, data.rho);
  if (s.rho.values.minCoeff() <= 0.0) throw std::invalid_argument("initial density must be positive");
  s.u = project_V(disc_, data.u);
  s.c = project_X(disc_, data.c);
  return s;
}

Scheme::Assembly Scheme::assemble(const Eigen::VectorXd& x, const State& prev, double dt, double zeta,
                                  bool with_jacobian) const {
  const int nk = disc_.num_elements();
  const int nf = disc_.num_faces();
  const int off_u = nk;
  const int off_c = nk + 2 * nf;
  const double nu = params_.nu;
  const double eta = params_.eta();
  const double he = h_eps_;

  const Eigen::VectorXd rho = x.segment(0, nk);
  FieldV u{x.segment(off_u, 2 * nf)};
  FieldX c{x.segment(off_c, 3 * nk)};
  if (rho.minCoeff() <= 0.0) throw std::domain_error("non-positive candidate density");

  const Eigen::VectorXd lap = ops_.laplacian_matrix() * c.values;
  const TriangleRule& rule = volume_rule();
  const std::size_t nq = rule.size();

  std::vector<LocalData> local(static_cast<std::size_t>(nk));
  parallel_for(static_cast<std::size_t>(nk), [&](std::size_t k) {
    const ElementGeometry& g = disc_.element(static_cast<int>(k));
    LocalData& d = local[k];
    d.u_hat = Vec2::Zero();
    Vec2 u_hat_prev = Vec2::Zero();
    for (int i = 0; i < 3; ++i) {
      d.u_hat += u.dof(g.face[i]) / 3.0;
      u_hat_prev += prev.u.dof(g.face[i]) / 3.0;
      d.grad_psi[i] = -2.0 * g.grad_lambda[i];
    }
    d.m = rho[static_cast<Eigen::Index>(k)] * d.u_hat;
    d.m_prev = prev.rho.values[static_cast<Eigen::Index>(k)] * u_hat_prev;
    d.grad_c = gradient(disc_, c, static_cast<int>(k));
  });

  Eigen::VectorXd r = Eigen::VectorXd::Zero(num_unknowns());
  std::vector<Triplet> trip;
  if (with_jacobian) trip.reserve(static_cast<std::size_t>(200 * nk + 60 * nf));
  auto add = [&](int row, int col, double v) {
    if (with_jacobian) trip.emplace_back(row, col, v);
  };

  // Face fluxes: density and momentum, shared flux divergence per element.
  for (int s = 0; s < nf; ++s) {
    const FaceGeometry& f = disc_.face(s);
    const ElementGeometry& gi = disc_.element(f.in);
    const ElementGeometry& go = disc_.element(f.out);
    const Vec2 us = u.dof(s);
    const double vn = us.dot(f.normal);
    const bool from_in = vn >= 0.0;
    const double a_in = (from_in ? vn : 0.0) + he;
    const double a_out = (from_in ? 0.0 : vn) - he;
    const double len = f.length;

    // Density flux.
    const double r_in = rho[f.in];
    const double r_out = rho[f.out];
    const double flux = diffusive_flux(r_in, r_out, vn, he);
    r[f.in] += zeta * len * flux;
    r[f.out] -= zeta * len * flux;
    if (with_jacobian) {
      const double r_up = from_in ? r_in : r_out;
      for (int side = 0; side < 2; ++side) {
        const int row = side == 0 ? f.in : f.out;
        const double sgn = side == 0 ? zeta * len : -zeta * len;
        add(row, f.in, sgn * a_in);
        add(row, f.out, sgn * a_out);
        for (int j = 0; j < 2; ++j) add(row, off_u + 2 * s + j, sgn * r_up * f.normal[j]);
      }
    }

    // Momentum flux, componentwise, tested against phi hat = 1/3 on the
    // elements containing each velocity face.
    const LocalData& li = local[static_cast<std::size_t>(f.in)];
    const LocalData& lo = local[static_cast<std::size_t>(f.out)];
    for (int j = 0; j < 2; ++j) {
      const double g = diffusive_flux(li.m[j], lo.m[j], vn, he);
      const double m_up = from_in ? li.m[j] : lo.m[j];
      for (int side = 0; side < 2; ++side) {
        const ElementGeometry& gk = side == 0 ? gi : go;
        const double sgn = (side == 0 ? 1.0 : -1.0) * zeta * len / 3.0;
        for (int t = 0; t < 3; ++t) {
          const int row = off_u + 2 * gk.face[t] + j;
          r[row] += sgn * g;
          if (!with_jacobian) continue;
          add(row, f.in, sgn * a_in * li.u_hat[j]);
          add(row, f.out, sgn * a_out * lo.u_hat[j]);
          for (int t2 = 0; t2 < 3; ++t2) {
            add(row, off_u + 2 * gi.face[t2] + j, sgn * a_in * r_in / 3.0);
            add(row, off_u + 2 * go.face[t2] + j, sgn * a_out * r_out / 3.0);
          }
          for (int l = 0; l < 2; ++l) add(row, off_u + 2 * s + l, sgn * m_up * f.normal[l]);
        }
      }
    }
  }

  // Element terms.
  for (int k = 0; k < nk; ++k) {
    const ElementGeometry& g = disc_.element(k);
    const LocalData& d = local[static_cast<std::size_t>(k)];
    const double area = g.area;
    const double rk = rho[k];

    // Density time derivative.
    r[k] += area * (rk - prev.rho.values[k]) / dt;
    add(k, k, area / dt);

    // Quadrature-point values.
    std::array<double, 6> cq{}, cq_prev{}, fq{}, dfq{}, lapq{};
    std::array<Vec2, 6> uq{};
    for (std::size_t q = 0; q < nq; ++q) {
      const auto& lam = rule.points[q];
      cq[q] = evaluate(disc_, c, k, lam);
      cq_prev[q] = evaluate(disc_, prev.c, k, lam);
      fq[q] = f_split(cq[q], cq_prev[q]);
      dfq[q] = f_split_derivative(cq[q]);
      double lz = 0.0;
      for (int a = 0; a < 3; ++a) lz += lam[a] * (lap[3 * k + a] - (1.0 - zeta) * c.values[3 * k + a]);
      lapq[q] = lz;
      uq[q] = evaluate(disc_, u, k, lam);
    }

    const double div_u = gradient(disc_, u, k).trace();
    const double p = law_.pressure(rk);
    const double dp = law_.pressure_derivative(rk);

    for (int i = 0; i < 3; ++i) {
      const int face_i = g.face[i];
      for (int j = 0; j < 2; ++j) {
        const int row = off_u + 2 * face_i + j;
        // Time derivative of the momentum, tested with phi hat = 1/3.
        r[row] += area / 3.0 * (d.m[j] - d.m_prev[j]) / dt;
        add(row, k, area / 3.0 * d.u_hat[j] / dt);
        for (int t = 0; t < 3; ++t) add(row, off_u + 2 * g.face[t] + j, area / 3.0 * rk / 3.0 / dt);

        // Viscous terms.
        double grad_dot = 0.0;
        for (int l = 0; l < 3; ++l) {
          grad_dot += u.values[2 * g.face[l] + j] * d.grad_psi[l].dot(d.grad_psi[i]);
          add(row, off_u + 2 * g.face[l] + j, nu * area * d.grad_psi[l].dot(d.grad_psi[i]));
          for (int m = 0; m < 2; ++m) {
            add(row, off_u + 2 * g.face[l] + m, zeta * eta * area * d.grad_psi[l][m] * d.grad_psi[i][j]);
          }
        }
        r[row] += nu * area * grad_dot + zeta * eta * area * div_u * d.grad_psi[i][j];

        // Pressure.
        r[row] -= zeta * area * p * d.grad_psi[i][j];
        add(row, k, -zeta * area * dp * d.grad_psi[i][j]);

        // Capillary force -(zeta f - Delta c) grad c . phi.
        double cap = 0.0;
        std::array<double, 3> d_c{};    // by c_{k,b}
        std::array<double, 3> d_lap{};  // by (L c)_{k,a}
        for (std::size_t q = 0; q < nq; ++q) {
          const auto& lam = rule.points[q];
          const double w = rule.weights[q] * cr_basis(i, lam);
          const double s_q = zeta * fq[q] - lapq[q];
          cap += w * s_q * d.grad_c[j];
          for (int b = 0; b < 3; ++b) {
            d_c[b] += w * ((zeta * dfq[q] + (1.0 - zeta)) * lam[b] * d.grad_c[j] + s_q * g.grad_lambda[b][j]);
            d_lap[b] -= w * lam[b] * d.grad_c[j];
          }
        }
        r[row] -= zeta * area * cap;
        if (with_jacobian) {
          for (int b = 0; b < 3; ++b) {
            add(row, off_c + 3 * k + b, -zeta * area * d_c[b]);
            const double coef = -zeta * area * d_lap[b];
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(laplacian_rows_, 3 * k + b); it; ++it) {
              add(row, off_c + static_cast<int>(it.col()), coef * it.value());
            }
          }
        }
      }
    }

    // Phase field rows.
    for (int a = 0; a < 3; ++a) {
      const int row = off_c + 3 * k + a;
      double val = 0.0;
      for (int b = 0; b < 3; ++b) {
        const double mab = area / 12.0 * (a == b ? 2.0 : 1.0);
        val += mab * ((c.values[3 * k + b] - prev.c.values[3 * k + b]) / dt + (1.0 - zeta) * c.values[3 * k + b]);
        add(row, off_c + 3 * k + b, mab * (1.0 / dt + (1.0 - zeta)));
      }
      std::array<double, 3> d_c{};
      std::array<Vec2, 3> d_u;
      d_u.fill(Vec2::Zero());
      for (std::size_t q = 0; q < nq; ++q) {
        const auto& lam = rule.points[q];
        const double w = area * rule.weights[q] * lam[a];
        val += w * (zeta * uq[q].dot(d.grad_c) + zeta * fq[q]);
        for (int b = 0; b < 3; ++b) {
          d_c[b] += w * zeta * (uq[q].dot(g.grad_lambda[b]) + dfq[q] * lam[b]);
          d_u[b] += w * zeta * cr_basis(b, lam) * d.grad_c;
        }
      }
      r[row] += val;
      for (int b = 0; b < 3; ++b) {
        add(row, off_c + 3 * k + b, d_c[b]);
        for (int j = 0; j < 2; ++j) add(row, off_u + 2 * g.face[b] + j, d_u[b][j]);
      }
    }
  }

  // Interior-penalty form of the phase field.
  const Eigen::VectorXd bc = ops_.bilinear_matrix() * c.values;
  r.segment(off_c, 3 * nk) += bc;
  if (with_jacobian) {
    const SparseMatrix& bm = ops_.bilinear_matrix();
    for (Eigen::Index col = 0; col < bm.outerSize(); ++col) {
      for (SparseMatrix::InnerIterator it(bm, col); it; ++it) {
        trip.emplace_back(off_c + static_cast<int>(it.row()), off_c + static_cast<int>(it.col()), it.value());
      }
    }
  }

  Assembly out;
  out.residual = std::move(r);
  if (with_jacobian) {
    out.jacobian.resize(num_unknowns(), num_unknowns());
    out.jacobian.setFromTriplets(trip.begin(), trip.end());
  }
  return out;
}

Scheme::NewtonOutcome Scheme::newton(Eigen::VectorXd& x, const State& prev, double dt, double zeta) const {
  NewtonOutcome out;
  const int nk = disc_.num_elements();
  const double tol = params_.newton_tol;
  for (int it = 1; it <= params_.newton_max_iterations; ++it) {
    Assembly as = assemble(x, prev, dt, zeta, true);
    const double res = as.residual.lpNorm<Eigen::Infinity>();
    out.history.push_back(res);
    out.residual = res;
    out.iterations = it;
    // Rounding floor of the residual: size of the largest row sum |J||x|.
    const Eigen::VectorXd scale = as.jacobian.cwiseAbs() * x.cwiseAbs();
    const double floor_tol = tol * std::max(1.0, scale.lpNorm<Eigen::Infinity>());
    Eigen::SparseLU<SparseMatrix> lu;
    if (res <= tol) {
      out.converged = true;
      // One polishing correction: the energy ledger is only as tight as
      // the residual, so take the extra digits when they are free.
      if (res > 0.0) {
        lu.compute(as.jacobian);
        if (lu.info() == Eigen::Success) {
          const Eigen::VectorXd trial = x + lu.solve(-as.residual);
          if (trial.allFinite() && trial.head(nk).minCoeff() > 0.0) {
            const double polished = assemble(trial, prev, dt, zeta, false).residual.lpNorm<Eigen::Infinity>();
            if (polished < res) {
              x = trial;
              out.residual = polished;
              out.history.push_back(polished);
            }
          }
        }
      }
      return out;
    }

    lu.compute(as.jacobian);
    if (lu.info() != Eigen::Success) {
      out.converged = res <= floor_tol;
      return out;
    }
    const Eigen::VectorXd delta = lu.solve(-as.residual);
    if (lu.info() != Eigen::Success || !delta.allFinite()) {
      out.converged = res <= floor_tol;
      return out;
    }

    double alpha = 1.0;
    bool accepted = false;
    double trial_res = res;
    for (int ls = 0; ls < 12; ++ls, alpha *= 0.5) {
      const Eigen::VectorXd trial = x + alpha * delta;
      if (trial.head(nk).minCoeff() <= 0.0) continue;
      trial_res = assemble(trial, prev, dt, zeta, false).residual.lpNorm<Eigen::Infinity>();
      if (std::isfinite(trial_res) && trial_res < res) {
        x = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted || (res <= floor_tol && trial_res > 0.5 * res)) {
      // No further progress possible: accept if at the rounding floor.
      if (accepted) {
        out.residual = trial_res;
        out.history.push_back(trial_res);
      }
      out.converged = out.residual <= floor_tol;
      return out;
    }
  }
  const Eigen::VectorXd final_res = assemble(x, prev, dt, zeta, false).residual;
  out.residual = final_res.lpNorm<Eigen::Infinity>();
  out.converged = out.residual <= tol;
  return out;
}

StepResult Scheme::step(const State& prev, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be > 0");
  StepResult result;
  result.state = prev;
  result.state.step = prev.step + 1;
  result.state.time = prev.time + dt;

  Eigen::VectorXd x = pack(prev);
  NewtonOutcome direct = newton(x, prev, dt, 1.0);
  result.newton_iterations = direct.iterations;
  result.residual_history = direct.history;
  result.residual = direct.residual;
  if (direct.converged) {
    unpack(x, result.state);
    return result;
  }

  // Continuation in zeta from the decoupled linear problem.
  result.used_homotopy = true;
  x = pack(prev);
  NewtonOutcome seed = newton(x, prev, dt, 0.0);
  result.newton_iterations += seed.iterations;
  if (!seed.converged) {
    throw NonConvergence("homotopy seed (zeta = 0) did not converge", result.state.step, result.state.time,
                         seed.residual);
  }
  double zeta = 0.0;
  double h = params_.homotopy_initial_step;
  while (zeta < 1.0) {
    const double target = std::min(1.0, zeta + h);
    Eigen::VectorXd trial = x;
    NewtonOutcome stage = newton(trial, prev, dt, target);
    result.newton_iterations += stage.iterations;
    if (stage.converged) {
      x = trial;
      zeta = target;
      ++result.homotopy_stages;
      if (zeta >= 1.0) {
        result.residual_history = stage.history;
        result.residual = stage.residual;
      }
      h = std::min(2.0 * h, params_.homotopy_initial_step);
    } else {
      h *= 0.5;
      if (h < params_.homotopy_min_step) {
        std::ostringstream msg;
        msg << "homotopy stalled at zeta = " << zeta << " (step " << result.state.step << ", residual "
            << stage.residual << ")";
        throw NonConvergence(msg.str(), result.state.step, result.state.time, stage.residual);
      }
    }
  }
  unpack(x, result.state);
  return result;
}

Trajectory Scheme::run(const State& initial, double final_time, const StepCallback& on_step) const {
  Trajectory traj;
  traj.states.push_back(initial);
  const double dt = this->dt();
  const double start = initial.time;
  const long steps = final_time > start ? static_cast<long>(std::ceil((final_time - start) / dt - 1e-9)) : 0;
  for (long k = 1; k <= steps; ++k) {
    const State& prev = traj.states.back();
    const double dt_k = k == steps ? final_time - prev.time : dt;
    StepResult res = step(prev, dt_k);
    if (k == steps) res.state.time = final_time;
    if (on_step) on_step(prev, res);
    traj.states.push_back(res.state);
    traj.steps.push_back(std::move(res));
  }
  return traj;
}

Trajectory Scheme::run_steps(const State& initial, int steps, const StepCallback& on_step) const {
  Trajectory traj;
  traj.states.push_back(initial);
  for (int k = 1; k <= steps; ++k) {
    StepResult res = step(traj.states.back(), dt());
    if (on_step) on_step(traj.states.back(), res);
    traj.states.push_back(res.state);
    traj.steps.push_back(std::move(res));
  }
  return traj;
}

}  // namespace nsac
