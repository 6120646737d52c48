#include "nsac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "nsac/quadrature.hpp"

namespace nsac {

namespace {

Vec2 cell_mean(const Discretization& disc, const FieldV& u, int k) {
  const ElementGeometry& g = disc.element(k);
  return (u.dof(g.face[0]) + u.dof(g.face[1]) + u.dof(g.face[2])) / 3.0;
}

double quad_form(const SparseMatrix& b, const Eigen::VectorXd& v) { return v.dot(b * v); }

}  // namespace

EnergyParts energy(const Scheme& scheme, const State& s) {
  const Discretization& disc = scheme.disc();
  const TriangleRule& rule = volume_rule();
  EnergyParts e;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const double area = disc.element(k).area;
    const double rho = s.rho.values[k];
    e.kinetic += 0.5 * area * rho * cell_mean(disc, s.u, k).squaredNorm();
    e.internal += area * scheme.law().potential(rho);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      e.free += area * rule.weights[q] * ginzburg_landau(evaluate(disc, s.c, k, rule.points[q]));
    }
  }
  e.gradient = 0.5 * quad_form(scheme.ops().bilinear_matrix(), s.c.values);
  return e;
}

double EnergyReport::dnum_total() const {
  double s = 0.0;
  for (double d : dnum) s += d;
  return s;
}

bool EnergyReport::consistent(double energy0, double identity_tol, double sign_tol) const {
  if (!(residual <= identity_tol * std::max(1.0, energy0))) return false;
  return std::all_of(dnum.begin(), dnum.end(), [&](double d) { return d >= -sign_tol; });
}

EnergyReport energy_report(const Scheme& scheme, const State& cur, const State& prev) {
  const Discretization& disc = scheme.disc();
  const PressureLaw& law = scheme.law();
  const Params& par = scheme.params();
  const TriangleRule& rule = volume_rule();
  const double dt = cur.time - prev.time;
  if (!(dt > 0.0)) throw std::invalid_argument("energy_report: states must be consecutive in time");
  const double he = scheme.h_pow_eps();

  EnergyReport r;
  r.k = cur.step;
  r.t = cur.time;
  r.dt = dt;
  r.parts = energy(scheme, cur);
  r.energy = r.parts.total();
  r.energy_prev = energy(scheme, prev).total();

  double min_rho = cur.rho.values[0];
  int argmin = 0;
  double dtp = 0.0;
  double p_div = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const ElementGeometry& g = disc.element(k);
    const double area = g.area;
    const double rho = cur.rho.values[k];
    const double rho_prev = prev.rho.values[k];
    const Mat2 grad_u = gradient(disc, cur.u, k);
    const double div = grad_u.trace();
    const Vec2 gc = gradient(disc, cur.c, k);

    r.visc_diss += par.nu * area * grad_u.squaredNorm();
    r.div_diss += par.eta() * area * div * div;
    r.mass += area * rho;
    if (rho < min_rho) {
      min_rho = rho;
      argmin = k;
    }
    dtp += area * (law.potential(rho) - law.potential(rho_prev)) / dt;
    p_div += area * law.pressure(rho) * div;

    const Vec2 du = cell_mean(disc, cur.u, k) - cell_mean(disc, prev.u, k);
    r.dnum[0] += area * rho_prev * du.squaredNorm() / (2.0 * dt);
    r.dnum[3] += area * law.bregman(rho_prev, rho) / dt;

    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& lam = rule.points[q];
      const double w = area * rule.weights[q];
      const double c = evaluate(disc, cur.c, k, lam);
      const double c0 = evaluate(disc, prev.c, k, lam);
      const double material = (c - c0) / dt + evaluate(disc, cur.u, k, lam).dot(gc);
      r.ac_diss += w * material * material;
      r.dnum[6] += w * (f_split(c, c0) * (c - c0) - (ginzburg_landau(c) - ginzburg_landau(c0))) / dt;
    }
  }
  r.min_rho = min_rho;
  r.internal_balance = dtp + p_div;
  {
    const double div = gradient(disc, cur.u, argmin).trace();
    const double bound = prev.rho.values[argmin] / (1.0 + dt * std::abs(div));
    r.positivity_bound = min_rho > 0.0 && min_rho >= bound * (1.0 - 1e-12);
  }

  for (int s = 0; s < disc.num_faces(); ++s) {
    const FaceGeometry& f = disc.face(s);
    const double len = f.length;
    const double vn = cur.u.dof(s).dot(f.normal);
    const double r_in = cur.rho.values[f.in];
    const double r_out = cur.rho.values[f.out];
    const bool from_in = vn >= 0.0;
    const double r_up = from_in ? r_in : r_out;
    const double r_down = from_in ? r_out : r_in;
    const double jump_u = (cell_mean(disc, cur.u, f.out) - cell_mean(disc, cur.u, f.in)).squaredNorm();
    r.dnum[1] += 0.5 * len * r_up * std::abs(vn) * jump_u;
    r.dnum[2] += he * len * 0.5 * (r_in + r_out) * jump_u;
    r.dnum[4] += len * (he * (r_out - r_in) * (law.potential_derivative(r_out) - law.potential_derivative(r_in)) +
                        std::abs(vn) * law.bregman(r_up, r_down));
  }
  const Eigen::VectorXd dc = cur.c.values - prev.c.values;
  r.dnum[5] = quad_form(scheme.ops().bilinear_matrix(), dc) / (2.0 * dt);

  r.lhs = (r.energy - r.energy_prev) / dt + r.visc_diss + r.div_diss + r.ac_diss;
  r.residual = std::abs(r.lhs + r.dnum_total());
  return r;
}

double relative_energy(const Scheme& scheme, const State& s, const ReferenceFields& ref) {
  const Discretization& disc = scheme.disc();
  const PressureLaw& law = scheme.law();
  const TriangleRule& rule = volume_rule();
  double total = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const double area = disc.element(k).area;
    const double rho = s.rho.values[k];
    const Vec2 gc = gradient(disc, s.c, k);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& lam = rule.points[q];
      const Vec2 x = disc.point(k, lam);
      const double big_r = ref.rho(x);
      if (!(big_r > 0.0)) throw std::invalid_argument("relative_energy: reference density must be > 0");
      const double dc = evaluate(disc, s.c, k, lam) - ref.c(x);
      const double val = 0.5 * rho * (evaluate(disc, s.u, k, lam) - ref.u(x)).squaredNorm() + dc * dc +
                         0.5 * (gc - ref.grad_c(x)).squaredNorm() + law.bregman(rho, big_r);
      total += area * rule.weights[q] * val;
    }
  }
  return total;
}

namespace {

// Element of a uniform torus mesh containing x, and its barycentric
// coordinates. The split is fixed per cell: lower triangle 2c below the
// cell diagonal, upper triangle 2c + 1 above it.
std::pair<int, Barycentric> locate(const Discretization& disc, const Vec2& x, const Vec2& probe) {
  const int n = disc.mesh().cells_per_axis();
  auto cell = [n](double s) {
    const double t = (s + 1.0) * n / 2.0;
    int i = static_cast<int>(std::floor(t));
    i = std::clamp(i, 0, n - 1);
    return std::pair<int, double>{i, t - i};
  };
  const auto [i, xi] = cell(probe[0]);
  const auto [j, eta] = cell(probe[1]);
  const int k = 2 * (j * n + i) + (xi > eta ? 0 : 1);
  const ElementGeometry& g = disc.element(k);
  Barycentric lam{};
  for (int a = 0; a < 3; ++a) lam[a] = 1.0 / 3.0 + g.grad_lambda[a].dot(x - g.centroid);
  return {k, lam};
}

}  // namespace

double relative_energy(const Discretization& disc, const PressureLaw& law, const State& s,
                       const Discretization& ref_disc, const State& ref) {
  const int n = disc.mesh().cells_per_axis();
  const int nr = ref_disc.mesh().cells_per_axis();
  if (nr % n != 0) throw std::invalid_argument("relative_energy: reference mesh must be a refinement");
  const TriangleRule& rule = volume_rule();
  double total = 0.0;
  for (int kr = 0; kr < ref_disc.num_elements(); ++kr) {
    const ElementGeometry& gr = ref_disc.element(kr);
    const double big_r = ref.rho.values[kr];
    if (!(big_r > 0.0)) throw std::invalid_argument("relative_energy: reference density must be > 0");
    const Vec2 grad_ref = gradient(ref_disc, ref.c, kr);
    const auto [k, lam_c] = locate(disc, gr.centroid, gr.centroid);
    const double rho = s.rho.values[k];
    const Vec2 grad_c = gradient(disc, s.c, k);
    double val = law.bregman(rho, big_r) + 0.5 * (grad_c - grad_ref).squaredNorm();
    double quad = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto& lam_r = rule.points[q];
      const Vec2 x = ref_disc.point(kr, lam_r);
      const auto [k2, lam] = locate(disc, x, gr.centroid);
      (void)k2;
      const double dc = evaluate(disc, s.c, k, lam) - evaluate(ref_disc, ref.c, kr, lam_r);
      const Vec2 du = evaluate(disc, s.u, k, lam) - evaluate(ref_disc, ref.u, kr, lam_r);
      quad += rule.weights[q] * (0.5 * rho * du.squaredNorm() + dc * dc);
    }
    total += gr.area * (val + quad);
  }
  return total;
}

double FluxIdentity::relative() const {
  return difference / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

FluxIdentity flux_identity_check(const Discretization& disc, const FieldQ& rho, const FieldV& u,
                                 double epsilon) {
  const double he = std::pow(disc.h(), epsilon);
  const FieldQVec u_hat = hat(disc, u);
  FluxIdentity out;
  for (int s = 0; s < disc.num_faces(); ++s) {
    const FaceGeometry& f = disc.face(s);
    const double vn = face_velocity(disc, u, s).dot(f.normal);
    const Vec2& ui = u_hat.values[static_cast<std::size_t>(f.in)];
    const Vec2& uo = u_hat.values[static_cast<std::size_t>(f.out)];
    const double ri = rho.values[f.in];
    const double ro = rho.values[f.out];
    const Vec2 jump = uo - ui;

    double momentum = 0.0;
    for (int j = 0; j < 2; ++j) momentum += diffusive_flux(ri * ui[j], ro * uo[j], vn, he) * jump[j];
    const double kinetic_jump = 0.5 * uo.squaredNorm() - 0.5 * ui.squaredNorm();
    out.lhs += f.length * (momentum - diffusive_flux(ri, ro, vn, he) * kinetic_jump);

    const double r_up = vn >= 0.0 ? ri : ro;
    out.rhs += f.length * (-0.5 * r_up * std::abs(vn) * jump.squaredNorm() -
                           he * 0.5 * (ri + ro) * jump.squaredNorm());
  }
  out.difference = std::abs(out.lhs - out.rhs);
  return out;
}

UniformBounds uniform_bounds_report(const Scheme& scheme, const Trajectory& traj) {
  const Discretization& disc = scheme.disc();
  const double gamma = scheme.params().gamma;
  const double pm = 2.0 * gamma / (gamma + 1.0);
  const TriangleRule& rule = volume_rule();
  UniformBounds b;
  double grad_sq = 0.0, div_sq = 0.0, lap_sq = 0.0, dtc_sq = 0.0, mat_sq = 0.0;
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    double kin = 0.0, rg = 0.0, mom = 0.0;
    for (int k = 0; k < disc.num_elements(); ++k) {
      const double area = disc.element(k).area;
      const double rho = s.rho.values[k];
      const Vec2 uh = cell_mean(disc, s.u, k);
      kin += area * rho * uh.squaredNorm();
      rg += area * std::pow(rho, gamma);
      mom += area * std::pow((rho * uh).norm(), pm);
    }
    b.kinetic_l1 = std::max(b.kinetic_l1, kin);
    b.rho_lgamma = std::max(b.rho_lgamma, std::pow(rg, 1.0 / gamma));
    b.momentum = std::max(b.momentum, std::pow(mom, 1.0 / pm));
    b.c_seminorm = std::max(b.c_seminorm, std::sqrt(std::max(0.0, quad_form(scheme.ops().bilinear_matrix(), s.c.values))));
    if (i == 0) continue;

    const State& p = traj.states[i - 1];
    const double dt = s.time - p.time;
    const Eigen::VectorXd lap = scheme.ops().laplacian_matrix() * s.c.values;
    double f_sq = 0.0, lap_k = 0.0, dtc_k = 0.0, mat_k = 0.0;
    for (int k = 0; k < disc.num_elements(); ++k) {
      const double area = disc.element(k).area;
      const Mat2 gu = gradient(disc, s.u, k);
      grad_sq += dt * area * gu.squaredNorm();
      div_sq += dt * area * gu.trace() * gu.trace();
      const Vec2 gc = gradient(disc, s.c, k);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& lam = rule.points[q];
        const double w = area * rule.weights[q];
        const double c = evaluate(disc, s.c, k, lam);
        const double c0 = evaluate(disc, p.c, k, lam);
        const double f = f_split(c, c0);
        double l = 0.0;
        for (int a = 0; a < 3; ++a) l += lam[a] * lap[3 * k + a];
        const double dtc = (c - c0) / dt;
        const double mat = dtc + evaluate(disc, s.u, k, lam).dot(gc);
        f_sq += w * f * f;
        lap_k += w * l * l;
        dtc_k += w * std::pow(std::abs(dtc), 1.5);
        mat_k += w * mat * mat;
      }
    }
    b.f_l2 = std::max(b.f_l2, std::sqrt(f_sq));
    lap_sq += dt * lap_k;
    dtc_sq += dt * std::pow(dtc_k, 2.0 / 1.5);
    mat_sq += dt * mat_k;
  }
  b.grad_u_l2l2 = std::sqrt(grad_sq);
  b.div_u_l2l2 = std::sqrt(div_sq);
  b.lap_c_l2l2 = std::sqrt(lap_sq);
  b.dt_c_l2l32 = std::sqrt(dtc_sq);
  b.material_c_l2l2 = std::sqrt(mat_sq);
  return b;
}

void write_energy_csv_header(std::ostream& os) {
  os << "k,t,E,KE,P_int,F_int,grad_c_seminorm,visc_diss,div_diss,ac_diss";
  for (int i = 1; i <= 7; ++i) os << ",dnum_" << i;
  os << ",r_E,mass,min_rho\n";
}

void write_energy_csv_row(std::ostream& os, const EnergyReport& r) {
  const auto old = os.precision();
  os << std::setprecision(17);
  os << r.k << ',' << r.t << ',' << r.energy << ',' << r.parts.kinetic << ',' << r.parts.internal << ','
     << r.parts.free << ',' << r.parts.gradient << ',' << r.visc_diss << ',' << r.div_diss << ',' << r.ac_diss;
  for (double d : r.dnum) os << ',' << d;
  os << ',' << r.residual << ',' << r.mass << ',' << r.min_rho << '\n';
  os.precision(old);
}

}  // namespace nsac
