#include "nsac/harness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nsac/diagnostics.hpp"
#include "nsac/quadrature.hpp"

namespace nsac {

double ConsistencyProbe::theta(double t) const {
  const double s = 1.0 - t / final_time;
  return s * s;
}

double ConsistencyProbe::theta_integral(double a, double b) const {
  const double sa = 1.0 - a / final_time;
  const double sb = 1.0 - b / final_time;
  return final_time / 3.0 * (sa * sa * sa - sb * sb * sb);
}

ConsistencyProbe default_probe(double final_time) {
  constexpr double pi = std::numbers::pi;
  ConsistencyProbe p;
  p.final_time = final_time;
  p.phi = [](const Vec2& x) { return std::sin(pi * x[0]) * std::cos(pi * x[1]) + 0.5 * std::cos(pi * x[1]); };
  p.grad_phi = [](const Vec2& x) {
    return Vec2(pi * std::cos(pi * x[0]) * std::cos(pi * x[1]),
                -pi * std::sin(pi * x[0]) * std::sin(pi * x[1]) - 0.5 * pi * std::sin(pi * x[1]));
  };
  p.vphi = [](const Vec2& x) { return Vec2(std::sin(pi * x[1]), std::sin(pi * x[0]) * std::cos(pi * x[1])); };
  p.grad_vphi = [](const Vec2& x) {
    Mat2 g;
    g << 0.0, pi * std::cos(pi * x[1]),
        pi * std::cos(pi * x[0]) * std::cos(pi * x[1]), -pi * std::sin(pi * x[0]) * std::sin(pi * x[1]);
    return g;
  };
  p.psi = [](const Vec2& x) { return std::sin(pi * x[0]) * std::cos(pi * x[1]) + 0.5 * std::cos(pi * x[0]); };
  return p;
}

ConsistencyResiduals consistency_residuals(const Scheme& scheme, const Trajectory& traj,
                                           const ConsistencyProbe& probe) {
  const Discretization& disc = scheme.disc();
  const Params& par = scheme.params();
  const PressureLaw& law = scheme.law();
  const TriangleRule& rule = volume_rule();
  const EdgeRule& frule = face_rule();
  ConsistencyResiduals out;

  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    const State& p = traj.states[i - 1];
    const double th_prev = probe.theta(p.time);
    const double th_int = probe.theta_integral(p.time, s.time);
    const Eigen::VectorXd lap = scheme.ops().laplacian_matrix() * s.c.values;

    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    for (int k = 0; k < disc.num_elements(); ++k) {
      const ElementGeometry& g = disc.element(k);
      const double rho = s.rho.values[k];
      const double drho = rho - p.rho.values[k];
      const Vec2 m = rho * (s.u.dof(g.face[0]) + s.u.dof(g.face[1]) + s.u.dof(g.face[2])) / 3.0;
      const Vec2 m_prev = p.rho.values[k] * (p.u.dof(g.face[0]) + p.u.dof(g.face[1]) + p.u.dof(g.face[2])) / 3.0;
      const Mat2 gu = gradient(disc, s.u, k);
      const Vec2 gc = gradient(disc, s.c, k);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto& lam = rule.points[q];
        const double w = g.area * rule.weights[q];
        const Vec2 x = disc.point(k, lam);
        const Vec2 u = evaluate(disc, s.u, k, lam);
        if (probe.phi) {
          d1 += w * (drho * probe.phi(x) * th_prev - th_int * rho * u.dot(probe.grad_phi(x)));
        }
        const double c = evaluate(disc, s.c, k, lam);
        const double c0 = evaluate(disc, p.c, k, lam);
        const double f = f_split(c, c0);
        double l = 0.0;
        for (int a = 0; a < 3; ++a) l += lam[a] * lap[3 * k + a];
        if (probe.vphi) {
          const Vec2 v = probe.vphi(x);
          const Mat2 gv = probe.grad_vphi(x);
          const double convect = m.dot(gv * u);
          const double visc = par.nu * (gu.array() * gv.array()).sum() + par.eta() * gu.trace() * gv.trace();
          d2 += w * ((m - m_prev).dot(v) * th_prev - th_int * (convect - visc + (f - l) * gc.dot(v)));
        }
        if (probe.psi) {
          const double ps = probe.psi(x);
          d3 += w * ((c - c0) * ps * th_prev - th_int * (-u.dot(gc) * ps + (l - f) * ps));
        }
      }
    }
    // Pressure term as face fluxes: int_K div phi = int_dK phi . n, so the
    // sum telescopes exactly for constant pressure.
    if (probe.vphi) {
      double pres = 0.0;
      for (int sgm = 0; sgm < disc.num_faces(); ++sgm) {
        const FaceGeometry& f = disc.face(sgm);
        const double dp = law.pressure(s.rho.values[f.in]) - law.pressure(s.rho.values[f.out]);
        for (int q = 0; q < 2; ++q) {
          const Vec2 x = disc.point(f.in, disc.face_point_in(sgm, frule.points[q]));
          pres += f.length * frule.weights[q] * dp * probe.vphi(x).dot(f.normal);
        }
      }
      d2 -= th_int * pres;
    }
    out.e1 += std::abs(d1);
    out.e2 += std::abs(d2);
    out.e3 += std::abs(d3);
  }
  return out;
}

double least_squares_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw std::invalid_argument("least_squares_order: need >= 2 points");
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    mx += std::log(h[i]) / n;
    my += std::log(err[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceTable reference_convergence_study(const std::string& preset_name, const std::vector<int>& n_list,
                                             const Params& params) {
  if (n_list.empty()) throw std::invalid_argument("n_list is empty");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] == n_list[i - 1]) throw std::invalid_argument("n_list: duplicate n = " + std::to_string(n_list[i]));
    if (n_list[i] < n_list[i - 1]) throw std::invalid_argument("n_list must be ascending");
  }
  for (int n : n_list) {
    if (n < 1) throw std::invalid_argument("n_list: n must be >= 1");
    if (n_list.back() % n != 0) {
      throw std::invalid_argument("n_list: every n must divide the finest n = " + std::to_string(n_list.back()));
    }
  }
  const InitialData data = preset(preset_name);
  const ConsistencyProbe probe = default_probe(params.final_time);

  ConvergenceTable table;
  table.preset = preset_name;
  table.final_time = params.final_time;
  struct Member {
    Scheme scheme;
    State final;
  };
  std::vector<Member> members;
  for (int n : n_list) {
    const auto start = std::chrono::steady_clock::now();
    Scheme scheme(Discretization(Mesh::uniform_torus(n, params.dim)), params);
    ConvergenceRow row;
    row.n = n;
    row.h = scheme.disc().h();
    row.dt = scheme.dt();
    try {
      const Trajectory traj = scheme.run(scheme.initial_state(data), params.final_time);
      row.e = consistency_residuals(scheme, traj, probe);
      members.push_back({std::move(scheme), traj.states.back()});
    } catch (const NonConvergence& ex) {
      table.complete = false;
      table.failure = "n = " + std::to_string(n) + ": " + ex.what();
      return table;
    }
    row.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    table.rows.push_back(row);
  }

  // The finest member is the reference: it has no relative energy and
  // takes no part in that order.
  const Member& ref = members.back();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const std::size_t last = table.rows.size() - 1;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    ConvergenceRow& row = table.rows[i];
    const Member& m = members[i];
    row.rel_energy = i == last && last > 0
                         ? nan
                         : relative_energy(m.scheme.disc(), m.scheme.law(), m.final, ref.scheme.disc(), ref.final);
    if (i == 0) {
      row.order_rel_energy = row.order_e1 = row.order_e2 = row.order_e3 = nan;
      continue;
    }
    const ConvergenceRow& prev = table.rows[i - 1];
    const double lh = std::log(prev.h / row.h);
    auto order = [lh](double a, double b) { return std::log(a / b) / lh; };
    row.order_rel_energy = i == last ? nan : order(prev.rel_energy, row.rel_energy);
    row.order_e1 = order(prev.e.e1, row.e.e1);
    row.order_e2 = order(prev.e.e2, row.e.e2);
    row.order_e3 = order(prev.e.e3, row.e.e3);
  }
  return table;
}

void write_study_csv(std::ostream& os, const ConvergenceTable& table) {
  const auto old = os.precision();
  os << std::setprecision(17);
  os << "n,h,dt,rel_energy,e1,e2,e3,order_rel_energy,order_e1,order_e2,order_e3,runtime_s\n";
  for (const ConvergenceRow& r : table.rows) {
    os << r.n << ',' << r.h << ',' << r.dt << ',' << r.rel_energy << ',' << r.e.e1 << ',' << r.e.e2 << ','
       << r.e.e3 << ',' << r.order_rel_energy << ',' << r.order_e1 << ',' << r.order_e2 << ',' << r.order_e3
       << ',' << r.runtime_s << '\n';
  }
  os.precision(old);
}

bool AdmissibilityReport::admissible() const {
  for (const Verdict& v : verdicts) {
    if (!v.ok) return false;
  }
  return true;
}

std::string AdmissibilityReport::summary() const {
  std::string s;
  for (const Verdict& v : verdicts) {
    if (!v.ok) s += v.name + ": " + v.message + "\n";
  }
  return s;
}

AdmissibilityReport theorem_condition_check(const Params& p, std::optional<double> h) {
  AdmissibilityReport rep;
  auto fmt = [](double x) {
    std::ostringstream os;
    os << std::setprecision(6) << x;
    return os.str();
  };
  const double d = p.dim;

  {
    Verdict v{"eta", p.eta() > 0.0, ""};
    v.message = v.ok ? "eta = " + fmt(p.eta()) + " > 0"
                     : "eta = ((d-2)/d) nu + lambda = " + fmt(p.eta()) + " must be > 0";
    rep.verdicts.push_back(v);
  }
  {
    const double lower = 4.0 * d / (1.0 + 3.0 * d);
    Verdict v{"epsilon", true, ""};
    if (p.gamma >= 2.0) {
      v.ok = p.epsilon > 0.0;
      v.message = v.ok ? "gamma >= 2 and epsilon > 0" : "gamma >= 2 requires epsilon > 0, got " + fmt(p.epsilon);
    } else if (p.gamma > lower) {
      const double upper = 2.0 * p.gamma - 1.0 - d / 3.0;
      v.ok = p.epsilon > 0.0 && p.epsilon < upper;
      v.message = v.ok ? "epsilon in (0, " + fmt(upper) + ")"
                       : "epsilon = " + fmt(p.epsilon) + " not in (0, 2 gamma - 1 - d/3) = (0, " + fmt(upper) + ")";
    } else {
      v.ok = false;
      v.message = "gamma = " + fmt(p.gamma) + " <= 4d/(1+3d) = " + fmt(lower) + ", no admissible epsilon";
    }
    rep.verdicts.push_back(v);
  }
  {
    const double bound = p.dim == 3 ? 1.5 : 8.0 / 7.0;
    Verdict v{"gamma", p.gamma > bound, ""};
    const std::string name = p.dim == 3 ? "3/2" : "8/7";
    v.message = v.ok ? "gamma > " + name : "gamma = " + fmt(p.gamma) + " <= " + name + " (d = " + std::to_string(p.dim) + ")";
    rep.verdicts.push_back(v);
  }
  {
    Verdict v{"beta", p.beta > 0.0, ""};
    v.message = v.ok ? "beta > 0" : "beta = " + fmt(p.beta) + " must be > 0";
    rep.verdicts.push_back(v);
  }
  if (h && p.beta > 0.0) {
    const double threshold = 2.0 + std::sqrt(2.0);
    const double value = std::pow(*h, -p.beta);
    Verdict v{"coercivity", value > threshold, ""};
    v.message = v.ok ? "h^-beta = " + fmt(value) + " > 2 + sqrt(2)"
                     : "h^-beta = " + fmt(value) + " <= 2 + sqrt(2): the interior-penalty form is not coercive on this mesh";
    rep.verdicts.push_back(v);
  }
  return rep;
}

}  // namespace nsac
