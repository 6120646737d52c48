#include "nsac/dg_operators.hpp"

#include <cmath>
#include <stdexcept>

#include "nsac/quadrature.hpp"

namespace nsac {

FaceTrace trace(const Discretization& disc, const FieldQ& r, int sigma) {
  const FaceGeometry& f = disc.face(sigma);
  return {r.values[f.in], r.values[f.out]};
}

FaceTrace trace(const Discretization& disc, const FieldX& v, int sigma, double t) {
  const FaceGeometry& f = disc.face(sigma);
  return {evaluate(disc, v, f.in, disc.face_point_in(sigma, t)),
          evaluate(disc, v, f.out, disc.face_point_out(sigma, t))};
}

Vec2 face_velocity(const Discretization& disc, const FieldV& u, int sigma) {
  const EdgeRule& rule = face_rule();
  const FaceGeometry& f = disc.face(sigma);
  Vec2 mean = Vec2::Zero();
  for (int q = 0; q < 2; ++q) {
    mean += rule.weights[q] * evaluate(disc, u, f.in, disc.face_point_in(sigma, rule.points[q]));
  }
  return mean;
}

double upwind_average_form(double r_in, double r_out, double v_n) {
  return 0.5 * (r_in + r_out) * v_n - 0.5 * std::abs(v_n) * (r_out - r_in);
}

double upwind(const Discretization& disc, const FieldQ& r, const FieldV& u, int sigma) {
  const FaceGeometry& f = disc.face(sigma);
  return upwind(r.values[f.in], r.values[f.out], u.dof(sigma).dot(f.normal));
}

double diffusive_flux(const Discretization& disc, const FieldQ& r, const FieldV& u, int sigma,
                      double epsilon) {
  const FaceGeometry& f = disc.face(sigma);
  return diffusive_flux(r.values[f.in], r.values[f.out], u.dof(sigma).dot(f.normal),
                        std::pow(disc.h(), epsilon));
}

std::vector<Vec2> grad_h(const Discretization& disc, const FieldX& v) {
  std::vector<Vec2> g(static_cast<std::size_t>(disc.num_elements()));
  for (int k = 0; k < disc.num_elements(); ++k) g[static_cast<std::size_t>(k)] = gradient(disc, v, k);
  return g;
}

std::vector<Mat2> grad_h(const Discretization& disc, const FieldV& u) {
  std::vector<Mat2> g(static_cast<std::size_t>(disc.num_elements()));
  for (int k = 0; k < disc.num_elements(); ++k) g[static_cast<std::size_t>(k)] = gradient(disc, u, k);
  return g;
}

FieldQ div_h(const Discretization& disc, const FieldV& u) {
  FieldQ d = zero_Q(disc);
  for (int k = 0; k < disc.num_elements(); ++k) d.values[k] = gradient(disc, u, k).trace();
  return d;
}

double bilinear_form_direct(const Discretization& disc, const FieldX& v, const FieldX& w,
                            double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("penalty exponent beta must be > 0");
  const double penalty = std::pow(disc.h(), -(1.0 + beta));
  double volume = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    volume += disc.element(k).area * gradient(disc, v, k).dot(gradient(disc, w, k));
  }
  const EdgeRule& rule = face_rule();
  double faces = 0.0;
  for (int s = 0; s < disc.num_faces(); ++s) {
    const FaceGeometry& f = disc.face(s);
    const double avg_v = 0.5 * f.normal.dot(gradient(disc, v, f.in) + gradient(disc, v, f.out));
    const double avg_w = 0.5 * f.normal.dot(gradient(disc, w, f.in) + gradient(disc, w, f.out));
    for (int q = 0; q < 2; ++q) {
      const double jv = trace(disc, v, s, rule.points[q]).jump();
      const double jw = trace(disc, w, s, rule.points[q]).jump();
      faces += f.length * rule.weights[q] * (jw * avg_v + jv * avg_w + penalty * jv * jw);
    }
  }
  return volume + faces;
}

DgOperators::DgOperators(const Discretization& disc, double beta) : beta_(beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("penalty exponent beta must be > 0");
  penalty_ = std::pow(disc.h(), -(1.0 + beta));
  const int nx = 3 * disc.num_elements();

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(9 * disc.num_elements() + 36 * disc.num_faces()));
  for (int k = 0; k < disc.num_elements(); ++k) {
    const ElementGeometry& g = disc.element(k);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        trip.emplace_back(3 * k + a, 3 * k + b, g.area * g.grad_lambda[a].dot(g.grad_lambda[b]));
      }
    }
  }

  const EdgeRule& rule = face_rule();
  for (int s = 0; s < disc.num_faces(); ++s) {
    const FaceGeometry& f = disc.face(s);
    const ElementGeometry& gi = disc.element(f.in);
    const ElementGeometry& go = disc.element(f.out);
    // Six local functions: the in-element basis followed by the out-element basis.
    std::array<int, 6> dof{};
    std::array<double, 6> normal_avg{};
    for (int a = 0; a < 3; ++a) {
      dof[a] = 3 * f.in + a;
      dof[3 + a] = 3 * f.out + a;
      normal_avg[a] = 0.5 * f.normal.dot(gi.grad_lambda[a]);
      normal_avg[3 + a] = 0.5 * f.normal.dot(go.grad_lambda[a]);
    }
    std::array<std::array<double, 6>, 2> jump{};
    for (int q = 0; q < 2; ++q) {
      const Barycentric li = disc.face_point_in(s, rule.points[q]);
      const Barycentric lo = disc.face_point_out(s, rule.points[q]);
      for (int a = 0; a < 3; ++a) {
        jump[q][a] = -li[a];
        jump[q][3 + a] = lo[a];
      }
    }
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        double val = 0.0;
        for (int q = 0; q < 2; ++q) {
          val += rule.weights[q] * (jump[q][j] * normal_avg[i] + jump[q][i] * normal_avg[j] +
                                    penalty_ * jump[q][i] * jump[q][j]);
        }
        trip.emplace_back(dof[i], dof[j], f.length * val);
      }
    }
  }
  b_.resize(nx, nx);
  b_.setFromTriplets(trip.begin(), trip.end());

  std::vector<Eigen::Triplet<double>> mtrip;
  std::vector<Eigen::Triplet<double>> mitrip;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const double area = disc.element(k).area;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        mtrip.emplace_back(3 * k + a, 3 * k + b, area / 12.0 * (a == b ? 2.0 : 1.0));
        mitrip.emplace_back(3 * k + a, 3 * k + b, 3.0 / area * (a == b ? 3.0 : -1.0));
      }
    }
  }
  mass_.resize(nx, nx);
  mass_.setFromTriplets(mtrip.begin(), mtrip.end());
  SparseMatrix mass_inv(nx, nx);
  mass_inv.setFromTriplets(mitrip.begin(), mitrip.end());
  laplacian_ = -(mass_inv * b_);
  laplacian_.makeCompressed();
}

double DgOperators::bilinear(const FieldX& v, const FieldX& w) const {
  return v.values.dot(b_ * w.values);
}

FieldW DgOperators::laplacian(const FieldX& c) const {
  FieldX lap{laplacian_ * c.values};
  // The mean is zero up to rounding; remove the rounding residue too.
  double mean_num = 0.0;
  double area_sum = 0.0;
  for (Eigen::Index r = 0; r < mass_.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(mass_, r); it; ++it) {
      mean_num += it.value() * lap.values[it.row()];
      area_sum += it.value();
    }
  }
  lap.values.array() -= mean_num / area_sum;
  return FieldW(std::move(lap));
}

}  // namespace nsac
