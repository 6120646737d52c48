#include "nsac/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "nsac/quadrature.hpp"

namespace nsac {

Discretization::Discretization(Mesh mesh) : mesh_(std::move(mesh)) {
  if (mesh_.dim() != 2) {
    throw std::invalid_argument("Discretization: only two-dimensional meshes are supported");
  }
  elements_.resize(mesh_.num_elements());
  for (std::size_t k = 0; k < mesh_.num_elements(); ++k) {
    const Element& e = mesh_.elements()[k];
    ElementGeometry& g = elements_[k];
    for (int a = 0; a < 3; ++a) {
      g.vertex[a] = Vec2(e.coords[a][0], e.coords[a][1]);
      g.face[a] = e.face[a];
    }
    Mat2 jac;
    jac.col(0) = g.vertex[1] - g.vertex[0];
    jac.col(1) = g.vertex[2] - g.vertex[0];
    g.area = 0.5 * std::abs(jac.determinant());
    const Mat2 inv = jac.inverse();
    g.grad_lambda[1] = inv.row(0).transpose();
    g.grad_lambda[2] = inv.row(1).transpose();
    g.grad_lambda[0] = -g.grad_lambda[1] - g.grad_lambda[2];
    g.centroid = (g.vertex[0] + g.vertex[1] + g.vertex[2]) / 3.0;
  }
  faces_.resize(mesh_.num_faces());
  for (std::size_t s = 0; s < mesh_.num_faces(); ++s) {
    const Face& f = mesh_.faces()[s];
    FaceGeometry& g = faces_[s];
    g.in = f.element[0];
    g.out = f.element[1];
    g.in_face = f.local_face[0];
    g.out_face = f.local_face[1];
    g.in_vertices = {f.local_vertices[0][0], f.local_vertices[0][1]};
    g.out_vertices = {f.local_vertices[1][0], f.local_vertices[1][1]};
    g.normal = Vec2(f.normal[0], f.normal[1]);
    g.length = f.area;
  }
}

Vec2 Discretization::point(int k, const Barycentric& lambda) const {
  const ElementGeometry& g = element(k);
  return lambda[0] * g.vertex[0] + lambda[1] * g.vertex[1] + lambda[2] * g.vertex[2];
}

Barycentric Discretization::face_point_in(int sigma, double t) const {
  const FaceGeometry& f = face(sigma);
  Barycentric lambda{0.0, 0.0, 0.0};
  lambda[static_cast<std::size_t>(f.in_vertices[0])] = 1.0 - t;
  lambda[static_cast<std::size_t>(f.in_vertices[1])] = t;
  return lambda;
}

Barycentric Discretization::face_point_out(int sigma, double t) const {
  const FaceGeometry& f = face(sigma);
  Barycentric lambda{0.0, 0.0, 0.0};
  lambda[static_cast<std::size_t>(f.out_vertices[0])] = 1.0 - t;
  lambda[static_cast<std::size_t>(f.out_vertices[1])] = t;
  return lambda;
}

FieldQ zero_Q(const Discretization& disc) { return {Eigen::VectorXd::Zero(disc.num_elements())}; }
FieldV zero_V(const Discretization& disc) { return {Eigen::VectorXd::Zero(2 * disc.num_faces())}; }
FieldX zero_X(const Discretization& disc) { return {Eigen::VectorXd::Zero(3 * disc.num_elements())}; }

double evaluate(const Discretization&, const FieldX& v, int k, const Barycentric& lambda) {
  return v.values[3 * k] * lambda[0] + v.values[3 * k + 1] * lambda[1] +
         v.values[3 * k + 2] * lambda[2];
}

Vec2 evaluate(const Discretization& disc, const FieldV& u, int k, const Barycentric& lambda) {
  const ElementGeometry& g = disc.element(k);
  Vec2 r = Vec2::Zero();
  for (int i = 0; i < 3; ++i) r += cr_basis(i, lambda) * u.dof(g.face[i]);
  return r;
}

Vec2 gradient(const Discretization& disc, const FieldX& v, int k) {
  const ElementGeometry& g = disc.element(k);
  return v.values[3 * k] * g.grad_lambda[0] + v.values[3 * k + 1] * g.grad_lambda[1] +
         v.values[3 * k + 2] * g.grad_lambda[2];
}

Mat2 gradient(const Discretization& disc, const FieldV& u, int k) {
  const ElementGeometry& g = disc.element(k);
  Mat2 grad = Mat2::Zero();
  for (int i = 0; i < 3; ++i) grad += u.dof(g.face[i]) * (-2.0 * g.grad_lambda[i]).transpose();
  return grad;
}

FieldQ project_Q(const Discretization& disc, const ScalarFunction& f) {
  const TriangleRule& rule = projection_rule();
  FieldQ q = zero_Q(disc);
  for (int k = 0; k < disc.num_elements(); ++k) {
    double avg = 0.0;
    for (std::size_t p = 0; p < rule.size(); ++p) avg += rule.weights[p] * f(disc.point(k, rule.points[p]));
    q.values[k] = avg;
  }
  return q;
}

FieldQVec project_Q(const Discretization& disc, const VectorFunction& f) {
  const TriangleRule& rule = projection_rule();
  FieldQVec q;
  q.values.assign(static_cast<std::size_t>(disc.num_elements()), Vec2::Zero());
  for (int k = 0; k < disc.num_elements(); ++k) {
    Vec2 avg = Vec2::Zero();
    for (std::size_t p = 0; p < rule.size(); ++p) avg += rule.weights[p] * f(disc.point(k, rule.points[p]));
    q.values[static_cast<std::size_t>(k)] = avg;
  }
  return q;
}

FieldQ project_Q(const Discretization& disc, const FieldQ& v) {
  const TriangleRule& rule = projection_rule();
  FieldQ q = zero_Q(disc);
  for (int k = 0; k < disc.num_elements(); ++k) {
    double avg = 0.0;
    for (std::size_t p = 0; p < rule.size(); ++p) avg += rule.weights[p] * v.values[k];
    q.values[k] = avg;
  }
  return q;
}

FieldV project_V(const Discretization& disc, const VectorFunction& f) {
  FieldV u = zero_V(disc);
  for (int s = 0; s < disc.num_faces(); ++s) {
    const FaceGeometry& g = disc.face(s);
    const Vec2 mid = disc.point(g.in, disc.face_point_in(s, 0.5));
    const Vec2 val = f(mid);
    u.values[2 * s] = val[0];
    u.values[2 * s + 1] = val[1];
  }
  return u;
}

namespace {

// Local L2 projection onto P1 from moments m_a = (1/|K|) int f lambda_a.
// The P1 mass matrix is |K|/12 (1 + delta_ab); its inverse times |K| is
// 3 * [[3,-1,-1],[-1,3,-1],[-1,-1,3]].
std::array<double, 3> solve_local_mass(const std::array<double, 3>& m) {
  const double s = m[0] + m[1] + m[2];
  return {3.0 * (4.0 * m[0] - s), 3.0 * (4.0 * m[1] - s), 3.0 * (4.0 * m[2] - s)};
}

}  // namespace

FieldX project_X(const Discretization& disc, const ScalarFunction& f) {
  const TriangleRule& rule = projection_rule();
  FieldX x = zero_X(disc);
  for (int k = 0; k < disc.num_elements(); ++k) {
    std::array<double, 3> m{0.0, 0.0, 0.0};
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const double fv = f(disc.point(k, rule.points[p]));
      for (int a = 0; a < 3; ++a) m[a] += rule.weights[p] * fv * rule.points[p][a];
    }
    const auto c = solve_local_mass(m);
    for (int a = 0; a < 3; ++a) x.values[3 * k + a] = c[a];
  }
  return x;
}

FieldX project_X(const Discretization& disc, const FieldX& v) {
  const TriangleRule& rule = projection_rule();
  FieldX x = zero_X(disc);
  for (int k = 0; k < disc.num_elements(); ++k) {
    std::array<double, 3> m{0.0, 0.0, 0.0};
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const double fv = evaluate(disc, v, k, rule.points[p]);
      for (int a = 0; a < 3; ++a) m[a] += rule.weights[p] * fv * rule.points[p][a];
    }
    const auto c = solve_local_mass(m);
    for (int a = 0; a < 3; ++a) x.values[3 * k + a] = c[a];
  }
  return x;
}

FieldW project_W(const Discretization& disc, const FieldX& v) {
  const double mean = integrate(disc, v) / disc.domain_area();
  FieldX w = v;
  w.values.array() -= mean;
  return FieldW(std::move(w));
}

FieldQVec hat(const Discretization& disc, const FieldV& u) {
  FieldQVec q;
  q.values.resize(static_cast<std::size_t>(disc.num_elements()));
  for (int k = 0; k < disc.num_elements(); ++k) {
    const ElementGeometry& g = disc.element(k);
    q.values[static_cast<std::size_t>(k)] = (u.dof(g.face[0]) + u.dof(g.face[1]) + u.dof(g.face[2])) / 3.0;
  }
  return q;
}

double integrate(const Discretization& disc, const FieldQ& v) {
  double sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) sum += disc.element(k).area * v.values[k];
  return sum;
}

double integrate(const Discretization& disc, const FieldX& v) {
  double sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    sum += disc.element(k).area * (v.values[3 * k] + v.values[3 * k + 1] + v.values[3 * k + 2]) / 3.0;
  }
  return sum;
}

double l2_error(const Discretization& disc, const FieldQ& v, const ScalarFunction& f) {
  const TriangleRule& rule = volume_rule();
  double sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const double area = disc.element(k).area;
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const double d = v.values[k] - f(disc.point(k, rule.points[p]));
      sum += area * rule.weights[p] * d * d;
    }
  }
  return std::sqrt(sum);
}

double l2_error(const Discretization& disc, const FieldQVec& v, const VectorFunction& f) {
  const TriangleRule& rule = volume_rule();
  double sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const double area = disc.element(k).area;
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const Vec2 d = v.values[static_cast<std::size_t>(k)] - f(disc.point(k, rule.points[p]));
      sum += area * rule.weights[p] * d.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double l2_error(const Discretization& disc, const FieldV& v, const VectorFunction& f) {
  const TriangleRule& rule = volume_rule();
  double sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const double area = disc.element(k).area;
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const Vec2 d = evaluate(disc, v, k, rule.points[p]) - f(disc.point(k, rule.points[p]));
      sum += area * rule.weights[p] * d.squaredNorm();
    }
  }
  return std::sqrt(sum);
}

double l2_error(const Discretization& disc, const FieldX& v, const ScalarFunction& f) {
  const TriangleRule& rule = volume_rule();
  double sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const double area = disc.element(k).area;
    for (std::size_t p = 0; p < rule.size(); ++p) {
      const double d = evaluate(disc, v, k, rule.points[p]) - f(disc.point(k, rule.points[p]));
      sum += area * rule.weights[p] * d * d;
    }
  }
  return std::sqrt(sum);
}

double l2_norm(const Discretization& disc, const FieldX& v) {
  // Exact: the P1 mass matrix applied elementwise.
  double sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const double a = v.values[3 * k], b = v.values[3 * k + 1], c = v.values[3 * k + 2];
    sum += disc.element(k).area / 12.0 * (2.0 * (a * a + b * b + c * c) + 2.0 * (a * b + b * c + a * c));
  }
  return std::sqrt(sum);
}

namespace {

void require_positive_beta(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("penalty exponent beta must be > 0");
}

double gradient_part(const Discretization& disc, const FieldX& v) {
  double sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) sum += disc.element(k).area * gradient(disc, v, k).squaredNorm();
  return sum;
}

double jump_part(const Discretization& disc, const FieldX& v) {
  const EdgeRule& rule = face_rule();
  double sum = 0.0;
  for (int s = 0; s < disc.num_faces(); ++s) {
    const FaceGeometry& f = disc.face(s);
    for (int q = 0; q < 2; ++q) {
      const double t = rule.points[q];
      const double jump = evaluate(disc, v, f.out, disc.face_point_out(s, t)) -
                          evaluate(disc, v, f.in, disc.face_point_in(s, t));
      sum += f.length * rule.weights[q] * jump * jump;
    }
  }
  return sum;
}

}  // namespace

double seminorm_B(const Discretization& disc, const FieldX& v, double beta) {
  require_positive_beta(beta);
  const double penalty = std::pow(disc.h(), -(1.0 + beta));
  return std::sqrt(gradient_part(disc, v) + penalty * jump_part(disc, v));
}

double broken_norm_H(const Discretization& disc, const FieldX& v, double beta) {
  require_positive_beta(beta);
  const double h = disc.h();
  double avg = 0.0;
  for (int s = 0; s < disc.num_faces(); ++s) {
    const FaceGeometry& f = disc.face(s);
    const Vec2 mean = 0.5 * (gradient(disc, v, f.in) + gradient(disc, v, f.out));
    avg += f.length * mean.squaredNorm();
  }
  return std::sqrt(gradient_part(disc, v) + h * avg + std::pow(h, -(1.0 + beta)) * jump_part(disc, v));
}

double broken_norm_H_error(const Discretization& disc, const FieldX& v_h,
                           const GradientFunction& grad_v, double beta) {
  require_positive_beta(beta);
  const double h = disc.h();
  const TriangleRule& vrule = volume_rule();
  double grad_sum = 0.0;
  for (int k = 0; k < disc.num_elements(); ++k) {
    const Vec2 gh = gradient(disc, v_h, k);
    const double area = disc.element(k).area;
    for (std::size_t p = 0; p < vrule.size(); ++p) {
      grad_sum += area * vrule.weights[p] * (gh - grad_v(disc.point(k, vrule.points[p]))).squaredNorm();
    }
  }
  const EdgeRule& frule = face_rule();
  double avg = 0.0;
  for (int s = 0; s < disc.num_faces(); ++s) {
    const FaceGeometry& f = disc.face(s);
    const Vec2 mean = 0.5 * (gradient(disc, v_h, f.in) + gradient(disc, v_h, f.out));
    for (int q = 0; q < 2; ++q) {
      const Vec2 x = disc.point(f.in, disc.face_point_in(s, frule.points[q]));
      avg += f.length * frule.weights[q] * (mean - grad_v(x)).squaredNorm();
    }
  }
  return std::sqrt(grad_sum + h * avg + std::pow(h, -(1.0 + beta)) * jump_part(disc, v_h));
}

Vec2 face_jump_integral(const Discretization& disc, const FieldV& u, int sigma) {
  const EdgeRule& rule = face_rule();
  const FaceGeometry& f = disc.face(sigma);
  Vec2 sum = Vec2::Zero();
  for (int q = 0; q < 2; ++q) {
    const double t = rule.points[q];
    sum += f.length * rule.weights[q] *
           (evaluate(disc, u, f.out, disc.face_point_out(sigma, t)) -
            evaluate(disc, u, f.in, disc.face_point_in(sigma, t)));
  }
  return sum;
}

}  // namespace nsac
