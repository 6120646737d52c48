#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

#include "nsac/mesh.hpp"

namespace nsac {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Barycentric = std::array<double, 3>;

using ScalarFunction = std::function<double(const Vec2&)>;
using VectorFunction = std::function<Vec2(const Vec2&)>;
using GradientFunction = std::function<Vec2(const Vec2&)>;

/// Per-element geometry of a triangle.
struct ElementGeometry {
  std::array<Vec2, 3> vertex;
  std::array<Vec2, 3> grad_lambda;  ///< gradients of the barycentric coordinates
  std::array<int, 3> face{};        ///< face opposite local vertex i
  double area = 0.0;
  Vec2 centroid;
};

/// Per-face geometry. Traces are evaluated at the point with parameter t
/// along the face: barycentric weight (1-t) on face vertex 0 and t on face
/// vertex 1, the face vertices being given as local indices on each side.
struct FaceGeometry {
  int in = -1;
  int out = -1;
  int in_face = -1;   ///< local face index inside the in element
  int out_face = -1;  ///< local face index inside the out element
  std::array<int, 2> in_vertices{};
  std::array<int, 2> out_vertices{};
  Vec2 normal;  ///< unit normal from in to out
  double length = 0.0;
};

/// Two-dimensional geometry cache shared by all discrete spaces and
/// operators. Holds its own copy of the mesh.
class Discretization {
 public:
  /// Throws std::invalid_argument unless mesh.dim() == 2.
  explicit Discretization(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  const ElementGeometry& element(int k) const { return elements_[static_cast<std::size_t>(k)]; }
  const FaceGeometry& face(int sigma) const { return faces_[static_cast<std::size_t>(sigma)]; }
  double h() const { return mesh_.h(); }
  double domain_area() const { return mesh_.domain_volume(); }

  Vec2 point(int k, const Barycentric& lambda) const;
  /// Barycentric coordinates inside element `in`/`out` of the face point t.
  Barycentric face_point_in(int sigma, double t) const;
  Barycentric face_point_out(int sigma, double t) const;

 private:
  Mesh mesh_;
  std::vector<ElementGeometry> elements_;
  std::vector<FaceGeometry> faces_;
};

/// Q_h: one value per element.
struct FieldQ {
  Eigen::VectorXd values;
};

/// Piecewise-constant vector field (e.g. the cell averages of a velocity).
struct FieldQVec {
  std::vector<Vec2> values;
};

/// V_h: Crouzeix–Raviart velocities, one face-mean vector per face,
/// stored as values[2*sigma + component].
struct FieldV {
  Eigen::VectorXd values;
  Vec2 dof(int sigma) const { return {values[2 * sigma], values[2 * sigma + 1]}; }
};

/// X_h: discontinuous elementwise-linear scalars, stored as nodal values
/// values[3*k + a] at the local vertices of each element.
struct FieldX {
  Eigen::VectorXd values;
};

/// W_h: an X_h field with zero mean. Only produced by project_W.
class FieldW {
 public:
  const FieldX& field() const { return field_; }
  const Eigen::VectorXd& values() const { return field_.values; }

 private:
  friend FieldW project_W(const Discretization& disc, const FieldX& v);
  friend class DgOperators;
  explicit FieldW(FieldX f) : field_(std::move(f)) {}
  FieldX field_;
};

// Zero fields of the right size.
FieldQ zero_Q(const Discretization& disc);
FieldV zero_V(const Discretization& disc);
FieldX zero_X(const Discretization& disc);

// Pointwise evaluation inside element k.
double evaluate(const Discretization& disc, const FieldX& v, int k, const Barycentric& lambda);
Vec2 evaluate(const Discretization& disc, const FieldV& u, int k, const Barycentric& lambda);
/// Elementwise gradients. For FieldV the result is (d u_i / d x_j).
Vec2 gradient(const Discretization& disc, const FieldX& v, int k);
Mat2 gradient(const Discretization& disc, const FieldV& u, int k);
/// Crouzeix–Raviart basis function attached to local face i, at lambda.
inline double cr_basis(int i, const Barycentric& lambda) { return 1.0 - 2.0 * lambda[static_cast<std::size_t>(i)]; }

// Projections.
FieldQ project_Q(const Discretization& disc, const ScalarFunction& f);
FieldQVec project_Q(const Discretization& disc, const VectorFunction& f);
FieldV project_V(const Discretization& disc, const VectorFunction& f);
FieldX project_X(const Discretization& disc, const ScalarFunction& f);
/// L2 projection of a field onto the X_h of another (same) discretization,
/// used for idempotence checks.
FieldX project_X(const Discretization& disc, const FieldX& v);
FieldQ project_Q(const Discretization& disc, const FieldQ& v);
FieldW project_W(const Discretization& disc, const FieldX& v);

/// Cellwise average of a V_h field.
FieldQVec hat(const Discretization& disc, const FieldV& u);

// Exact integrals.
double integrate(const Discretization& disc, const FieldQ& v);
double integrate(const Discretization& disc, const FieldX& v);

// L2 errors against smooth functions, evaluated with the volume rule.
double l2_error(const Discretization& disc, const FieldQ& v, const ScalarFunction& f);
double l2_error(const Discretization& disc, const FieldQVec& v, const VectorFunction& f);
double l2_error(const Discretization& disc, const FieldV& v, const VectorFunction& f);
double l2_error(const Discretization& disc, const FieldX& v, const ScalarFunction& f);
double l2_norm(const Discretization& disc, const FieldX& v);

/// Seminorm |||v|||^2 = sum_K int |grad v|^2 + h^{-(1+beta)} sum_sigma int [[v]]^2.
/// Throws std::invalid_argument for beta <= 0.
double seminorm_B(const Discretization& disc, const FieldX& v, double beta);

/// Augmented broken norm: the seminorm plus h sum_sigma int |{{grad v}}|^2.
double broken_norm_H(const Discretization& disc, const FieldX& v, double beta);

/// Broken norm of (v_h - v) for a smooth v with gradient grad_v. The smooth
/// part contributes no jumps.
double broken_norm_H_error(const Discretization& disc, const FieldX& v_h,
                           const GradientFunction& grad_v, double beta);

/// int_sigma [[u]] for a V_h field, integrated from both traces.
Vec2 face_jump_integral(const Discretization& disc, const FieldV& u, int sigma);

}  // namespace nsac
