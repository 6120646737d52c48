#pragma once

#include <Eigen/Sparse>

#include <vector>

#include "nsac/spaces.hpp"

namespace nsac {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Inner and outer trace of a piecewise function at one face point, relative
/// to the face normal. The jump is out - in, the opposite sign of the usual
/// DG convention.
struct FaceTrace {
  double in = 0.0;
  double out = 0.0;
  double jump() const { return out - in; }
  double average() const { return 0.5 * (in + out); }
};

FaceTrace trace(const Discretization& disc, const FieldQ& r, int sigma);
/// Trace of an X_h field at face parameter t in [0,1].
FaceTrace trace(const Discretization& disc, const FieldX& v, int sigma, double t);

/// Face-mean velocity (1/|sigma|) int_sigma u, integrated from the in-side trace.
Vec2 face_velocity(const Discretization& disc, const FieldV& u, int sigma);

/// Upwind flux r^up v_n: the in value when v_n >= 0, else the out value.
inline double upwind(double r_in, double r_out, double v_n) { return v_n >= 0.0 ? r_in * v_n : r_out * v_n; }

/// The same flux written as {{r}} v_n - |v_n| [[r]] / 2.
double upwind_average_form(double r_in, double r_out, double v_n);

/// Up[r, v] - h^eps [[r]].
inline double diffusive_flux(double r_in, double r_out, double v_n, double h_pow_eps) {
  return upwind(r_in, r_out, v_n) - h_pow_eps * (r_out - r_in);
}

/// Field forms: flux density on face sigma with v_n = u_sigma . n.
double upwind(const Discretization& disc, const FieldQ& r, const FieldV& u, int sigma);
double diffusive_flux(const Discretization& disc, const FieldQ& r, const FieldV& u, int sigma,
                      double epsilon);

/// Elementwise derivatives.
std::vector<Vec2> grad_h(const Discretization& disc, const FieldX& v);
std::vector<Mat2> grad_h(const Discretization& disc, const FieldV& u);
FieldQ div_h(const Discretization& disc, const FieldV& u);

/// Interior-penalty form B(v, w) evaluated face by face, without the
/// assembled matrix. Used as the independent route for cross-checks.
double bilinear_form_direct(const Discretization& disc, const FieldX& v, const FieldX& w,
                            double beta);

/// Assembled interior-penalty form and the discrete Laplacian.
///
/// B is assembled once on X_h (nodal P1 basis per element). The Laplacian
/// solves -int Delta_h v w = B(v, w) for all w; because B annihilates
/// constants the block-diagonal mass solve already yields a zero-mean
/// result, so Delta_h = -M^{-1} B.
class DgOperators {
 public:
  /// Throws std::invalid_argument for beta <= 0.
  DgOperators(const Discretization& disc, double beta);

  double beta() const { return beta_; }
  double penalty() const { return penalty_; }  ///< h^{-(1+beta)}

  const SparseMatrix& bilinear_matrix() const { return b_; }
  const SparseMatrix& laplacian_matrix() const { return laplacian_; }
  const SparseMatrix& mass_matrix() const { return mass_; }

  double bilinear(const FieldX& v, const FieldX& w) const;
  FieldW laplacian(const FieldX& c) const;

 private:
  double beta_;
  double penalty_;
  SparseMatrix b_;
  SparseMatrix mass_;
  SparseMatrix laplacian_;
};

}  // namespace nsac
