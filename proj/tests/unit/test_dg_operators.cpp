#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fields.hpp"
#include "nsac/dg_operators.hpp"
#include "nsac/quadrature.hpp"

using namespace nsac;

namespace {

constexpr double pi = std::numbers::pi;

Discretization torus(int n) { return Discretization(Mesh::uniform_torus(n, 2)); }

// sum_sigma int [[v]] n . {{grad v}} written out face by face.
double cross_term(const Discretization& d, const FieldX& v) {
  double s = 0.0;
  for (int f = 0; f < d.num_faces(); ++f) {
    const FaceGeometry& g = d.face(f);
    const double avg = 0.5 * (gradient(d, v, g.in) + gradient(d, v, g.out)).dot(g.normal);
    for (int q = 0; q < 2; ++q) {
      s += g.length * face_rule().weights[q] * trace(d, v, f, face_rule().points[q]).jump() * avg;
    }
  }
  return s;
}

}  // namespace

TEST(Flux, UpwindPicksTheDonorCell) {
  EXPECT_DOUBLE_EQ(upwind(1.0, 3.0, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(upwind(1.0, 3.0, -1.0), -3.0);
  EXPECT_DOUBLE_EQ(upwind(1.0, 3.0, 0.0), 0.0);
  for (double vn : {2.0, -1.0, 0.0, 0.37}) {
    EXPECT_NEAR(upwind_average_form(1.0, 3.0, vn), upwind(1.0, 3.0, vn), 1e-15);
  }
}

TEST(Flux, DiffusiveFlux) {
  EXPECT_NEAR(diffusive_flux(1.0, 3.0, 2.0, 0.1), 1.8, 1e-15);
  EXPECT_DOUBLE_EQ(diffusive_flux(2.0, 2.0, -0.7, 0.1), upwind(2.0, 2.0, -0.7));
}

TEST(Flux, TelescopesToZero) {
  const Discretization d = torus(4);
  std::mt19937_64 rng(2);
  const FieldQ r = testing_fields::random_rho(rng, d);
  const FieldV u = testing_fields::random_V(rng, d);
  // Each face contributes +F to one side and -F to the other.
  Eigen::VectorXd div = Eigen::VectorXd::Zero(d.num_elements());
  for (int f = 0; f < d.num_faces(); ++f) {
    const double F = d.face(f).length * diffusive_flux(d, r, u, f, 1.0);
    div[d.face(f).in] += F;
    div[d.face(f).out] -= F;
  }
  EXPECT_NEAR(div.sum(), 0.0, 1e-13);
}

TEST(Traces, FaceVelocityIsTheDof) {
  const Discretization d = torus(4);
  std::mt19937_64 rng(9);
  const FieldV u = testing_fields::random_V(rng, d);
  for (int f = 0; f < d.num_faces(); ++f) EXPECT_NEAR((face_velocity(d, u, f) - u.dof(f)).norm(), 0.0, 1e-14);
  const FieldV c = project_V(d, [](const Vec2&) { return Vec2(1.0, 2.0); });
  for (int f = 0; f < d.num_faces(); ++f) EXPECT_NEAR((face_velocity(d, c, f) - Vec2(1.0, 2.0)).norm(), 0.0, 1e-14);
}

TEST(Derivatives, AffineAndRigidFields) {
  const Discretization d = torus(4);
  const auto g = grad_h(d, project_X(d, [](const Vec2& x) { return 2.0 * x[0] - x[1]; }));
  for (const Vec2& v : g) EXPECT_NEAR((v - Vec2(2.0, -1.0)).norm(), 0.0, 1e-12);

  const FieldV rot = project_V(d, [](const Vec2& x) { return Vec2(-x[1], x[0]); });
  const FieldV id = project_V(d, [](const Vec2& x) { return Vec2(x[0], x[1]); });
  const FieldQ div_rot = div_h(d, rot);
  const FieldQ div_id = div_h(d, id);
  const auto grad_id = grad_h(d, id);
  for (int k = 0; k < d.num_elements(); ++k) {
    if (!testing_fields::away_from_seam(d, k)) continue;
    EXPECT_NEAR(div_rot.values[k], 0.0, 1e-13);
    EXPECT_NEAR(div_id.values[k], 2.0, 1e-13);
    EXPECT_NEAR((grad_id[static_cast<std::size_t>(k)] - Mat2::Identity()).norm(), 0.0, 1e-13);
  }
}

TEST(Bilinear, ConstantsAreInTheKernel) {
  const Discretization d = torus(4);
  const DgOperators ops(d, 1.0);
  std::mt19937_64 rng(4);
  const FieldX one{Eigen::VectorXd::Constant(3 * d.num_elements(), 1.7)};
  const FieldX w = testing_fields::random_X(rng, d);
  EXPECT_NEAR(ops.bilinear(one, w), 0.0, 1e-12);
  EXPECT_NEAR(bilinear_form_direct(d, one, w, 1.0), 0.0, 1e-12);
  EXPECT_NEAR((ops.bilinear_matrix() * one.values).lpNorm<Eigen::Infinity>(), 0.0, 1e-12);
}

TEST(Bilinear, MatrixMatchesFaceLoopAndIsSymmetric) {
  std::mt19937_64 rng(8);
  for (int n : {2, 4}) {
    const Discretization d = torus(n);
    for (double beta : {0.5, 1.0, 4.0}) {
      const DgOperators ops(d, beta);
      const SparseMatrix& b = ops.bilinear_matrix();
      EXPECT_NEAR(Eigen::MatrixXd(b - SparseMatrix(b.transpose())).cwiseAbs().maxCoeff(), 0.0, 1e-12 * ops.penalty());
      for (int i = 0; i < 5; ++i) {
        const FieldX v = testing_fields::random_X(rng, d);
        const FieldX w = testing_fields::random_X(rng, d);
        const double direct = bilinear_form_direct(d, v, w, beta);
        EXPECT_NEAR(ops.bilinear(v, w), direct, 1e-12 * std::abs(direct) + 1e-12);
      }
    }
  }
}

TEST(Bilinear, DiagonalIsSeminormPlusCrossTerm) {
  const Discretization d = torus(4);
  std::mt19937_64 rng(12);
  for (double beta : {1.0, 4.0}) {
    const DgOperators ops(d, beta);
    const FieldX v = testing_fields::random_X(rng, d);
    const double s = seminorm_B(d, v, beta);
    const double expected = s * s + 2.0 * cross_term(d, v);
    EXPECT_NEAR(ops.bilinear(v, v), expected, 1e-12 * std::abs(expected));
  }
}

TEST(Bilinear, ContinuousFieldsGiveTheStiffness) {
  const Discretization d = torus(4);
  const DgOperators ops(d, 1.0);
  const FieldX v = testing_fields::continuous_P1(d, [](double x, double y) { return std::sin(pi * x) * std::cos(pi * y); });
  const FieldX w = testing_fields::continuous_P1(d, [](double x, double y) { return std::cos(pi * (x + y)); });
  double stiff = 0.0;
  for (int k = 0; k < d.num_elements(); ++k) stiff += d.element(k).area * gradient(d, v, k).dot(gradient(d, w, k));
  EXPECT_NEAR(ops.bilinear(v, w), stiff, 1e-12);
}

TEST(Bilinear, TimeDifferenceIdentity) {
  // B(v, v - w) = 1/2 B(v, v) - 1/2 B(w, w) + 1/2 B(v - w, v - w).
  const Discretization d = torus(4);
  const DgOperators ops(d, 1.0);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10; ++i) {
    const FieldX v = testing_fields::random_X(rng, d);
    const FieldX w = testing_fields::random_X(rng, d);
    const FieldX diff{v.values - w.values};
    const double lhs = ops.bilinear(v, diff);
    const double rhs = 0.5 * ops.bilinear(v, v) - 0.5 * ops.bilinear(w, w) + 0.5 * ops.bilinear(diff, diff);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, ops.bilinear(v, v)));
  }
}

TEST(Bilinear, RejectsNonPositiveBeta) {
  const Discretization d = torus(2);
  EXPECT_THROW(DgOperators(d, 0.0), std::invalid_argument);
  EXPECT_THROW(bilinear_form_direct(d, zero_X(d), zero_X(d), -1.0), std::invalid_argument);
}

TEST(Laplacian, DefiningRelation) {
  const Discretization d = torus(3);
  const DgOperators ops(d, 1.0);
  std::mt19937_64 rng(21);
  const FieldX v = testing_fields::random_X(rng, d);
  const FieldW lap = ops.laplacian(v);
  const Eigen::VectorXd m_lap = ops.mass_matrix() * lap.values();
  for (int i = 0; i < 3 * d.num_elements(); ++i) {
    FieldX e = zero_X(d);
    e.values[i] = 1.0;
    EXPECT_NEAR(-m_lap[i], bilinear_form_direct(d, v, e, 1.0), 1e-11 * ops.penalty());
  }
  EXPECT_NEAR(integrate(d, lap.field()), 0.0, 1e-10);
}

TEST(Laplacian, ConstantAndProjectedSine) {
  const Discretization d = torus(4);
  const DgOperators ops(d, 1.0);
  const FieldX one{Eigen::VectorXd::Constant(3 * d.num_elements(), -0.4)};
  EXPECT_NEAR(ops.laplacian(one).values().lpNorm<Eigen::Infinity>(), 0.0, 1e-12);
  const FieldX c = project_X(d, [](const Vec2& x) { return std::sin(pi * x[0]); });
  const double lhs = -(ops.mass_matrix() * ops.laplacian(c).values()).dot(c.values);
  EXPECT_NEAR(lhs, ops.bilinear(c, c), 1e-12 * ops.bilinear(c, c));
}

TEST(Laplacian, WeakLimitOnContinuousInterpolants) {
  // int (Delta_h I_h c - Delta c) phi -> 0 for a jump-free sequence.
  auto c = [](double x, double y) { return std::sin(pi * x) * std::cos(pi * y); };
  auto phi = [&](const Vec2& x) { return std::cos(pi * x[0]) * std::cos(pi * x[1]) + c(x[0], x[1]); };
  std::vector<double> err;
  for (int n : {4, 8, 16}) {
    const Discretization d = torus(n);
    const DgOperators ops(d, 1.0);
    const FieldW lap = ops.laplacian(testing_fields::continuous_P1(d, c));
    double e = 0.0;
    const TriangleRule& r = volume_rule();
    for (int k = 0; k < d.num_elements(); ++k) {
      for (std::size_t q = 0; q < r.size(); ++q) {
        const Vec2 x = d.point(k, r.points[q]);
        e += d.element(k).area * r.weights[q] * (evaluate(d, lap.field(), k, r.points[q]) + 2.0 * pi * pi * c(x[0], x[1])) * phi(x);
      }
    }
    err.push_back(std::abs(e));
  }
  EXPECT_LT(err[1], err[0]);
  EXPECT_LT(err[2], err[1]);
}
