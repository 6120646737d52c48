#pragma once

namespace nsac {

/// Barotropic gamma law p = a rho^gamma with potential P = a rho^gamma / (gamma - 1),
/// so that P'(rho) rho - P(rho) = p(rho) and P(0) = 0.
class PressureLaw {
 public:
  /// Throws std::invalid_argument unless a > 0 and gamma > 1.
  PressureLaw(double a, double gamma);

  double a() const { return a_; }
  double gamma() const { return gamma_; }

  // All of these throw std::invalid_argument for rho < 0.
  double pressure(double rho) const;
  double pressure_derivative(double rho) const;
  double potential(double rho) const;
  double potential_derivative(double rho) const;
  double potential_second_derivative(double rho) const;

  /// Bregman gap P(x) - P(y) - P'(y)(x - y), non-negative by convexity.
  double bregman(double x, double y) const;

 private:
  double a_;
  double gamma_;
};

/// Double-well potential, quadratic outside [-1, 1].
double ginzburg_landau(double c);
double ginzburg_landau_derivative(double c);

/// Convex-concave split of F' at one quadrature node: the branch is chosen
/// by the new value c_k, the concave part uses the old value c_km1.
double f_split(double c_k, double c_km1);
/// d f_split / d c_k on the active branch.
double f_split_derivative(double c_k);

}  // namespace nsac
