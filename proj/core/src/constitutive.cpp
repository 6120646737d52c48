#include "nsac/constitutive.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nsac {

namespace {

void require_nonnegative(double rho) {
  if (!(rho >= 0.0)) throw std::invalid_argument("negative density " + std::to_string(rho));
}

}  // namespace

PressureLaw::PressureLaw(double a, double gamma) : a_(a), gamma_(gamma) {
  if (!(a > 0.0)) throw std::invalid_argument("pressure coefficient a must be > 0");
  if (!(gamma > 1.0)) throw std::invalid_argument("adiabatic exponent gamma must be > 1");
}

double PressureLaw::pressure(double rho) const {
  require_nonnegative(rho);
  return a_ * std::pow(rho, gamma_);
}

double PressureLaw::pressure_derivative(double rho) const {
  require_nonnegative(rho);
  return a_ * gamma_ * std::pow(rho, gamma_ - 1.0);
}

double PressureLaw::potential(double rho) const {
  require_nonnegative(rho);
  return a_ * std::pow(rho, gamma_) / (gamma_ - 1.0);
}

double PressureLaw::potential_derivative(double rho) const {
  require_nonnegative(rho);
  return a_ * gamma_ / (gamma_ - 1.0) * std::pow(rho, gamma_ - 1.0);
}

double PressureLaw::potential_second_derivative(double rho) const {
  require_nonnegative(rho);
  return a_ * gamma_ * std::pow(rho, gamma_ - 2.0);
}

double PressureLaw::bregman(double x, double y) const {
  return potential(x) - potential(y) - potential_derivative(y) * (x - y);
}

double ginzburg_landau(double c) {
  if (c < -1.0) return (c + 1.0) * (c + 1.0);
  if (c > 1.0) return (c - 1.0) * (c - 1.0);
  const double w = c * c - 1.0;
  return 0.25 * w * w;
}

double ginzburg_landau_derivative(double c) {
  if (c < -1.0) return 2.0 * (c + 1.0);
  if (c > 1.0) return 2.0 * (c - 1.0);
  return c * c * c - c;
}

double f_split(double c_k, double c_km1) {
  if (c_k < -1.0) return 2.0 * (c_k + 1.0);
  if (c_k > 1.0) return 2.0 * (c_k - 1.0);
  return c_k * c_k * c_k - c_km1;
}

double f_split_derivative(double c_k) {
  if (c_k < -1.0 || c_k > 1.0) return 2.0;
  return 3.0 * c_k * c_k;
}

}  // namespace nsac
