#include "adpt/plants.hpp"

namespace adpt {

CanonicalPlant scalar_linear_plant(double a, double b) {
  return CanonicalPlant(
      1, 1, [a](const Vector& X) { return Vector::Constant(1, a * X(0)); },
      [b](const Vector&) { return Matrix::Constant(1, 1, b); });
}

CanonicalPlant double_integrator_plant() {
  return CanonicalPlant(
      2, 1, [](const Vector&) { return Vector::Zero(1); },
      [](const Vector&) { return Matrix::Identity(1, 1); });
}

}  // namespace adpt
