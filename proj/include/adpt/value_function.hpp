#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "adpt/plant.hpp"

namespace adpt {

/// Pure quadratic monomials x_i x_j over an n-dimensional error.
///
/// Ordering (version "quadratic-v1"): all cross products i < j sorted by
/// i + j and then by i, followed by the squares x_1^2 ... x_n^2. For n = 6
/// this is x1x2, x1x3, x1x4, x2x3, x1x5, x2x4, x1x6, x2x5, x3x4, x2x6, x3x5,
/// x3x6, x4x5, x4x6, x5x6, x1^2, ..., x6^2. Indices here are zero-based.
///
/// An optional diagonal scaling s is applied before the monomials, so the
/// features are (s_i E_i)(s_j E_j).
class QuadraticBasis {
 public:
  static constexpr const char* kOrdering = "quadratic-v1";

  explicit QuadraticBasis(int dim, Vector scale = {});

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(terms_.size()); }
  const std::vector<std::pair<int, int>>& terms() const { return terms_; }
  const Vector& scale() const { return scale_; }
  bool unit_scale() const;

  /// Term label such as "x1*x4" or "x3^2", one-based.
  std::string label(int term) const;

  Vector eval(const Vector& E) const;
  /// size() x dim() matrix of d phi_k / dE.
  Matrix gradient(const Vector& E) const;

  bool operator==(const QuadraticBasis& other) const;

 private:
  void check(const Vector& E) const;

  int dim_;
  Vector scale_;
  std::vector<std::pair<int, int>> terms_;
};

/// V(E) = W^T phi(E) over a quadratic basis.
class ValueFunction {
 public:
  ValueFunction(QuadraticBasis basis, Vector weights);
  static ValueFunction zero(const QuadraticBasis& basis);

  const QuadraticBasis& basis() const { return basis_; }
  const Vector& weights() const { return weights_; }

  double value(const Vector& E) const;
  Vector gradient(const Vector& E) const;

  /// Symmetric P with V(E) = E^T P E.
  Matrix quadratic_form() const;
  /// Inverse of quadratic_form() for a given basis.
  static ValueFunction from_quadratic_form(const QuadraticBasis& basis,
                                           const Matrix& P);

 private:
  QuadraticBasis basis_;
  Vector weights_;
};

/// Smallest sampled value over E != 0; positive when V is positive on the
/// samples. Diagnostic only.
double min_value_on_samples(const ValueFunction& vf,
                            const std::vector<Vector>& samples);

// Plain-text weight file:
//   # adpt-weights v1
//   # <key> <value>          (optional metadata comments)
//   dim <n>
//   ordering quadratic-v1
//   scale <s_1> ... <s_n>
//   count <k>
//   <label> <weight>         (k lines, in basis order)
void write_weights(std::ostream& os, const ValueFunction& vf,
                   const std::map<std::string, std::string>& metadata = {});
ValueFunction read_weights(std::istream& is);

void save_weights(const std::string& path, const ValueFunction& vf,
                  const std::map<std::string, std::string>& metadata = {});
ValueFunction load_weights(const std::string& path);

}  // namespace adpt
