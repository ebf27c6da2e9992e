#pragma once

#include <functional>

#include <Eigen/Dense>

namespace adpt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Right-hand side terms of x^(p) = f(X) + g(X) u evaluated at one state.
struct AffineTerms {
  Vector drift;       // f(X), length m
  Matrix input_gain;  // g(X), m x m
};

/// Ratio of extreme singular values; infinity for a singular matrix.
double condition_number(const Matrix& a);

/// Order-p, m-input plant in canonical (companion) form.
///
/// The full state stacks the output and its first p-1 derivatives in blocks
/// of m: X = [x; x'; ...; x^(p-1)], so n = m * p. Every evaluation rejects
/// states where the condition number of g exceeds max_condition.
class CanonicalPlant {
 public:
  using Terms = std::function<AffineTerms(const Vector&)>;
  using Drift = std::function<Vector(const Vector&)>;
  using InputGain = std::function<Matrix(const Vector&)>;

  static constexpr double kDefaultMaxCondition = 1e8;

  CanonicalPlant(int order, int inputs, Terms terms,
                 double max_condition = kDefaultMaxCondition);
  CanonicalPlant(int order, int inputs, Drift f, InputGain g,
                 double max_condition = kDefaultMaxCondition);

  int order() const { return order_; }
  int inputs() const { return inputs_; }
  int state_dim() const { return order_ * inputs_; }
  double max_condition() const { return max_condition_; }

  /// f and g at X. Throws DimensionError or SingularityError.
  AffineTerms terms(const Vector& X) const;
  Vector drift(const Vector& X) const { return terms(X).drift; }
  Matrix input_gain(const Vector& X) const { return terms(X).input_gain; }

  /// Companion-form F(X) (length n) and G(X) (n x m).
  Vector lifted_drift(const Vector& X) const;
  Matrix lifted_input_gain(const Vector& X) const;

  /// True when X is evaluable and g(X) passes the conditioning policy.
  bool is_regular(const Vector& X) const;

  void check_state(const Vector& X) const;
  void check_control(const Vector& u) const;

 private:
  int order_;
  int inputs_;
  Terms terms_;
  double max_condition_;
};

/// Desired trajectory stacked like the plant state, plus its p-th derivative.
struct ReferenceSample {
  Vector state;    // X_d, length n
  Vector highest;  // x_d^(p), length m
};

/// Reference trajectory evaluable at any t >= 0. Derivatives are analytic.
class ReferenceSignal {
 public:
  using Function = std::function<ReferenceSample(double)>;

  ReferenceSignal(int order, int outputs, Function fn, bool constant = false);

  ReferenceSample operator()(double t) const;

  int order() const { return order_; }
  int outputs() const { return outputs_; }
  int state_dim() const { return order_ * outputs_; }
  /// Set for references whose sample never changes with t.
  bool is_constant() const { return constant_; }

 private:
  int order_;
  int outputs_;
  Function fn_;
  bool constant_;
};

/// Quadratic penalties on tracking error (Q) and control (R), plus the
/// discount rate used only by the discounted baselines.
struct CostWeights {
  Matrix Q;
  Matrix R;
  double rho = 0.0;

  /// Validates symmetry, Q >= 0, R > 0 and rho >= 0.
  static CostWeights make(Matrix Q, Matrix R, double rho = 0.0);

  double running_cost(const Vector& error, const Vector& control) const;
};

/// Xdot = F(X) + G(X) u.
Vector companion_lift(const CanonicalPlant& plant, const Vector& X,
                      const Vector& u);

/// Edot = F(E + X_d) - F(X_d) + G(E + X_d) du with the reference state held.
Vector error_derivative(const CanonicalPlant& plant, const Vector& E,
                        const Vector& X_d, const Vector& delta_u);

Vector error_derivative(const CanonicalPlant& plant, const Vector& E,
                        const ReferenceSignal& ref, double t,
                        const Vector& delta_u);

/// u_s = g(X)^-1 (x_d^(p) - f(X_d)). Holds the plant on the reference when
/// X = X_d.
Vector steady_state_control(const CanonicalPlant& plant, const Vector& X,
                            const ReferenceSignal& ref, double t);

/// u_r = g(X_d)^-1 (x_d^(p) - f(X_d)).
Vector reference_steady_control(const CanonicalPlant& plant,
                                const ReferenceSignal& ref, double t);

}  // namespace adpt
