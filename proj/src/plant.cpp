#include "adpt/plant.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "adpt/errors.hpp"

namespace adpt {

double condition_number(const Matrix& a) {
  if (a.size() == 0) return std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

CanonicalPlant::CanonicalPlant(int order, int inputs, Terms terms,
                               double max_condition)
    : order_(order),
      inputs_(inputs),
      terms_(std::move(terms)),
      max_condition_(max_condition) {
  if (order_ < 1 || inputs_ < 1) {
    throw DimensionError("plant order and input count must be positive");
  }
  if (!(max_condition_ > 1.0)) {
    throw std::invalid_argument("max_condition must exceed 1");
  }
}

CanonicalPlant::CanonicalPlant(int order, int inputs, Drift f, InputGain g,
                               double max_condition)
    : CanonicalPlant(
          order, inputs,
          [f = std::move(f), g = std::move(g)](const Vector& X) {
            return AffineTerms{f(X), g(X)};
          },
          max_condition) {}

void CanonicalPlant::check_state(const Vector& X) const {
  if (X.size() != state_dim()) {
    throw DimensionError("state has length " + std::to_string(X.size()) +
                         ", plant expects " + std::to_string(state_dim()));
  }
}

void CanonicalPlant::check_control(const Vector& u) const {
  if (u.size() != inputs_) {
    throw DimensionError("control has length " + std::to_string(u.size()) +
                         ", plant expects " + std::to_string(inputs_));
  }
}

AffineTerms CanonicalPlant::terms(const Vector& X) const {
  check_state(X);
  AffineTerms t = terms_(X);
  if (t.drift.size() != inputs_ || t.input_gain.rows() != inputs_ ||
      t.input_gain.cols() != inputs_) {
    throw DimensionError("plant terms have the wrong shape");
  }
  const double cond = condition_number(t.input_gain);
  if (!(cond <= max_condition_)) {
    throw SingularityError("input gain condition number " +
                           std::to_string(cond) + " exceeds bound " +
                           std::to_string(max_condition_));
  }
  return t;
}

Vector CanonicalPlant::lifted_drift(const Vector& X) const {
  const int n = state_dim();
  const int m = inputs_;
  Vector F(n);
  F.head(n - m) = X.tail(n - m);
  F.tail(m) = terms(X).drift;
  return F;
}

Matrix CanonicalPlant::lifted_input_gain(const Vector& X) const {
  const int n = state_dim();
  const int m = inputs_;
  Matrix G = Matrix::Zero(n, m);
  G.bottomRows(m) = terms(X).input_gain;
  return G;
}

bool CanonicalPlant::is_regular(const Vector& X) const {
  try {
    terms(X);
    return true;
  } catch (const std::runtime_error&) {
    return false;
  }
}

ReferenceSignal::ReferenceSignal(int order, int outputs, Function fn,
                                 bool constant)
    : order_(order), outputs_(outputs), fn_(std::move(fn)), constant_(constant) {
  if (order_ < 1 || outputs_ < 1) {
    throw DimensionError("reference order and output count must be positive");
  }
}

ReferenceSample ReferenceSignal::operator()(double t) const {
  ReferenceSample s = fn_(t);
  if (s.state.size() != state_dim() || s.highest.size() != outputs_) {
    throw DimensionError("reference sample has the wrong shape");
  }
  return s;
}

CostWeights CostWeights::make(Matrix Q, Matrix R, double rho) {
  if (Q.rows() != Q.cols() || R.rows() != R.cols() || Q.size() == 0 ||
      R.size() == 0) {
    throw DimensionError("Q and R must be square and nonempty");
  }
  if (!Q.isApprox(Q.transpose(), 1e-12) || !R.isApprox(R.transpose(), 1e-12)) {
    throw std::invalid_argument("Q and R must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> qs(Q, Eigen::EigenvaluesOnly);
  if (qs.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, Q.norm())) {
    throw std::invalid_argument("Q must be positive semidefinite");
  }
  Eigen::LLT<Matrix> rl(R);
  if (rl.info() != Eigen::Success) {
    throw std::invalid_argument("R must be positive definite");
  }
  if (!(rho >= 0.0)) throw std::invalid_argument("rho must be nonnegative");
  return CostWeights{std::move(Q), std::move(R), rho};
}

double CostWeights::running_cost(const Vector& error,
                                 const Vector& control) const {
  return error.dot(Q * error) + control.dot(R * control);
}

Vector companion_lift(const CanonicalPlant& plant, const Vector& X,
                      const Vector& u) {
  plant.check_control(u);
  const AffineTerms t = plant.terms(X);
  const int n = plant.state_dim();
  const int m = plant.inputs();
  Vector Xdot(n);
  Xdot.head(n - m) = X.tail(n - m);
  Xdot.tail(m) = t.drift + t.input_gain * u;
  return Xdot;
}

Vector error_derivative(const CanonicalPlant& plant, const Vector& E,
                        const Vector& X_d, const Vector& delta_u) {
  plant.check_state(E);
  plant.check_state(X_d);
  plant.check_control(delta_u);
  const int n = plant.state_dim();
  const int m = plant.inputs();
  const AffineTerms actual = plant.terms(E + X_d);
  const AffineTerms desired = plant.terms(X_d);
  Vector Edot(n);
  Edot.head(n - m) = E.tail(n - m);
  Edot.tail(m) = actual.drift - desired.drift + actual.input_gain * delta_u;
  return Edot;
}

Vector error_derivative(const CanonicalPlant& plant, const Vector& E,
                        const ReferenceSignal& ref, double t,
                        const Vector& delta_u) {
  return error_derivative(plant, E, ref(t).state, delta_u);
}

namespace {

Vector solve_gain(const Matrix& g, const Vector& rhs) {
  return g.partialPivLu().solve(rhs);
}

}  // namespace

Vector steady_state_control(const CanonicalPlant& plant, const Vector& X,
                            const ReferenceSignal& ref, double t) {
  const ReferenceSample r = ref(t);
  const AffineTerms at_state = plant.terms(X);
  const AffineTerms at_ref = plant.terms(r.state);
  return solve_gain(at_state.input_gain, r.highest - at_ref.drift);
}

Vector reference_steady_control(const CanonicalPlant& plant,
                                const ReferenceSignal& ref, double t) {
  const ReferenceSample r = ref(t);
  const AffineTerms at_ref = plant.terms(r.state);
  return solve_gain(at_ref.input_gain, r.highest - at_ref.drift);
}

}  // namespace adpt
