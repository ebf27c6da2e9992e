#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "adpt/errors.hpp"
#include "adpt/value_function.hpp"

using namespace adpt;

namespace {

Vector random_vector(std::mt19937_64& gen, int n, double scale) {
  std::uniform_real_distribution<double> d(-scale, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = d(gen);
  return v;
}

// Delta weights as listed with the experimental parameters.
Vector appendix_weights() {
  Vector w(21);
  w << 0.0025, -0.1939, 0.0330, -0.2257, 0.0026, -0.0009, 0.0008, 0.0317,
      -0.0026, 0.0002, -0.0055, 0.0507, -0.0001, -0.0002, -0.0002, 1.8550,
      1.8911, 1.9928, 0.0012, 0.0012, 0.0016;
  return w;
}

}  // namespace

TEST(QuadraticBasis, OrderingTwoStates) {
  QuadraticBasis b(2);
  ASSERT_EQ(b.size(), 3);
  EXPECT_EQ(b.label(0), "x1*x2");
  EXPECT_EQ(b.label(1), "x1^2");
  EXPECT_EQ(b.label(2), "x2^2");
}

TEST(QuadraticBasis, OrderingSixStatesMatchesDeltaListing) {
  const std::vector<std::string> expected = {
      "x1*x2", "x1*x3", "x1*x4", "x2*x3", "x1*x5", "x2*x4", "x1*x6",
      "x2*x5", "x3*x4", "x2*x6", "x3*x5", "x3*x6", "x4*x5", "x4*x6",
      "x5*x6", "x1^2",  "x2^2",  "x3^2",  "x4^2",  "x5^2",  "x6^2"};
  QuadraticBasis b(6);
  ASSERT_EQ(b.size(), 21);
  for (int k = 0; k < 21; ++k) EXPECT_EQ(b.label(k), expected[static_cast<std::size_t>(k)]);
}

TEST(QuadraticBasis, EvalMatchesProducts) {
  QuadraticBasis b(3);
  Vector E(3);
  E << 2.0, -3.0, 5.0;
  const Vector phi = b.eval(E);
  // x1x2, x1x3, x2x3, squares
  Vector expected(6);
  expected << -6.0, 10.0, -15.0, 4.0, 9.0, 25.0;
  EXPECT_EQ(phi, expected);
}

TEST(QuadraticBasis, ScaledFeatures) {
  Vector s(2);
  s << 2.0, 0.5;
  QuadraticBasis b(2, s);
  Vector E(2);
  E << 1.0, 4.0;
  const Vector phi = b.eval(E);
  EXPECT_DOUBLE_EQ(phi(0), 4.0);
  EXPECT_DOUBLE_EQ(phi(1), 4.0);
  EXPECT_DOUBLE_EQ(phi(2), 4.0);
}

TEST(QuadraticBasis, RejectsBadInput) {
  EXPECT_THROW(QuadraticBasis(0), DimensionError);
  QuadraticBasis b(3);
  EXPECT_THROW(b.eval(Vector::Zero(2)), DimensionError);
  EXPECT_THROW(QuadraticBasis(2, Vector::Ones(3)), DimensionError);
}

TEST(ValueFunction, GradientMatchesCentralDifferences) {
  std::mt19937_64 gen(7);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 6;
    QuadraticBasis basis(n);
    ValueFunction vf(basis, random_vector(gen, basis.size(), 3.0));
    const Vector E = random_vector(gen, n, 1.0);
    const Vector g = vf.gradient(E);
    for (int i = 0; i < n; ++i) {
      Vector ep = E, em = E;
      ep(i) += h;
      em(i) -= h;
      const double fd = (vf.value(ep) - vf.value(em)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g(i)));
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(ValueFunction, BasisGradientIsJacobianOfFeatures) {
  QuadraticBasis b(4);
  Vector E(4);
  E << 0.3, -1.2, 0.7, 2.0;
  const Matrix G = b.gradient(E);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    Vector ep = E, em = E;
    ep(i) += h;
    em(i) -= h;
    const Vector fd = (b.eval(ep) - b.eval(em)) / (2 * h);
    EXPECT_LT((fd - G.col(i)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(ValueFunction, DeltaListingValueAtUnitPositionError) {
  ValueFunction vf(QuadraticBasis(6), appendix_weights());
  Vector E = Vector::Zero(6);
  E(0) = 0.01;
  EXPECT_NEAR(vf.value(E), 1.8550e-4, 1e-15);
}

TEST(ValueFunction, QuadraticHomogeneity) {
  std::mt19937_64 gen(3);
  ValueFunction vf(QuadraticBasis(6), appendix_weights());
  for (int k = 0; k < 50; ++k) {
    const Vector E = random_vector(gen, 6, 0.1);
    const double c = 0.5 + k * 0.1;
    EXPECT_NEAR(vf.value(c * E), c * c * vf.value(E), 1e-14);
  }
  EXPECT_EQ(vf.value(Vector::Zero(6)), 0.0);
}

TEST(ValueFunction, QuadraticFormRoundTrip) {
  Matrix P(2, 2);
  P << std::sqrt(3.0), 1.0, 1.0, std::sqrt(3.0);
  QuadraticBasis b(2);
  const ValueFunction vf = ValueFunction::from_quadratic_form(b, P);
  EXPECT_NEAR(vf.weights()(0), 2.0, 1e-15);
  EXPECT_NEAR(vf.weights()(1), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(vf.weights()(2), std::sqrt(3.0), 1e-15);
  EXPECT_LT((vf.quadratic_form() - P).norm(), 1e-15);
  Vector E(2);
  E << 0.4, -0.9;
  EXPECT_NEAR(vf.value(E), E.dot(P * E), 1e-14);
}

TEST(ValueFunction, ScaledQuadraticForm) {
  Vector s(2);
  s << 10.0, 0.1;
  QuadraticBasis b(2, s);
  Matrix P(2, 2);
  P << 2.0, 0.5, 0.5, 3.0;
  const ValueFunction vf = ValueFunction::from_quadratic_form(b, P);
  Vector E(2);
  E << 0.2, -1.5;
  EXPECT_NEAR(vf.value(E), E.dot(P * E), 1e-12);
  EXPECT_LT((vf.quadratic_form() - P).norm(), 1e-12);
}

TEST(ValueFunction, MinValueOnSamples) {
  Matrix P = Matrix::Identity(2, 2);
  const auto vf = ValueFunction::from_quadratic_form(QuadraticBasis(2), P);
  std::vector<Vector> samples = {Vector::Zero(2), Vector::Ones(2), 0.1 * Vector::Ones(2)};
  EXPECT_NEAR(min_value_on_samples(vf, samples), 0.02, 1e-15);
}

TEST(WeightFile, RoundTripIsExact) {
  std::mt19937_64 gen(11);
  Vector s(6);
  s << 1, 1, 1, 0.1, 0.1, 0.1;
  ValueFunction vf(QuadraticBasis(6, s), random_vector(gen, 21, 1.0));
  std::stringstream ss;
  write_weights(ss, vf, {{"seed", "4"}});
  const ValueFunction back = read_weights(ss);
  EXPECT_TRUE(back.basis() == vf.basis());
  EXPECT_EQ(back.weights(), vf.weights());
}

TEST(WeightFile, RejectsMalformedInput) {
  std::istringstream bad_header("# something else\n");
  EXPECT_THROW(read_weights(bad_header), ConfigError);
  std::istringstream wrong_label(
      "# adpt-weights v1\ndim 2\nordering quadratic-v1\nscale 1 1\ncount 3\n"
      "x1^2 1\nx1*x2 0\nx2^2 1\n");
  EXPECT_THROW(read_weights(wrong_label), ConfigError);
  std::istringstream wrong_ordering(
      "# adpt-weights v1\ndim 2\nordering other\nscale 1 1\ncount 3\n");
  EXPECT_THROW(read_weights(wrong_ordering), ConfigError);
  EXPECT_THROW(load_weights("/nonexistent/weights.txt"), ConfigError);
}
