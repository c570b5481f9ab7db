#include "framekit/measure.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

namespace {

using namespace framekit;
constexpr double kPi = std::numbers::pi;

TEST(ParameterSpace, RejectsDegenerateSpaces) {
  EXPECT_THROW(ParameterSpace::interval(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ParameterSpace::interval(2.0, 1.0), std::invalid_argument);
  EXPECT_THROW(ParameterSpace::circle(0.0), std::invalid_argument);
  EXPECT_THROW(ParameterSpace::finite({}), std::invalid_argument);
  EXPECT_DOUBLE_EQ(ParameterSpace::interval(-1.0, 2.0).length(), 3.0);
  EXPECT_DOUBLE_EQ(ParameterSpace::circle(2.0 * kPi).length(), 2.0 * kPi);
}

TEST(AtomicMeasure, Invariants) {
  EXPECT_THROW(AtomicMeasure({0.0, 1.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(AtomicMeasure({0.0, 1.0}, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(AtomicMeasure({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
  const auto c = AtomicMeasure::counting(4);
  EXPECT_EQ(c.size(), 4u);
  EXPECT_DOUBLE_EQ(c.total_mass(), 4.0);
  EXPECT_DOUBLE_EQ(c.point(3), 3.0);
}

TEST(Discretize, MidpointOnHalfTurn) {
  const auto m = discretize(ParameterSpace::interval(0.0, kPi), {QuadratureRule::midpoint, 4});
  ASSERT_EQ(m.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(m.point(i), (2.0 * double(i) + 1.0) * kPi / 8.0, 1e-15);
    EXPECT_NEAR(m.mass(i), kPi / 4.0, 1e-15);
  }
}

TEST(Discretize, TrapezoidWithTwoNodes) {
  const auto m = discretize(ParameterSpace::interval(0.0, 1.0), {QuadratureRule::trapezoid, 2});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.point(0), 0.0);
  EXPECT_DOUBLE_EQ(m.point(1), 1.0);
  EXPECT_DOUBLE_EQ(m.mass(0), 0.5);
  EXPECT_DOUBLE_EQ(m.mass(1), 0.5);
}

TEST(Discretize, GaussLegendreFiveNodesMatchClosedForm) {
  const auto m = discretize(ParameterSpace::interval(0.0, kPi), {QuadratureRule::gauss_legendre, 5});
  EXPECT_NEAR(m.total_mass(), kPi, 1e-12 * kPi);
  // nodes 0, +-sqrt(5 -+ 2 sqrt(10/7)) / 3 on [-1, 1], mapped to [0, pi]
  const double r = 2.0 * std::sqrt(10.0 / 7.0);
  const double x[5] = {-std::sqrt(5.0 + r) / 3.0, -std::sqrt(5.0 - r) / 3.0, 0.0, std::sqrt(5.0 - r) / 3.0,
                       std::sqrt(5.0 + r) / 3.0};
  const double s70 = 13.0 * std::sqrt(70.0);
  const double w[5] = {(322.0 - s70) / 900.0, (322.0 + s70) / 900.0, 128.0 / 225.0, (322.0 + s70) / 900.0,
                       (322.0 - s70) / 900.0};
  double closed = 0.0;
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(m.point(std::size_t(i)), (x[i] + 1.0) * kPi / 2.0, 1e-14);
    EXPECT_NEAR(m.mass(std::size_t(i)), w[i] * kPi / 2.0, 1e-14);
    const double c = std::cos((x[i] + 1.0) * kPi / 2.0);
    closed += w[i] * kPi / 2.0 * c * c;
  }
  const auto cos2 = [](double t) { return std::cos(t) * std::cos(t); };
  EXPECT_NEAR(integrate(m, cos2), closed, 1e-14);
  // five nodes leave a truncation error near 4.8e-5 on this integrand
  EXPECT_NEAR(std::abs(integrate(m, cos2) - kPi / 2.0), 4.8386e-5, 1e-8);
}

TEST(Discretize, GaussLegendreIntegratesCosineSquaredAtTenNodes) {
  const auto m = discretize(ParameterSpace::interval(0.0, kPi), {QuadratureRule::gauss_legendre, 10});
  EXPECT_NEAR(m.total_mass(), kPi, 1e-12 * kPi);
  // closed form: integral of cos^2 over [0, pi] is pi/2
  EXPECT_NEAR(integrate(m, [](double t) { return std::cos(t) * std::cos(t); }), kPi / 2.0, 1e-10);
}

TEST(Discretize, GaussLegendreIsExactForDegree2nMinus1) {
  const auto m = discretize(ParameterSpace::interval(-1.0, 2.0), {QuadratureRule::gauss_legendre, 4});
  // integral of x^7 over [-1, 2] = (2^8 - 1) / 8
  EXPECT_NEAR(integrate(m, [](double x) { return std::pow(x, 7); }), 255.0 / 8.0, 1e-11);
}

TEST(Discretize, CircleUsesUniformGrid) {
  const auto m = discretize(ParameterSpace::circle(2.0 * kPi), {QuadratureRule::midpoint, 6});
  ASSERT_EQ(m.size(), 6u);
  for (std::size_t i = 1; i < 6; ++i) EXPECT_NEAR(m.point(i) - m.point(i - 1), kPi / 3.0, 1e-14);
  // trigonometric polynomial of degree < n integrates exactly
  EXPECT_NEAR(integrate(m, [](double t) { return std::cos(3.0 * t) + std::sin(2.0 * t) + 1.0; }),
              2.0 * kPi, 1e-12);
}

TEST(Discretize, FiniteSpaceIsRejected) {
  try {
    discretize(ParameterSpace::finite({0.0, 1.0}), {QuadratureRule::midpoint, 2});
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("already atomic"), std::string::npos);
  }
}

TEST(Discretize, ZeroNodesRejected) {
  EXPECT_THROW(discretize(ParameterSpace::interval(0.0, 1.0), {QuadratureRule::midpoint, 0}),
               std::invalid_argument);
}

TEST(Discretize, MassConservationForAllRulesUpTo256) {
  const auto space = ParameterSpace::interval(-0.5, 2.25);
  for (auto rule : {QuadratureRule::midpoint, QuadratureRule::trapezoid, QuadratureRule::gauss_legendre}) {
    for (std::size_t n = 1; n <= 256; ++n) {
      const auto m = discretize(space, {rule, n});
      ASSERT_EQ(m.size(), n);
      for (double mass : m.masses()) ASSERT_GT(mass, 0.0) << to_string(rule) << " n=" << n;
      ASSERT_NEAR(m.total_mass(), 2.75, 1e-12 * 2.75) << to_string(rule) << " n=" << n;
    }
  }
}

TEST(Discretize, RefinementErrorDecreasesOnProjectorEntries) {
  // Off-diagonal projector entry cos t sin t over a quarter turn: smooth, not periodic on the interval.
  const auto space = ParameterSpace::interval(0.0, kPi / 2.0);
  const auto g = [](double t) { return std::cos(t) * std::sin(t); };
  double previous = 1e300;
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    const double a = integrate(discretize(space, {QuadratureRule::midpoint, n}), g);
    const double b = integrate(discretize(space, {QuadratureRule::midpoint, 2 * n}), g);
    const double diff = std::abs(a - b);
    EXPECT_LT(diff, previous);
    previous = diff;
  }
}

TEST(QuadratureRule, NamesRoundTrip) {
  for (auto rule : {QuadratureRule::midpoint, QuadratureRule::trapezoid, QuadratureRule::gauss_legendre})
    EXPECT_EQ(parse_quadrature_rule(to_string(rule)), rule);
  EXPECT_THROW(parse_quadrature_rule("simpson"), std::invalid_argument);
}

TEST(SampleWeights, ConstantAndIdentity) {
  const auto ones = sample_weights(WeightFunction::constant(1.0), AtomicMeasure::counting(4));
  EXPECT_EQ(ones.values, (std::vector<double>{1, 1, 1, 1}));
  EXPECT_TRUE(ones.zero_atoms.empty());
  const AtomicMeasure m({1.0, 2.0, 3.0}, {1.0, 1.0, 1.0});
  EXPECT_EQ(sample_weights(WeightFunction::polynomial({0.0, 1.0}), m).values, (std::vector<double>{1, 2, 3}));
}

TEST(SampleWeights, SineIsPositiveAndSymmetric) {
  const auto m = discretize(ParameterSpace::interval(0.0, kPi), {QuadratureRule::midpoint, 8});
  const auto w = sample_weights(WeightFunction::sine(), m).values;
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_GT(w[i], 0.0);
    EXPECT_NEAR(w[i], std::sin(m.point(i)), 1e-15);
    EXPECT_NEAR(w[i], w[7 - i], 1e-15);
  }
}

TEST(SampleWeights, ZerosFlaggedNegativesRejected) {
  const auto s = sample_weights(WeightFunction::table({1.0, 0.0, 2.0}), AtomicMeasure::counting(3));
  EXPECT_EQ(s.zero_atoms, (std::vector<std::size_t>{1}));
  EXPECT_THROW(sample_weights(WeightFunction::polynomial({-1.0}), AtomicMeasure::counting(2)),
               std::domain_error);
}

TEST(WeightFunction, ParseRegistryKeys) {
  EXPECT_DOUBLE_EQ(WeightFunction::parse("const:2.5")(7.0, 0), 2.5);
  EXPECT_DOUBLE_EQ(WeightFunction::parse("poly:1,0,2")(3.0, 0), 19.0);
  EXPECT_NEAR(WeightFunction::parse("sin")(kPi / 2.0, 0), 1.0, 1e-15);
  const auto t = WeightFunction::parse("table:[0.5,1.5]");
  EXPECT_DOUBLE_EQ(t(9.0, 1), 1.5);
  EXPECT_THROW(WeightFunction::parse("cosh"), std::invalid_argument);
  // descriptions parse back to the same function
  const auto again = WeightFunction::parse(WeightFunction::parse("poly:0.1,0.2").description());
  EXPECT_DOUBLE_EQ(again(2.0, 0), 0.1 + 0.4);
}

}  // namespace
