#include "framekit/perturbation.hpp"
#include "framekit/random.hpp"
#include "framekit/scenarios.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace {

using namespace framekit;

template <typename Scalar>
class PerturbationTyped : public ::testing::Test {};
using Fields = ::testing::Types<double, Complex>;
TYPED_TEST_SUITE(PerturbationTyped, Fields);

template <typename Scalar>
OperatorFamily<Scalar> scaled(const OperatorFamily<Scalar>& f, double c) {
  std::vector<Operator<Scalar>> ops;
  for (const auto& t : f.operators()) ops.push_back(Scalar(c) * t);
  return f.with_operators(ops);
}

PerturbationParams params(double l1, double l2, double phi, const AtomicMeasure& atoms) {
  return PerturbationParams::make(l1, l2, WeightFunction::constant(phi), atoms);
}

TEST(Params, Validation) {
  const auto atoms = AtomicMeasure({0.0, 1.0}, {1.0, 4.0});
  const auto p = params(0.2, 0.1, 0.5, atoms);
  EXPECT_NEAR(p.phi_l2, std::sqrt(0.25 + 0.25 * 4.0), 1e-15);
  EXPECT_NO_THROW(p.validate(atoms));
  EXPECT_THROW(params(1.0, 0.0, 0.0, atoms), std::invalid_argument);
  EXPECT_THROW(params(0.0, -0.1, 0.0, atoms), std::invalid_argument);
  auto bad = p;
  bad.phi_l2 *= 1.01;
  EXPECT_THROW(bad.validate(atoms), std::invalid_argument);
  EXPECT_THROW(p.validate(AtomicMeasure::counting(3)), std::invalid_argument);
  const auto t = PerturbationParams::trivial(atoms);
  EXPECT_EQ(t.phi_l2, 0.0);
}

// ---------------------------------------------------------------------------
// Pointwise inequality

TEST(CheckPerturbation, IdenticalFamilies) {
  const auto t = from_orthonormal_basis<double>(3);
  const auto r = check_perturbation(t, t, PerturbationParams::trivial(t.atoms()));
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.constant("max_margin"), 0.0);
  EXPECT_EQ(r.constant("probe_count"), 3.0 + 2000.0);
}

TEST(CheckPerturbation, ScalarShrinkHasZeroMargin) {
  Rng rng(51);
  const auto t = random_raw_resolution<double>(rng, 3, 4);
  const auto r = check_perturbation(t, scaled(t, 0.9), params(0.1, 0.0, 0.0, t.atoms()));
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.constant("max_margin"), 0.0, 1e-14);
  EXPECT_EQ(r.constant("exact_certificate"), 1.0);
}

TEST(CheckPerturbation, TooSmallLambdaFails) {
  Rng rng(52);
  const auto t = random_raw_resolution<double>(rng, 3, 4);
  const auto r = check_perturbation(t, scaled(t, 0.8), params(0.1, 0.0, 0.0, t.atoms()));
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.constant("max_margin"), 1e-3);
}

TYPED_TEST(PerturbationTyped, AdditiveErrorCoveredByOperatorNorms) {
  using S = TypeParam;
  Rng rng(53);
  const auto t = random_raw_resolution<S>(rng, 4, 5);
  std::vector<Operator<S>> ops;
  std::vector<double> phi;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const Operator<S> e = S(0.01) * random_gaussian_matrix<S>(rng, 4, 4);
    ops.push_back(t.op(i) + e);
    phi.push_back(t.weight(i) * oracle::operator_norm(e));
  }
  const auto p = PerturbationParams::make(0.0, 0.0, WeightFunction::table(phi), t.atoms());
  const auto r = check_perturbation(t, t.with_operators(ops), p);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.constant("exact_certificate"), 1.0);
}

TEST(CheckPerturbation, MisalignedFamiliesThrow) {
  const auto a = from_orthonormal_basis<double>(2);
  const auto b = from_orthonormal_basis<double>(3);
  EXPECT_THROW(check_perturbation(a, b, PerturbationParams::trivial(a.atoms())), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Perturbation operator S = sum S_i

TEST(BuildS, IdenticalFamiliesGiveIdentity) {
  const auto t = from_orthonormal_basis<double>(3);
  const auto s = build_perturbation_operator(t, t, 0.1);
  EXPECT_TRUE(s.report.passed());
  EXPECT_TRUE(s.exhaustive);
  EXPECT_EQ(s.subsets_checked, 7u);
  EXPECT_LE((s.s - Operator<double>::Identity(3, 3)).norm(), 1e-15);
}

TEST(BuildS, ScalarShrink) {
  Rng rng(54);
  const auto t = random_raw_resolution<double>(rng, 3, 4);
  const auto s = build_perturbation_operator(t, scaled(t, 0.7), 0.3);
  EXPECT_TRUE(s.report.passed());
  EXPECT_NEAR(s.report.constant("identity_gap"), 0.3, 1e-12);
  ASSERT_TRUE(s.s_inverse.has_value());
  EXPECT_LE((*s.s_inverse - Operator<double>::Identity(3, 3) / 0.7).norm(), 1e-12);
}

TEST(BuildS, OrthonormalBasisWithRescaledRandomPerturbation) {
  Rng rng(55);
  const auto t = from_orthonormal_basis<double>(4);
  std::vector<Operator<double>> noise;
  for (std::size_t i = 0; i < 4; ++i) noise.push_back(random_gaussian_matrix<double>(rng, 4, 4));
  double eps = 0.05;
  for (int attempt = 0; attempt < 30; ++attempt, eps *= 0.5) {
    std::vector<Operator<double>> ops;
    for (std::size_t i = 0; i < 4; ++i) ops.push_back(t.op(i) + eps * noise[i]);
    const auto s = build_perturbation_operator(t, t.with_operators(ops), 0.5);
    if (!s.report.hypotheses_hold()) continue;
    EXPECT_TRUE(s.report.passed());
    EXPECT_EQ(s.subsets_checked, 15u);
    // dense-norm oracle
    EXPECT_LE(oracle::operator_norm(Operator<double>(Operator<double>::Identity(4, 4) - s.s)), 0.5 + 1e-9);
    Operator<double> recon = Operator<double>::Zero(4, 4);
    for (const auto& op : ops) recon += op * *s.s_inverse;
    EXPECT_LE((recon - Operator<double>::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-9);
    return;
  }
  FAIL() << "no admissible perturbation found";
}

TEST(BuildS, ViolatingSubsetIsNamed) {
  const auto t = from_orthonormal_basis<double>(2);
  const auto s = build_perturbation_operator(t, t.with_operators({t.op(0), -t.op(1)}), 0.5);
  EXPECT_FALSE(s.report.hypotheses_hold());
  ASSERT_TRUE(s.violating_subset.has_value());
  // only subsets containing atom 1 can violate
  EXPECT_NE(std::find(s.violating_subset->begin(), s.violating_subset->end(), 1u), s.violating_subset->end());
  ASSERT_TRUE(s.violating_vector.has_value());
}

TEST(BuildS, LargeFamiliesAreSampled) {
  Rng rng(56);
  const auto t = random_raw_resolution<double>(rng, 2, 14);
  const auto s = build_perturbation_operator(t, t, 0.2);
  EXPECT_FALSE(s.exhaustive);
  EXPECT_NE(s.report.find("subset inequality (sampled)"), nullptr);
  EXPECT_TRUE(s.report.passed());
}

TEST(BuildS, LambdaOutOfRangeThrows) {
  const auto t = from_orthonormal_basis<double>(2);
  EXPECT_THROW(build_perturbation_operator(t, t, 1.0), std::invalid_argument);
  EXPECT_THROW(build_perturbation_operator(t, t, -0.1), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Perturbed resolution bounds

TYPED_TEST(PerturbationTyped, DegenerateReproducesBaseBounds) {
  using S = TypeParam;
  Rng rng(57);
  const auto t = random_raw_resolution<S>(rng, 3, 5);
  const auto base = verify_resolution(t).bounds;
  const auto r = verify_perturbed_resolution(t, t, PerturbationParams::trivial(t.atoms()), 0.0);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.constant("A"), 1.0, 1e-12);
  EXPECT_NEAR(r.constant("B"), 1.0, 1e-12);
  EXPECT_NEAR(r.constant("predicted_lower"), base.lower, 1e-9);
  EXPECT_NEAR(r.constant("predicted_upper"), base.upper, 1e-9);
  EXPECT_NEAR(r.constant("C_perturbed"), base.lower, 1e-9);
  EXPECT_NEAR(r.constant("D_perturbed"), base.upper, 1e-9);
}

TEST(PerturbedResolution, ScalarShrinkCollapses) {
  Rng rng(58);
  const auto t = random_raw_resolution<double>(rng, 3, 4);
  const auto base = verify_resolution(t).bounds;
  const auto r = verify_perturbed_resolution(t, scaled(t, 0.9), params(0.1, 0.0, 0.0, t.atoms()), 0.1);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.constant("C_perturbed"), base.lower, 1e-9);
  EXPECT_NEAR(r.constant("D_perturbed"), base.upper, 1e-9);
  EXPECT_LE(r.constant("predicted_lower"), base.lower + 1e-9);
  EXPECT_GE(r.constant("predicted_upper"), base.upper - 1e-9);
}

TEST(PerturbedResolution, SideConditionFailureIsReported) {
  const auto t = from_orthonormal_basis<double>(2);
  // (1 - 0) * sqrt(1) - phi_l2 = 1 - sqrt(2) < 0
  const auto r = verify_perturbed_resolution(t, t, params(0.0, 0.0, 1.0, t.atoms()), 0.0);
  EXPECT_FALSE(r.hypotheses_hold());
  EXPECT_FALSE(r.passed());
  EXPECT_LT(r.constant("side_condition"), 0.0);
}

TYPED_TEST(PerturbationTyped, RandomPerturbationsStayInsidePrediction) {
  using S = TypeParam;
  Rng rng(59);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sc = random_perturbation<S>(rng, static_cast<Index>(rng.uniform_index(1, 4)),
                                           rng.uniform_index(1, 6));
    const auto r = verify_perturbed_resolution(sc.base, sc.perturbed, sc.params, sc.lambda);
    EXPECT_TRUE(r.passed()) << "trial " << trial;
    // independent bounds of {S_i S^-1}
    const auto op = build_perturbation_operator(sc.base, sc.perturbed, sc.lambda);
    const auto fam = perturbed_family(sc.perturbed, *op.s_inverse);
    const auto lam = oracle::eigenvalues(oracle::resolution_gram(fam));
    EXPECT_GE(lam.front(), r.constant("predicted_lower") - 1e-9);
    EXPECT_LE(lam.back(), r.constant("predicted_upper") + 1e-9);
  }
}

TEST(PredictedBounds, LowerIsMonotoneInLambda1) {
  const auto atoms = AtomicMeasure::counting(3);
  double previous = 1e300;
  for (int k = 0; k <= 20; ++k) {
    const double l1 = 0.045 * k;
    const auto b = predicted_perturbed_bounds(2.0, 5.0, 0.8, 1.3, params(l1, 0.2, 0.1, atoms));
    EXPECT_LE(b.lower, previous);
    previous = b.lower;
  }
}

TEST(PredictedBounds, ClosedForm) {
  const auto atoms = AtomicMeasure::counting(2);
  const auto p = params(0.1, 0.2, 0.3, atoms);
  const double phi = std::sqrt(2.0) * 0.3;
  const auto b = predicted_perturbed_bounds(4.0, 9.0, 0.5, 2.0, p);
  EXPECT_NEAR(b.lower, std::pow((0.9 * 2.0 - phi) / 1.2, 2) * 0.25, 1e-14);
  EXPECT_NEAR(b.upper, std::pow((1.1 * 3.0 + phi) / 0.8, 2) * 4.0, 1e-13);
}

// ---------------------------------------------------------------------------
// Composite variant

TEST(Composite, DimensionOneIdentity) {
  const OperatorFamily<double> t(AtomicMeasure::counting(1), {1.0}, {Operator<double>::Identity(1, 1)},
                                 SumMode::raw);
  const auto r = verify_composite_perturbation(t, t, PerturbationParams::trivial(t.atoms()), 0.0);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.constant("asserted_lower"), 1.0, 1e-15);
  EXPECT_NEAR(r.constant("min_probe_norm"), 1.0, 1e-12);
}

TEST(Composite, ProjectorEnvelopeMakesSideConditionVanish) {
  // S_i = T_i = e_i e_i^*: ||f - T_i T_i f|| = ||f - P_i f|| <= ||f||, envelope 1.
  // The side condition sqrt(n) - 0 - sqrt(n) = 0 is not positive.
  const auto t = from_orthonormal_basis<double>(3);
  const auto r = verify_composite_perturbation(t, t, params(0.0, 0.0, 1.0, t.atoms()), 0.0);
  EXPECT_TRUE(r.find("composite pointwise inequality (probe-certified)")->passed);
  EXPECT_FALSE(r.find("(sum w^2 mu)^{1/2} - lambda1 sqrt(D) - phi_l2 > 0")->passed);
  EXPECT_NEAR(r.constant("side_condition"), 0.0, 1e-12);
  EXPECT_FALSE(r.passed());
  bool noted = false;
  for (const auto& n : r.notes()) noted |= n.find("K") != std::string::npos;
  EXPECT_TRUE(noted);
}

TYPED_TEST(PerturbationTyped, RandomCompositeInstances) {
  using S = TypeParam;
  Rng rng(60);
  for (int trial = 0; trial < 10; ++trial) {
    const auto sc = random_composite_perturbation<S>(rng, static_cast<Index>(rng.uniform_index(1, 4)),
                                                     rng.uniform_index(1, 3));
    const auto r = verify_composite_perturbation(sc.base, sc.perturbed, sc.params, sc.lambda);
    EXPECT_TRUE(r.passed()) << "trial " << trial;
    EXPECT_GE(r.constant("min_probe_norm"), r.constant("asserted_lower") - 1e-9);
    // reflections have E = 1, so the asserted form is the weaker one
    EXPECT_LE(r.constant("asserted_lower"), r.constant("proof_lower") + 1e-15);
  }
}

}  // namespace
