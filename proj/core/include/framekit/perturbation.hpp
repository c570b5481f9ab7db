#pragma once

// Stability of resolutions of the identity under pointwise perturbation of
// the operators. T is the reference family, Sf the perturbed one; both live
// on the same atoms and weights and use the raw sum convention.

#include "framekit/measure.hpp"
#include "framekit/report.hpp"
#include "framekit/resolution.hpp"
#include "framekit/tolerances.hpp"

#include <optional>
#include <string>
#include <vector>

namespace framekit {

/// lambda1, lambda2 in [0, 1) and an envelope phi >= 0 sampled on the atoms.
struct PerturbationParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<double> phi;
  /// (sum_i phi_i^2 mu_i)^{1/2}
  double phi_l2 = 0.0;
  /// Weight-function spec phi was sampled from, kept for serialization.
  std::string phi_spec = "const:0";

  static PerturbationParams make(double lambda1, double lambda2, const WeightFunction& phi,
                                 const AtomicMeasure& atoms);
  /// Zero lambdas and zero envelope.
  static PerturbationParams trivial(const AtomicMeasure& atoms);

  /// Throws std::invalid_argument on out-of-range lambdas, negative phi, a
  /// length mismatch or a phi_l2 inconsistent with the atoms.
  void validate(const AtomicMeasure& atoms) const;
};

/// Pointwise inequality
///   ||w (T_i - S_i) f|| <= l1 ||w T_i f|| + l2 ||w S_i f|| + phi_i ||f||
/// on the canonical basis plus random unit probes. When an exact operator
/// norm certificate exists it is recorded as well.
template <typename Scalar>
VerificationReport check_perturbation(const OperatorFamily<Scalar>& base,
                                      const OperatorFamily<Scalar>& perturbed,
                                      const PerturbationParams& params,
                                      const VerifyOptions& options = {});

template <typename Scalar>
struct PerturbationOperator {
  VerificationReport report{"perturbation_operator"};
  /// S = sum_i S_i
  Operator<Scalar> s;
  /// Present when S is numerically invertible.
  std::optional<Operator<Scalar>> s_inverse;
  bool exhaustive = true;
  std::size_t subsets_checked = 0;
  /// First subset violating ||sum (T_i - S_i) f|| <= lambda ||sum T_i f||.
  std::optional<std::vector<std::size_t>> violating_subset;
  std::optional<Vector<Scalar>> violating_vector;
};

/// Checks the subset inequality over finite subsets (all of them when
/// |X| <= exhaustive_subset_limit, else singletons, prefixes and random
/// subsets), builds S and checks ||id - S|| <= lambda and
/// f = sum_i S_i S^{-1} f on the canonical basis.
template <typename Scalar>
PerturbationOperator<Scalar> build_perturbation_operator(const OperatorFamily<Scalar>& base,
                                                         const OperatorFamily<Scalar>& perturbed,
                                                         double lambda,
                                                         const VerifyOptions& options = {});

/// {S_i S^{-1}} on the atoms and weights of `perturbed`, raw mode.
template <typename Scalar>
OperatorFamily<Scalar> perturbed_family(const OperatorFamily<Scalar>& perturbed,
                                        const Operator<Scalar>& s_inverse);

struct PredictedBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Predicted bounds of {S_i S^{-1}} from C, D of the base family, the
/// perturbation parameters and A = 1/sigma_max(S), B = 1/sigma_min(S).
PredictedBounds predicted_perturbed_bounds(double c, double d, double a, double b,
                                           const PerturbationParams& params);

/// Full pipeline: base is a resolution, the pointwise inequality and the
/// subset inequality hold, (1 - l1) sqrt(C) - phi_l2 > 0. Checks that the
/// bounds of {S_i S^{-1}} lie inside the predicted interval and that its
/// identity sum holds.
template <typename Scalar>
VerificationReport verify_perturbed_resolution(const OperatorFamily<Scalar>& base,
                                               const OperatorFamily<Scalar>& perturbed,
                                               const PerturbationParams& params, double lambda,
                                               const VerifyOptions& options = {});

/// Composite variant: the pointwise inequality compares w f with
/// w^2 T_i S_i f, the perturbed family is Bessel with the base bound D, and
/// the lower bound
///   (sum w^2 mu)^{1/2} - l1 sqrt(D) - phi_l2  over  E (1 + sqrt(l2))
/// on (sum w^2 mu ||S_i f||^2)^{1/2} / ||f|| is checked on probes. The
/// tighter (1 + l2) denominator is recorded as a diagnostic.
template <typename Scalar>
VerificationReport verify_composite_perturbation(const OperatorFamily<Scalar>& base,
                                                 const OperatorFamily<Scalar>& perturbed,
                                                 const PerturbationParams& params, double lambda,
                                                 const VerifyOptions& options = {});

/// A stored perturbation experiment.
template <typename Scalar>
struct PerturbationScenario {
  OperatorFamily<Scalar> base;
  OperatorFamily<Scalar> perturbed;
  double lambda = 0.0;
  PerturbationParams params;
  /// Report ids to run; empty means perturbation, perturbation_operator
  /// and perturbed_resolution.
  std::vector<std::string> checks;
};

}  // namespace framekit
