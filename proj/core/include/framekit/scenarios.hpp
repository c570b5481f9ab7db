#pragma once

// Canonical instances and seeded random generators. Tests, benchmarks, the
// CLI and the docs all take their instances from here.

#include "framekit/fusion_frame.hpp"
#include "framekit/measure.hpp"
#include "framekit/perturbation.hpp"
#include "framekit/random.hpp"
#include "framekit/resolution.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace framekit {

// ---------------------------------------------------------------------------
// Canonical fusion frames

/// Coordinate axes span{e_i}, unit weights and masses.
template <typename Scalar>
WeightedSubspaceFamily<Scalar> axes_family(Index dim, double weight = 1.0, double mass = 1.0);

/// Lines at angle theta_i = atoms.point(i) in the plane.
template <typename Scalar>
WeightedSubspaceFamily<Scalar> line_family(const AtomicMeasure& atoms, std::vector<double> weights);

/// Three lines at 0, 60 and 120 degrees, unit weights and masses.
template <typename Scalar>
WeightedSubspaceFamily<Scalar> mercedes_family();

// ---------------------------------------------------------------------------
// Continuous scenarios

struct ContinuousScenario {
  std::string name;
  ParameterSpace space;
  std::string weight;
  /// Closed-form limits of A(n) and B(n), when known.
  std::optional<double> lower_limit;
  std::optional<double> upper_limit;
  /// True when the quadrature error is exactly zero beyond roundoff for
  /// n >= 2, so only a roundoff floor can be asserted on refinement.
  bool exact_for_small_n = false;
};

/// Registered continuous scenarios: "rotating_line" (lines over [0, pi)),
/// "quarter_turn_line" (lines over [0, pi/2)).
const std::vector<ContinuousScenario>& continuous_scenarios();
/// Throws std::invalid_argument for unknown names and "already atomic" for
/// finite scenarios.
const ContinuousScenario& continuous_scenario(const std::string& name);

/// A continuous frame spec together with its discretization.
struct ContinuousSpec {
  ParameterSpace space;
  DiscretizationScheme scheme;
  std::string weight = "const:1";
  /// Subspace family over the parameter; only "rotating_line" exists.
  std::string family = "rotating_line";
};

ContinuousSpec scenario_spec(const std::string& name, std::size_t n,
                             QuadratureRule rule = QuadratureRule::midpoint);

/// Discretizes the spec and builds the line family over the atoms.
WeightedSubspaceFamily<double> discretize_family(const ContinuousSpec& spec);

struct SweepRow {
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
  /// |A(n) - A_inf|, absent without a registered limit.
  std::optional<double> lower_error;
  std::optional<double> upper_error;
};

/// Frame bounds of a continuous scenario for each n. n_list must be
/// nonempty and strictly ascending.
std::vector<SweepRow> sweep_discretization(const std::string& scenario,
                                           const std::vector<std::size_t>& n_list,
                                           QuadratureRule rule = QuadratureRule::midpoint);

// ---------------------------------------------------------------------------
// Random fusion frames

/// Random subspaces of random rank in [1, dim], weights in [0.5, 2],
/// masses in [0.5, 1.5]. Not guaranteed to be a frame.
template <typename Scalar>
WeightedSubspaceFamily<Scalar> random_frame(Rng& rng, Index dim, std::size_t atoms);

/// Random orthogonal decomposition of the space into `parts` nonzero blocks,
/// as orthonormal column blocks.
template <typename Scalar>
std::vector<Subspace<Scalar>> random_orthogonal_decomposition(Rng& rng, Index dim,
                                                              std::size_t parts);

/// Orthogonal decomposition with w_i mu_i = 1, so f = sum w mu P f.
template <typename Scalar>
WeightedSubspaceFamily<Scalar> random_projection_family(Rng& rng, Index dim);

// ---------------------------------------------------------------------------
// Resolutions

/// T_i = c P_i on the coordinate axes with masses 1/c, weighted mode, so
/// sum w^2 mu T_i = I.
template <typename Scalar>
OperatorFamily<Scalar> scaled_axes_resolution(Index dim, double c);

/// T_i = P_i over a union of `copies` orthogonal decompositions with
/// w^2 mu = 1/copies, weighted mode.
template <typename Scalar>
OperatorFamily<Scalar> exact_projector_resolution(Rng& rng, Index dim, std::size_t copies);

/// Projector perturbation T_i = (P_i + delta G_i P_i) renormalized so the
/// weighted identity sum holds exactly.
template <typename Scalar>
OperatorFamily<Scalar> random_weighted_resolution(Rng& rng, Index dim, std::size_t atoms,
                                                  double delta = 0.3);

/// Same construction in raw mode with unit weights and random masses.
/// `atoms_measure` fixes the atoms when given.
template <typename Scalar>
OperatorFamily<Scalar> random_raw_resolution(Rng& rng, Index dim, std::size_t atoms,
                                             double delta = 0.3,
                                             const std::optional<AtomicMeasure>& atoms_measure = {});

template <typename Scalar>
struct ConverseInstance {
  WeightedSubspaceFamily<Scalar> frame;
  OperatorFamily<Scalar> family;
};

/// Fusion frame and weighted-mode operators T_i = P_i X_i P_i with
/// sum w^2 mu T_i = I.
template <typename Scalar>
ConverseInstance<Scalar> random_converse_instance(Rng& rng, Index dim, std::size_t atoms);

template <typename Scalar>
struct FrameSequenceInstance {
  OperatorFamily<Scalar> family;
  std::vector<Vector<Scalar>> sequence;
};

/// Raw resolution and a frame sequence. Even calls span the whole space;
/// odd calls use a block-diagonal resolution leaving the span invariant.
template <typename Scalar>
FrameSequenceInstance<Scalar> random_frame_sequence_instance(Rng& rng, Index dim,
                                                             bool invariant_subspace);

// ---------------------------------------------------------------------------
// Perturbations

/// S_i = (I - K) T_i - eps G_i T_i on a random raw resolution, with
/// ||K|| = kappa. eps is halved until the subset inequality holds with
/// lambda = kappa + 0.05 and the side condition of the perturbed-bound
/// check holds. lambda1 = kappa, phi_i = w_i eps ||G_i T_i||.
template <typename Scalar>
PerturbationScenario<Scalar> random_perturbation(Rng& rng, Index dim, std::size_t atoms,
                                                 const VerifyOptions& options = {});

/// Reflection resolution {I, U_1, -U_1, ...} with U_j^2 = I, perturbed by
/// S_i = (I - K) T_i. Satisfies the composite pointwise inequality with
/// phi_i = ||K||.
template <typename Scalar>
PerturbationScenario<Scalar> random_composite_perturbation(Rng& rng, Index dim,
                                                           std::size_t reflections);

/// S_i = scale * T_i with lambda1 = 1 - scale, lambda = 1 - scale.
template <typename Scalar>
PerturbationScenario<Scalar> scalar_perturbation(const OperatorFamily<Scalar>& base, double scale);

// ---------------------------------------------------------------------------
// Registry used by the command line

struct ScenarioParams {
  std::uint64_t seed = 1;
  Index dim = 3;
  std::size_t atoms = 4;
  std::size_t n = 64;
  QuadratureRule rule = QuadratureRule::midpoint;
};

using Instance = std::variant<WeightedSubspaceFamily<double>, OperatorFamily<double>,
                              PerturbationScenario<double>, ContinuousSpec>;

struct ScenarioInfo {
  std::string name;
  std::string kind;
  std::string description;
};

const std::vector<ScenarioInfo>& scenario_registry();
/// Throws std::invalid_argument for unknown names.
Instance make_scenario(const std::string& name, const ScenarioParams& params);

}  // namespace framekit
