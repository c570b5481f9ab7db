#include "framekit/scenarios.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace framekit {

namespace {

constexpr int kMaxAttempts = 1000;

template <typename Scalar>
Operator<Scalar> scaled_gaussian(Rng& rng, Index dim) {
  return random_gaussian_matrix<Scalar>(rng, dim, dim) / std::sqrt(static_cast<double>(dim));
}

std::vector<double> point_labels(std::size_t n) {
  std::vector<double> points(n);
  for (std::size_t i = 0; i < n; ++i) {
    points[i] = static_cast<double>(i);
  }
  return points;
}

AtomicMeasure random_masses(Rng& rng, std::size_t n) {
  std::vector<double> masses(n);
  for (auto& m : masses) {
    m = rng.uniform(0.5, 1.5);
  }
  return AtomicMeasure(point_labels(n), std::move(masses));
}

// Condition number of a square operator by singular values.
template <typename Scalar>
double condition(const Operator<Scalar>& a) {
  const auto sv = singular_values(a);
  return sv.back() > 0.0 ? sv.front() / sv.back() : std::numeric_limits<double>::infinity();
}

template <typename Scalar>
bool well_conditioned(const OperatorFamily<Scalar>& family) {
  const auto spectrum = self_adjoint_spectrum(resolution_gram(family));
  return spectrum.back() > 0.0 && spectrum.front() > 1e-6 * spectrum.back();
}

// Projector perturbation T0_i = P_i + delta G_i P_i, then T_i = T0_i Sigma^-1
// where Sigma is the identity sum in the requested mode.
template <typename Scalar>
std::optional<OperatorFamily<Scalar>> perturbed_projectors(Rng& rng, Index dim,
                                                           const AtomicMeasure& atoms,
                                                           const std::vector<double>& weights,
                                                           double delta, SumMode mode) {
  const std::size_t n = atoms.size();
  std::vector<Operator<Scalar>> ops;
  ops.reserve(n);
  Operator<Scalar> sum = Operator<Scalar>::Zero(dim, dim);
  for (std::size_t i = 0; i < n; ++i) {
    const Index rank = static_cast<Index>(rng.uniform_index(1, static_cast<std::size_t>(dim)));
    const Operator<Scalar> p = random_subspace<Scalar>(rng, dim, rank).projector();
    const Operator<Scalar> g = scaled_gaussian<Scalar>(rng, dim);
    ops.push_back(p + Scalar(delta) * g * p);
    const double c = mode == SumMode::raw ? 1.0 : weights[i] * weights[i] * atoms.mass(i);
    sum += Scalar(c) * ops.back();
  }
  if (condition(sum) > 1e3) {
    return std::nullopt;
  }
  const Operator<Scalar> inv = sum.inverse();
  for (auto& t : ops) {
    t = t * inv;
  }
  OperatorFamily<Scalar> family(atoms, weights, std::move(ops), mode);
  if (!well_conditioned(family)) {
    return std::nullopt;
  }
  return family;
}

template <typename Scalar>
Operator<Scalar> kron(const Operator<Scalar>& a, const Operator<Scalar>& b) {
  Operator<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Scalar>
Operator<Scalar> reflection(Rng& rng, Index dim) {
  const Index rank =
      dim == 1 ? 1 : static_cast<Index>(rng.uniform_index(1, static_cast<std::size_t>(dim - 1)));
  const Operator<Scalar> q = random_subspace<Scalar>(rng, dim, rank).basis();
  return Operator<Scalar>::Identity(dim, dim) - Scalar(2) * q * q.adjoint();
}

}  // namespace

template <typename Scalar>
WeightedSubspaceFamily<Scalar> axes_family(Index dim, double weight, double mass) {
  if (dim < 1) {
    throw DimensionError("dimension must be positive");
  }
  const auto n = static_cast<std::size_t>(dim);
  std::vector<Subspace<Scalar>> subspaces;
  for (Index k = 0; k < dim; ++k) {
    subspaces.push_back(
        Subspace<Scalar>::from_orthonormal_columns(canonical_vector<Scalar>(dim, k)));
  }
  return WeightedSubspaceFamily<Scalar>(AtomicMeasure(point_labels(n), std::vector<double>(n, mass)),
                                        std::vector<double>(n, weight), std::move(subspaces));
}

template <typename Scalar>
WeightedSubspaceFamily<Scalar> line_family(const AtomicMeasure& atoms, std::vector<double> weights) {
  std::vector<Subspace<Scalar>> subspaces;
  subspaces.reserve(atoms.size());
  for (double theta : atoms.points()) {
    Operator<Scalar> u(2, 1);
    u(0, 0) = Scalar(std::cos(theta));
    u(1, 0) = Scalar(std::sin(theta));
    subspaces.push_back(Subspace<Scalar>::from_orthonormal_columns(std::move(u)));
  }
  return WeightedSubspaceFamily<Scalar>(atoms, std::move(weights), std::move(subspaces));
}

template <typename Scalar>
WeightedSubspaceFamily<Scalar> mercedes_family() {
  const double pi = std::numbers::pi;
  return line_family<Scalar>(AtomicMeasure({0.0, pi / 3.0, 2.0 * pi / 3.0}, {1.0, 1.0, 1.0}),
                             {1.0, 1.0, 1.0});
}

const std::vector<ContinuousScenario>& continuous_scenarios() {
  static const std::vector<ContinuousScenario> registry = [] {
    const double pi = std::numbers::pi;
    std::vector<ContinuousScenario> out;
    out.push_back({"rotating_line", ParameterSpace::interval(0.0, pi), "const:1", pi / 2.0,
                   pi / 2.0, true});
    out.push_back({"quarter_turn_line", ParameterSpace::interval(0.0, pi / 2.0), "const:1",
                   pi / 4.0 - 0.5, pi / 4.0 + 0.5, false});
    return out;
  }();
  return registry;
}

const ContinuousScenario& continuous_scenario(const std::string& name) {
  for (const auto& s : continuous_scenarios()) {
    if (s.name == name) {
      return s;
    }
  }
  for (const auto& info : scenario_registry()) {
    if (info.name == name) {
      throw std::invalid_argument("scenario " + name + " is finite: already atomic");
    }
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

ContinuousSpec scenario_spec(const std::string& name, std::size_t n, QuadratureRule rule) {
  const auto& s = continuous_scenario(name);
  return ContinuousSpec{s.space, DiscretizationScheme{rule, n}, s.weight, "rotating_line"};
}

WeightedSubspaceFamily<double> discretize_family(const ContinuousSpec& spec) {
  if (spec.family != "rotating_line") {
    throw std::invalid_argument("unknown continuous family: " + spec.family);
  }
  const AtomicMeasure atoms = discretize(spec.space, spec.scheme);
  auto weights = sample_weights(WeightFunction::parse(spec.weight), atoms).values;
  return line_family<double>(atoms, std::move(weights));
}

std::vector<SweepRow> sweep_discretization(const std::string& scenario,
                                           const std::vector<std::size_t>& n_list,
                                           QuadratureRule rule) {
  const auto& s = continuous_scenario(scenario);
  if (n_list.empty()) {
    throw std::invalid_argument("sweep needs at least one n");
  }
  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (k > 0 && n_list[k] <= n_list[k - 1]) {
      throw std::invalid_argument("sweep n values must be strictly ascending");
    }
    const auto bounds = frame_bounds(discretize_family(scenario_spec(scenario, n_list[k], rule)));
    SweepRow row{n_list[k], bounds.lower, bounds.upper, std::nullopt, std::nullopt};
    if (s.lower_limit) {
      row.lower_error = std::abs(bounds.lower - *s.lower_limit);
    }
    if (s.upper_limit) {
      row.upper_error = std::abs(bounds.upper - *s.upper_limit);
    }
    rows.push_back(row);
  }
  return rows;
}

template <typename Scalar>
WeightedSubspaceFamily<Scalar> random_frame(Rng& rng, Index dim, std::size_t atoms) {
  if (dim < 1 || atoms < 1) {
    throw std::invalid_argument("random frame needs dim >= 1 and at least one atom");
  }
  std::vector<Subspace<Scalar>> subspaces;
  std::vector<double> weights;
  std::vector<double> masses;
  for (std::size_t i = 0; i < atoms; ++i) {
    const Index rank = static_cast<Index>(rng.uniform_index(1, static_cast<std::size_t>(dim)));
    subspaces.push_back(random_subspace<Scalar>(rng, dim, rank));
    weights.push_back(rng.uniform(0.5, 2.0));
    masses.push_back(rng.uniform(0.5, 1.5));
  }
  return WeightedSubspaceFamily<Scalar>(AtomicMeasure(point_labels(atoms), std::move(masses)),
                                        std::move(weights), std::move(subspaces));
}

template <typename Scalar>
std::vector<Subspace<Scalar>> random_orthogonal_decomposition(Rng& rng, Index dim,
                                                              std::size_t parts) {
  if (parts < 1 || static_cast<Index>(parts) > dim) {
    throw std::invalid_argument("number of parts must lie in [1, dim]");
  }
  std::vector<Index> sizes(parts, 1);
  for (Index extra = dim - static_cast<Index>(parts); extra > 0; --extra) {
    ++sizes[rng.uniform_index(0, parts - 1)];
  }
  const Operator<Scalar> q = random_unitary<Scalar>(rng, dim);
  std::vector<Subspace<Scalar>> out;
  Index start = 0;
  for (Index size : sizes) {
    out.push_back(Subspace<Scalar>::from_orthonormal_columns(q.middleCols(start, size)));
    start += size;
  }
  return out;
}

template <typename Scalar>
WeightedSubspaceFamily<Scalar> random_projection_family(Rng& rng, Index dim) {
  const std::size_t parts = rng.uniform_index(1, static_cast<std::size_t>(dim));
  auto subspaces = random_orthogonal_decomposition<Scalar>(rng, dim, parts);
  std::vector<double> weights;
  std::vector<double> masses;
  for (std::size_t i = 0; i < parts; ++i) {
    weights.push_back(rng.uniform(0.5, 3.0));
    masses.push_back(1.0 / weights.back());
  }
  return WeightedSubspaceFamily<Scalar>(AtomicMeasure(point_labels(parts), std::move(masses)),
                                        std::move(weights), std::move(subspaces));
}

template <typename Scalar>
OperatorFamily<Scalar> scaled_axes_resolution(Index dim, double c) {
  if (!(c > 0.0)) {
    throw std::invalid_argument("scale must be positive");
  }
  const auto n = static_cast<std::size_t>(dim);
  std::vector<Operator<Scalar>> ops;
  for (Index k = 0; k < dim; ++k) {
    Operator<Scalar> t = Operator<Scalar>::Zero(dim, dim);
    t(k, k) = Scalar(c);
    ops.push_back(std::move(t));
  }
  return OperatorFamily<Scalar>(AtomicMeasure(point_labels(n), std::vector<double>(n, 1.0 / c)),
                                std::vector<double>(n, 1.0), std::move(ops), SumMode::weighted);
}

template <typename Scalar>
OperatorFamily<Scalar> exact_projector_resolution(Rng& rng, Index dim, std::size_t copies) {
  if (copies < 1) {
    throw std::invalid_argument("need at least one decomposition");
  }
  std::vector<Operator<Scalar>> ops;
  std::vector<double> weights;
  std::vector<double> masses;
  for (std::size_t c = 0; c < copies; ++c) {
    const std::size_t parts = rng.uniform_index(1, static_cast<std::size_t>(dim));
    for (const auto& w : random_orthogonal_decomposition<Scalar>(rng, dim, parts)) {
      ops.push_back(w.projector());
      weights.push_back(rng.uniform(0.5, 2.0));
      masses.push_back(1.0 / (static_cast<double>(copies) * weights.back() * weights.back()));
    }
  }
  const std::size_t n = ops.size();
  return OperatorFamily<Scalar>(AtomicMeasure(point_labels(n), std::move(masses)),
                                std::move(weights), std::move(ops), SumMode::weighted);
}

template <typename Scalar>
OperatorFamily<Scalar> random_weighted_resolution(Rng& rng, Index dim, std::size_t atoms,
                                                  double delta) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const AtomicMeasure measure = random_masses(rng, atoms);
    std::vector<double> weights(atoms);
    for (auto& w : weights) {
      w = rng.uniform(0.5, 2.0);
    }
    auto family =
        perturbed_projectors<Scalar>(rng, dim, measure, weights, delta, SumMode::weighted);
    if (family) {
      return *family;
    }
  }
  throw std::runtime_error("could not generate a well-conditioned weighted resolution");
}

template <typename Scalar>
OperatorFamily<Scalar> random_raw_resolution(Rng& rng, Index dim, std::size_t atoms, double delta,
                                             const std::optional<AtomicMeasure>& atoms_measure) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const AtomicMeasure measure = atoms_measure ? *atoms_measure : random_masses(rng, atoms);
    const std::vector<double> weights(measure.size(), 1.0);
    auto family = perturbed_projectors<Scalar>(rng, dim, measure, weights, delta, SumMode::raw);
    if (family) {
      return *family;
    }
  }
  throw std::runtime_error("could not generate a well-conditioned raw resolution");
}

template <typename Scalar>
ConverseInstance<Scalar> random_converse_instance(Rng& rng, Index dim, std::size_t atoms) {
  const Index d2 = dim * dim;
  const Operator<Scalar> id = Operator<Scalar>::Identity(dim, dim);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const AtomicMeasure measure = random_masses(rng, atoms);
    std::vector<double> weights(atoms);
    std::vector<Subspace<Scalar>> subspaces;
    std::vector<Operator<Scalar>> seeds;
    Operator<Scalar> lin = Operator<Scalar>::Zero(d2, d2);
    Operator<Scalar> rhs = id;
    for (std::size_t i = 0; i < atoms; ++i) {
      const auto lo = static_cast<std::size_t>((dim + 1) / 2);
      const Index rank = static_cast<Index>(rng.uniform_index(lo, static_cast<std::size_t>(dim)));
      subspaces.push_back(random_subspace<Scalar>(rng, dim, rank));
      weights[i] = rng.uniform(0.5, 2.0);
      seeds.push_back(Scalar(0.3) * scaled_gaussian<Scalar>(rng, dim));
      const Operator<Scalar> p = subspaces.back().projector();
      const Scalar c(weights[i] * weights[i] * measure.mass(i));
      lin += c * kron<Scalar>(p.transpose(), p);
      rhs -= c * (p * seeds.back() * p);
    }
    // Solve sum c_i P_i Y P_i = rhs for Y in vectorized form.
    const Vector<Scalar> b = Eigen::Map<const Vector<Scalar>>(rhs.data(), d2);
    const Vector<Scalar> y = lin.completeOrthogonalDecomposition().solve(b);
    if ((lin * y - b).norm() > 1e-10 * std::max(1.0, b.norm())) {
      continue;
    }
    const Operator<Scalar> ym = Eigen::Map<const Operator<Scalar>>(y.data(), dim, dim);
    std::vector<Operator<Scalar>> ops;
    for (std::size_t i = 0; i < atoms; ++i) {
      const Operator<Scalar> p = subspaces[i].projector();
      ops.push_back(p * (seeds[i] + ym) * p);
    }
    OperatorFamily<Scalar> family(measure, weights, std::move(ops), SumMode::weighted);
    if (identity_residual(family) > 1e-11 || !well_conditioned(family)) {
      continue;
    }
    return {WeightedSubspaceFamily<Scalar>(measure, weights, std::move(subspaces)),
            std::move(family)};
  }
  throw std::runtime_error("could not generate a converse-bounds instance");
}

template <typename Scalar>
FrameSequenceInstance<Scalar> random_frame_sequence_instance(Rng& rng, Index dim,
                                                             bool invariant_subspace) {
  if (!invariant_subspace || dim < 2) {
    const std::size_t atoms = rng.uniform_index(2, 6);
    auto family = random_raw_resolution<Scalar>(rng, dim, atoms);
    const std::size_t m = rng.uniform_index(static_cast<std::size_t>(dim),
                                            static_cast<std::size_t>(dim) + 3);
    std::vector<Vector<Scalar>> sequence;
    for (std::size_t k = 0; k < m; ++k) {
      sequence.push_back(random_gaussian_vector<Scalar>(rng, dim));
    }
    return {std::move(family), std::move(sequence)};
  }
  const auto r = static_cast<Index>(rng.uniform_index(1, static_cast<std::size_t>(dim - 1)));
  const std::size_t atoms = rng.uniform_index(2, 5);
  const AtomicMeasure measure = random_masses(rng, atoms);
  const auto top = random_raw_resolution<Scalar>(rng, r, atoms, 0.3, measure);
  const auto bottom = random_raw_resolution<Scalar>(rng, dim - r, atoms, 0.3, measure);
  const Operator<Scalar> u = random_unitary<Scalar>(rng, dim);
  std::vector<Operator<Scalar>> ops;
  for (std::size_t i = 0; i < atoms; ++i) {
    Operator<Scalar> block = Operator<Scalar>::Zero(dim, dim);
    block.topLeftCorner(r, r) = top.op(i);
    block.bottomRightCorner(dim - r, dim - r) = bottom.op(i);
    ops.push_back(u * block * u.adjoint());
  }
  OperatorFamily<Scalar> family(measure, std::vector<double>(atoms, 1.0), std::move(ops),
                                SumMode::raw);
  const std::size_t m =
      rng.uniform_index(static_cast<std::size_t>(r), static_cast<std::size_t>(r) + 3);
  std::vector<Vector<Scalar>> sequence;
  for (std::size_t k = 0; k < m; ++k) {
    sequence.push_back(u.leftCols(r) * random_gaussian_vector<Scalar>(rng, r));
  }
  return {std::move(family), std::move(sequence)};
}

template <typename Scalar>
PerturbationScenario<Scalar> random_perturbation(Rng& rng, Index dim, std::size_t atoms,
                                                 const VerifyOptions& options) {
  auto base = random_raw_resolution<Scalar>(rng, dim, atoms);
  const double kappa = rng.uniform(0.0, 0.4);
  const double lambda2 = rng.uniform(0.0, 0.1);
  const Operator<Scalar> k = random_psd<Scalar>(rng, dim, kappa);
  std::vector<Operator<Scalar>> g;
  for (std::size_t i = 0; i < base.size(); ++i) {
    g.push_back(scaled_gaussian<Scalar>(rng, dim) * base.op(i));
  }
  const double lambda = kappa + 0.05;
  const double c = self_adjoint_spectrum(resolution_gram(base)).front();
  const Operator<Scalar> id = Operator<Scalar>::Identity(dim, dim);

  auto build = [&](double eps) {
    std::vector<Operator<Scalar>> ops;
    std::vector<double> phi;
    for (std::size_t i = 0; i < base.size(); ++i) {
      ops.push_back((id - k) * base.op(i) - Scalar(eps) * g[i]);
      phi.push_back(base.weight(i) * eps * operator_norm(g[i]));
    }
    auto perturbed = base.with_operators(std::move(ops));
    auto params =
        PerturbationParams::make(kappa, lambda2, WeightFunction::table(std::move(phi)), base.atoms());
    return PerturbationScenario<Scalar>{base, std::move(perturbed), lambda, std::move(params), {}};
  };

  double eps = 0.05;
  for (int halving = 0; halving < 40; ++halving, eps *= 0.5) {
    auto scenario = build(eps);
    const double side = (1.0 - kappa) * std::sqrt(c) - scenario.params.phi_l2;
    if (side <= 0.0) {
      continue;
    }
    const auto op = build_perturbation_operator(scenario.base, scenario.perturbed, lambda, options);
    if (!op.violating_subset) {
      return scenario;
    }
  }
  return build(0.0);
}

template <typename Scalar>
PerturbationScenario<Scalar> random_composite_perturbation(Rng& rng, Index dim,
                                                           std::size_t reflections) {
  const Operator<Scalar> id = Operator<Scalar>::Identity(dim, dim);
  std::vector<Operator<Scalar>> ops{id};
  for (std::size_t j = 0; j < reflections; ++j) {
    const Operator<Scalar> u = reflection<Scalar>(rng, dim);
    ops.push_back(u);
    ops.push_back(-u);
  }
  const std::size_t n = ops.size();
  const AtomicMeasure measure = random_masses(rng, n);
  OperatorFamily<Scalar> base(measure, std::vector<double>(n, 1.0), std::move(ops), SumMode::raw);

  const double kappa = rng.uniform(0.05, 0.3);
  const double lambda1 = rng.uniform(0.0, 0.1);
  const double lambda2 = rng.uniform(0.0, 0.1);
  const Operator<Scalar> k = random_psd<Scalar>(rng, dim, kappa);
  std::vector<Operator<Scalar>> perturbed_ops;
  for (const auto& t : base.operators()) {
    perturbed_ops.push_back((id - k) * t);
  }
  auto perturbed = base.with_operators(std::move(perturbed_ops));
  auto params = PerturbationParams::make(lambda1, lambda2, WeightFunction::constant(kappa), measure);
  std::vector<std::string> checks{"perturbation", "perturbation_operator", "perturbed_resolution",
                                  "composite_perturbation"};
  return {std::move(base), std::move(perturbed), kappa, std::move(params), std::move(checks)};
}

template <typename Scalar>
PerturbationScenario<Scalar> scalar_perturbation(const OperatorFamily<Scalar>& base, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) {
    throw std::invalid_argument("scale must lie in (0, 1]");
  }
  std::vector<Operator<Scalar>> ops;
  for (const auto& t : base.operators()) {
    ops.push_back(Scalar(scale) * t);
  }
  auto params =
      PerturbationParams::make(1.0 - scale, 0.0, WeightFunction::constant(0.0), base.atoms());
  return {base, base.with_operators(std::move(ops)), 1.0 - scale, std::move(params), {}};
}

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> registry = {
      {"axes", "fusion_frame", "coordinate axes, unit weights and masses (--dim)"},
      {"mercedes", "fusion_frame", "three lines at 0, 60, 120 degrees in the plane"},
      {"random_frame", "fusion_frame", "random subspaces, weights and masses (--dim, --atoms)"},
      {"projection_family", "fusion_frame", "orthogonal decomposition with w mu = 1 (--dim)"},
      {"rotating_line", "continuous", "lines over [0, pi), constant weight (--n)"},
      {"quarter_turn_line", "continuous", "lines over [0, pi/2), constant weight (--n)"},
      {"orthonormal_basis", "resolution", "T_k f = <e_k, f> e_k, raw mode (--dim)"},
      {"scaled_axes", "resolution", "T_k = P_k / 2 with masses 2, weighted mode (--dim)"},
      {"random_resolution", "resolution", "perturbed projectors, raw mode (--dim, --atoms)"},
      {"random_weighted_resolution", "resolution",
       "perturbed projectors, weighted mode (--dim, --atoms)"},
      {"exact_projectors", "resolution", "two orthogonal decompositions, weighted mode (--dim)"},
      {"random_perturbation", "perturbation",
       "additive perturbation of a raw resolution (--dim, --atoms)"},
      {"composite_perturbation", "perturbation",
       "reflection resolution perturbed by (I - K) (--dim, --atoms)"},
      {"scalar_perturbation", "perturbation", "S_k = 0.9 T_k on the orthonormal basis (--dim)"},
  };
  return registry;
}

Instance make_scenario(const std::string& name, const ScenarioParams& params) {
  Rng rng(params.seed);
  const Index dim = params.dim;
  const std::size_t atoms = params.atoms;
  if (dim < 1 || atoms < 1) {
    throw std::invalid_argument("dim and atoms must be positive");
  }
  if (name == "axes") return axes_family<double>(dim);
  if (name == "mercedes") return mercedes_family<double>();
  if (name == "random_frame") return random_frame<double>(rng, dim, atoms);
  if (name == "projection_family") return random_projection_family<double>(rng, dim);
  if (name == "rotating_line" || name == "quarter_turn_line") {
    return scenario_spec(name, params.n, params.rule);
  }
  if (name == "orthonormal_basis") return from_orthonormal_basis<double>(dim);
  if (name == "scaled_axes") return scaled_axes_resolution<double>(dim, 0.5);
  if (name == "random_resolution") return random_raw_resolution<double>(rng, dim, atoms);
  if (name == "random_weighted_resolution") {
    return random_weighted_resolution<double>(rng, dim, atoms);
  }
  if (name == "exact_projectors") return exact_projector_resolution<double>(rng, dim, 2);
  if (name == "random_perturbation") return random_perturbation<double>(rng, dim, atoms);
  if (name == "composite_perturbation") {
    const std::size_t reflections = std::clamp<std::size_t>((atoms - 1) / 2, 1, 3);
    return random_composite_perturbation<double>(rng, dim, reflections);
  }
  if (name == "scalar_perturbation") {
    return scalar_perturbation<double>(from_orthonormal_basis<double>(dim), 0.9);
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

#define FRAMEKIT_INSTANTIATE_SCENARIOS(S)                                                         \
  template WeightedSubspaceFamily<S> axes_family<S>(Index, double, double);                        \
  template WeightedSubspaceFamily<S> line_family<S>(const AtomicMeasure&, std::vector<double>);    \
  template WeightedSubspaceFamily<S> mercedes_family<S>();                                         \
  template WeightedSubspaceFamily<S> random_frame<S>(Rng&, Index, std::size_t);                    \
  template std::vector<Subspace<S>> random_orthogonal_decomposition<S>(Rng&, Index, std::size_t);  \
  template WeightedSubspaceFamily<S> random_projection_family<S>(Rng&, Index);                     \
  template OperatorFamily<S> scaled_axes_resolution<S>(Index, double);                             \
  template OperatorFamily<S> exact_projector_resolution<S>(Rng&, Index, std::size_t);              \
  template OperatorFamily<S> random_weighted_resolution<S>(Rng&, Index, std::size_t, double);      \
  template OperatorFamily<S> random_raw_resolution<S>(Rng&, Index, std::size_t, double,            \
                                                      const std::optional<AtomicMeasure>&);        \
  template ConverseInstance<S> random_converse_instance<S>(Rng&, Index, std::size_t);              \
  template FrameSequenceInstance<S> random_frame_sequence_instance<S>(Rng&, Index, bool);          \
  template PerturbationScenario<S> random_perturbation<S>(Rng&, Index, std::size_t,                \
                                                          const VerifyOptions&);                   \
  template PerturbationScenario<S> random_composite_perturbation<S>(Rng&, Index, std::size_t);     \
  template PerturbationScenario<S> scalar_perturbation<S>(const OperatorFamily<S>&, double);

FRAMEKIT_INSTANTIATE_SCENARIOS(double)
FRAMEKIT_INSTANTIATE_SCENARIOS(Complex)

}  // namespace framekit
