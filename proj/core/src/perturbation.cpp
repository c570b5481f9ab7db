#include "framekit/perturbation.hpp"

#include "framekit/random.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace framekit {

namespace {

double l2_norm(const std::vector<double>& phi, const AtomicMeasure& atoms) {
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    acc += phi[i] * phi[i] * atoms.mass(i);
  }
  return std::sqrt(acc);
}

template <typename Scalar>
void require_aligned(const OperatorFamily<Scalar>& base, const OperatorFamily<Scalar>& perturbed) {
  if (base.size() != perturbed.size() || base.ambient_dim() != perturbed.ambient_dim() ||
      !(base.atoms() == perturbed.atoms()) || base.weights() != perturbed.weights()) {
    throw std::invalid_argument("base and perturbed families have different atoms or weights");
  }
}

// Canonical basis followed by `count` seeded random unit vectors.
template <typename Scalar>
std::vector<Vector<Scalar>> probe_set(Index dim, std::size_t count, std::uint64_t seed) {
  std::vector<Vector<Scalar>> probes;
  probes.reserve(static_cast<std::size_t>(dim) + count);
  for (Index k = 0; k < dim; ++k) {
    probes.push_back(canonical_vector<Scalar>(dim, k));
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    probes.push_back(random_unit_vector<Scalar>(rng, dim));
  }
  return probes;
}

std::string subset_string(const std::vector<std::size_t>& subset) {
  std::ostringstream out;
  out << '{';
  for (std::size_t k = 0; k < subset.size(); ++k) {
    out << (k ? "," : "") << subset[k];
  }
  out << '}';
  return out.str();
}

template <typename Scalar>
struct SubsetOutcome {
  double worst = -std::numeric_limits<double>::infinity();
  std::vector<std::size_t> subset;
  Vector<Scalar> vector;
};

// min eigenvalue of lambda^2 B*B - A*A, normalized by max(1, ||B||^2).
// Negative means some f violates ||A f|| <= lambda ||B f||.
template <typename Scalar>
double subset_violation(const Operator<Scalar>& diff, const Operator<Scalar>& sum, double lambda,
                        Vector<Scalar>* witness) {
  Operator<Scalar> g = Scalar(lambda * lambda) * (sum.adjoint() * sum) - diff.adjoint() * diff;
  g = (g + g.adjoint()) * Scalar(0.5);
  const auto eig = eigen_decompose(g);
  const double scale = std::max(1.0, std::pow(operator_norm(sum), 2));
  if (witness) {
    *witness = eig.vectors.col(0);
  }
  return -eig.values.front() / scale;
}

}  // namespace

PerturbationParams PerturbationParams::make(double lambda1, double lambda2,
                                            const WeightFunction& phi,
                                            const AtomicMeasure& atoms) {
  PerturbationParams p;
  p.lambda1 = lambda1;
  p.lambda2 = lambda2;
  p.phi = sample_weights(phi, atoms).values;
  p.phi_l2 = l2_norm(p.phi, atoms);
  p.phi_spec = phi.description();
  p.validate(atoms);
  return p;
}

PerturbationParams PerturbationParams::trivial(const AtomicMeasure& atoms) {
  return make(0.0, 0.0, WeightFunction::constant(0.0), atoms);
}

void PerturbationParams::validate(const AtomicMeasure& atoms) const {
  if (!(lambda1 >= 0.0 && lambda1 < 1.0) || !(lambda2 >= 0.0 && lambda2 < 1.0)) {
    throw std::invalid_argument("lambda1 and lambda2 must lie in [0, 1)");
  }
  if (phi.size() != atoms.size()) {
    throw std::invalid_argument("phi must have one value per atom");
  }
  for (double v : phi) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("phi must be finite and nonnegative");
    }
  }
  const double expected = l2_norm(phi, atoms);
  if (!std::isfinite(phi_l2) || std::abs(phi_l2 - expected) > 1e-12 * std::max(1.0, expected)) {
    throw std::invalid_argument("phi_l2 is inconsistent with phi and the atoms");
  }
}

template <typename Scalar>
VerificationReport check_perturbation(const OperatorFamily<Scalar>& base,
                                      const OperatorFamily<Scalar>& perturbed,
                                      const PerturbationParams& params,
                                      const VerifyOptions& options) {
  require_aligned(base, perturbed);
  params.validate(base.atoms());
  const auto& tol = options.tol;
  VerificationReport report("perturbation");
  report.set_tolerance("margin", tol.hypothesis);
  report.set_constant("lambda1", params.lambda1);
  report.set_constant("lambda2", params.lambda2);
  report.set_constant("phi_l2", params.phi_l2);

  const auto probes =
      probe_set<Scalar>(base.ambient_dim(), options.probes.perturbation_probes, options.probes.seed);
  report.set_constant("probe_count", static_cast<double>(probes.size()));

  double worst = -std::numeric_limits<double>::infinity();
  std::size_t worst_atom = 0;
  bool certified = true;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double w = base.weight(i);
    const Operator<Scalar> wt = Scalar(w) * base.op(i);
    const Operator<Scalar> ws = Scalar(w) * perturbed.op(i);
    const Operator<Scalar> diff = wt - ws;
    const double scale = std::max(1.0, operator_norm(wt) + operator_norm(ws));
    for (const auto& f : probes) {
      const double margin = (diff * f).norm() - params.lambda1 * (wt * f).norm() -
                            params.lambda2 * (ws * f).norm() - params.phi[i] * f.norm();
      if (margin / scale > worst) {
        worst = margin / scale;
        worst_atom = i;
      }
    }
    // ||diff - alpha wt|| <= phi_i with |alpha| <= lambda1 gives the
    // inequality for every f, whatever lambda2 is.
    Scalar alpha(0);
    const double tt = wt.squaredNorm();
    if (tt > 0.0) {
      alpha = (wt.adjoint() * diff).trace() / Scalar(tt);
      const double a = std::abs(alpha);
      if (a > params.lambda1) {
        alpha *= Scalar(params.lambda1 / a);
      }
    }
    const double rest = operator_norm<Scalar>(diff - alpha * wt);
    certified = certified && rest <= params.phi[i] + tol.hypothesis * scale;
  }
  report.set_constant("max_margin", worst);
  report.set_constant("worst_atom", static_cast<double>(worst_atom));
  report.set_constant("exact_certificate", certified ? 1.0 : 0.0);
  report.add_conclusion("pointwise inequality (probe-certified)", worst <= tol.hypothesis, worst,
                        tol.hypothesis);
  report.add_diagnostic("pointwise inequality (operator-norm certificate)", certified);
  report.add_note(certified ? "inequality certified for all f by an operator-norm bound"
                            : "inequality checked on probes only");
  return report;
}

template <typename Scalar>
PerturbationOperator<Scalar> build_perturbation_operator(const OperatorFamily<Scalar>& base,
                                                         const OperatorFamily<Scalar>& perturbed,
                                                         double lambda,
                                                         const VerifyOptions& options) {
  require_aligned(base, perturbed);
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1)");
  }
  const auto& tol = options.tol;
  const Index dim = base.ambient_dim();
  const std::size_t n = base.size();
  PerturbationOperator<Scalar> out;
  auto& report = out.report;
  report.set_mode("raw");
  report.set_constant("lambda", lambda);
  report.set_tolerance("subset", tol.hypothesis);
  report.set_tolerance("bound_slack", tol.bound_slack);
  report.set_tolerance("identity", tol.hypothesis);

  report.add_hypothesis("raw sum mode",
                        base.mode() == SumMode::raw && perturbed.mode() == SumMode::raw);
  const auto check = verify_resolution(base, options);
  report.add_hypothesis("base family is a resolution", check.passed());
  report.set_constant("C", check.bounds.lower);
  report.set_constant("D", check.bounds.upper);

  std::vector<Operator<Scalar>> diffs;
  diffs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    diffs.push_back(base.op(i) - perturbed.op(i));
  }

  SubsetOutcome<Scalar> worst;
  auto test = [&](const std::vector<std::size_t>& subset) {
    Operator<Scalar> diff = Operator<Scalar>::Zero(dim, dim);
    Operator<Scalar> sum = Operator<Scalar>::Zero(dim, dim);
    for (std::size_t i : subset) {
      diff += diffs[i];
      sum += base.op(i);
    }
    Vector<Scalar> witness;
    const double v = subset_violation<Scalar>(diff, sum, lambda, &witness);
    ++out.subsets_checked;
    if (v > worst.worst) {
      worst.worst = v;
      worst.subset = subset;
      worst.vector = witness;
    }
  };

  out.exhaustive = n <= options.probes.exhaustive_subset_limit;
  if (out.exhaustive) {
    const std::uint64_t limit = std::uint64_t{1} << n;
    std::vector<std::size_t> subset;
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
      subset.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1U) {
          subset.push_back(i);
        }
      }
      test(subset);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      test({i});
    }
    std::vector<std::size_t> prefix;
    for (std::size_t i = 0; i < n; ++i) {
      prefix.push_back(i);
      test(prefix);
    }
    Rng rng(options.probes.seed);
    std::vector<std::size_t> subset;
    for (std::size_t k = 0; k < options.probes.sampled_subsets; ++k) {
      subset.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() < 0.5) {
          subset.push_back(i);
        }
      }
      if (!subset.empty()) {
        test(subset);
      }
    }
  }
  report.set_constant("subsets_checked", static_cast<double>(out.subsets_checked));
  report.set_constant("subset_violation", worst.worst);
  const bool subsets_ok = worst.worst <= tol.hypothesis;
  report.add_hypothesis(out.exhaustive ? "subset inequality (exhaustive)"
                                       : "subset inequality (sampled)",
                        subsets_ok, worst.worst, tol.hypothesis);
  if (!subsets_ok) {
    out.violating_subset = worst.subset;
    out.violating_vector = worst.vector;
    report.add_note("subset inequality fails on " + subset_string(worst.subset) +
                    " along the lowest eigenvector");
  }

  out.s = identity_sum(perturbed.with_mode(SumMode::raw));
  const Operator<Scalar> id = Operator<Scalar>::Identity(dim, dim);
  const double gap = operator_norm<Scalar>(id - out.s);
  const double sigma_min = min_singular_value(out.s);
  report.set_constant("identity_gap", gap);
  report.set_constant("sigma_min_S", sigma_min);
  report.set_constant("sigma_max_S", operator_norm(out.s));
  report.add_conclusion("||id - S|| <= lambda", gap <= lambda + tol.bound_slack, gap - lambda,
                        tol.bound_slack);
  report.add_conclusion("sigma_min(S) >= 1 - lambda", sigma_min >= 1.0 - lambda - tol.bound_slack,
                        1.0 - lambda - sigma_min, tol.bound_slack);

  const Eigen::FullPivLU<Operator<Scalar>> lu(out.s);
  if (lu.isInvertible() && sigma_min > 0.0) {
    out.s_inverse = lu.inverse();
    Operator<Scalar> recon = Operator<Scalar>::Zero(dim, dim);
    for (std::size_t i = 0; i < n; ++i) {
      recon += perturbed.op(i) * *out.s_inverse;
    }
    const double residual = max_column_norm<Scalar>(id - recon);
    report.set_constant("reconstruction_residual", residual);
    report.add_conclusion("f = sum S_i S^-1 f on basis", residual <= tol.hypothesis, residual,
                          tol.hypothesis);
  } else {
    report.add_conclusion("S invertible", false, sigma_min);
  }
  return out;
}

template <typename Scalar>
OperatorFamily<Scalar> perturbed_family(const OperatorFamily<Scalar>& perturbed,
                                        const Operator<Scalar>& s_inverse) {
  std::vector<Operator<Scalar>> ops;
  ops.reserve(perturbed.size());
  for (const auto& s : perturbed.operators()) {
    ops.push_back(s * s_inverse);
  }
  return OperatorFamily<Scalar>(perturbed.atoms(), perturbed.weights(), std::move(ops),
                                SumMode::raw);
}

PredictedBounds predicted_perturbed_bounds(double c, double d, double a, double b,
                                           const PerturbationParams& params) {
  const double up = ((1.0 + params.lambda1) * std::sqrt(d) + params.phi_l2) / (1.0 - params.lambda2);
  const double lo = ((1.0 - params.lambda1) * std::sqrt(c) - params.phi_l2) / (1.0 + params.lambda2);
  return {lo > 0.0 ? lo * lo * a * a : 0.0, up * up * b * b};
}

template <typename Scalar>
VerificationReport verify_perturbed_resolution(const OperatorFamily<Scalar>& base,
                                               const OperatorFamily<Scalar>& perturbed,
                                               const PerturbationParams& params, double lambda,
                                               const VerifyOptions& options) {
  const auto& tol = options.tol;
  VerificationReport report("perturbed_resolution");
  report.set_mode("raw");
  report.set_tolerance("bound_slack", tol.bound_slack);
  report.set_tolerance("identity", tol.hypothesis);

  const auto pointwise = check_perturbation(base, perturbed, params, options);
  const auto op = build_perturbation_operator(base, perturbed, lambda, options);
  report.absorb(pointwise, "pointwise.");
  report.absorb(op.report, "operator.");

  const double c = op.report.constant("C");
  const double d = op.report.constant("D");
  report.set_constant("C", c);
  report.set_constant("D", d);
  report.set_constant("lambda", lambda);
  report.set_constant("lambda1", params.lambda1);
  report.set_constant("lambda2", params.lambda2);
  report.set_constant("phi_l2", params.phi_l2);

  for (const auto& h : op.report.hypotheses()) {
    report.add_hypothesis(h.name, h.passed, h.residual, h.tolerance);
  }
  for (const auto& h : pointwise.conclusions()) {
    report.add_hypothesis(h.name, h.passed, h.residual, h.tolerance);
  }
  const double side = (1.0 - params.lambda1) * std::sqrt(c) - params.phi_l2;
  report.set_constant("side_condition", side);
  report.add_hypothesis("(1 - lambda1) sqrt(C) - phi_l2 > 0", side > 0.0, side);

  if (!op.s_inverse) {
    report.add_conclusion("S invertible", false);
    return report;
  }
  const auto sv = singular_values(op.s);
  const double a = 1.0 / sv.front();
  const double b = 1.0 / sv.back();
  const auto predicted = predicted_perturbed_bounds(c, d, a, b, params);
  report.set_constant("A", a);
  report.set_constant("B", b);
  report.set_constant("predicted_lower", predicted.lower);
  report.set_constant("predicted_upper", predicted.upper);

  const auto family = perturbed_family(perturbed, *op.s_inverse);
  const auto check = verify_resolution(family, options);
  report.absorb(check.report, "perturbed.");
  const double c2 = check.bounds.lower;
  const double d2 = check.bounds.upper;
  report.set_constant("C_perturbed", c2);
  report.set_constant("D_perturbed", d2);

  report.add_conclusion("C' >= predicted lower", c2 >= predicted.lower - tol.bound_slack,
                        predicted.lower - c2, tol.bound_slack);
  report.add_conclusion("D' <= predicted upper", d2 <= predicted.upper + tol.bound_slack,
                        d2 - predicted.upper, tol.bound_slack);
  const double residual = check.report.constant("identity_residual");
  report.add_conclusion("norm sandwich of perturbed family (C' > 0)",
                        d2 > 0.0 && c2 > tol.frame * d2, c2, tol.frame * d2);
  report.add_conclusion("identity sum of perturbed family", residual <= tol.hypothesis, residual,
                        tol.hypothesis);
  report.add_note("norm sandwich and identity sum of the perturbed family are reported separately");
  return report;
}

template <typename Scalar>
VerificationReport verify_composite_perturbation(const OperatorFamily<Scalar>& base,
                                                 const OperatorFamily<Scalar>& perturbed,
                                                 const PerturbationParams& params, double lambda,
                                                 const VerifyOptions& options) {
  require_aligned(base, perturbed);
  params.validate(base.atoms());
  const auto& tol = options.tol;
  const Index dim = base.ambient_dim();
  VerificationReport report("composite_perturbation");
  report.set_mode("raw");
  report.set_tolerance("margin", tol.hypothesis);
  report.set_tolerance("bound_slack", tol.bound_slack);
  report.set_constant("lambda", lambda);
  report.set_constant("lambda1", params.lambda1);
  report.set_constant("lambda2", params.lambda2);
  report.set_constant("phi_l2", params.phi_l2);
  report.add_note("the unnamed Bessel constant K is not used; D of the base family stands in");

  const auto op = build_perturbation_operator(base, perturbed, lambda, options);
  report.absorb(op.report, "operator.");
  for (const auto& h : op.report.hypotheses()) {
    report.add_hypothesis(h.name, h.passed, h.residual, h.tolerance);
  }
  const double d = op.report.constant("D");
  const double e = base.sup_norm();
  report.set_constant("D", d);
  report.set_constant("E", e);

  const Operator<Scalar> ms = resolution_gram(perturbed);
  const double ms_max = self_adjoint_spectrum(ms).back();
  report.set_constant("lambda_max_perturbed_gram", ms_max);
  report.add_hypothesis("sum w^2 mu ||S_i f||^2 <= D ||f||^2", ms_max <= d + tol.bound_slack,
                        ms_max - d, tol.bound_slack);

  const auto probes =
      probe_set<Scalar>(dim, options.probes.perturbation_probes, options.probes.seed);
  double worst = -std::numeric_limits<double>::infinity();
  double remark = -std::numeric_limits<double>::infinity();
  double max_weight = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double w = base.weight(i);
    max_weight = std::max(max_weight, w);
    weight_sum += w * w * base.mass(i);
    const Operator<Scalar> ts = base.op(i) * perturbed.op(i);
    const double scale = std::max(1.0, w + w * base.norms()[i] + w * w * operator_norm(ts));
    for (const auto& f : probes) {
      const Vector<Scalar> wwts = Scalar(w * w) * (ts * f);
      const double lhs = (Scalar(w) * f - wwts).norm();
      const double rhs = params.lambda1 * w * (base.op(i) * f).norm() +
                         params.lambda2 * wwts.norm() + params.phi[i] * f.norm();
      worst = std::max(worst, (lhs - rhs) / scale);
      const double sf = (perturbed.op(i) * f).norm();
      remark = std::max(remark, (ts * f).norm() - sf * e);
    }
  }
  report.set_constant("max_margin", worst);
  report.add_hypothesis("composite pointwise inequality (probe-certified)",
                        worst <= tol.hypothesis, worst, tol.hypothesis);
  report.add_diagnostic("||T_i S_i f|| <= E ||S_i f|| on probes",
                        remark <= tol.hypothesis * std::max(1.0, e), remark);

  const double root = std::sqrt(weight_sum);
  const double numerator = root - params.lambda1 * std::sqrt(d) - params.phi_l2;
  report.set_constant("sqrt_weight_mass", root);
  report.set_constant("side_condition", numerator);
  report.set_constant("max_weight", max_weight);
  report.add_hypothesis("(sum w^2 mu)^{1/2} - lambda1 sqrt(D) - phi_l2 > 0", numerator > 0.0,
                        numerator);
  if (max_weight > 1.0) {
    report.add_note("some weight exceeds 1; the lower-bound chain uses w^4 <= w^2");
  }

  const double asserted = e > 0.0 ? numerator / (e * (1.0 + std::sqrt(params.lambda2))) : 0.0;
  const double tighter = e > 0.0 ? numerator / (e * (1.0 + params.lambda2)) : 0.0;
  report.set_constant("asserted_lower", asserted);
  report.set_constant("proof_lower", tighter);

  Rng rng(options.probes.seed ^ 0x9e3779b97f4a7c15ULL);
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < options.probes.quadratic_probes; ++k) {
    const Vector<Scalar> f = random_unit_vector<Scalar>(rng, dim);
    gap = std::min(gap, std::sqrt(resolution_quadratic_form(perturbed, f)));
  }
  report.set_constant("min_probe_norm", gap);
  report.add_conclusion("lower bound with E (1 + sqrt(lambda2)) on probes",
                        gap >= asserted - tol.bound_slack, asserted - gap, tol.bound_slack);
  report.add_diagnostic("lower bound with E (1 + lambda2) on probes",
                        gap >= tighter - tol.bound_slack, tighter - gap, tol.bound_slack);

  if (!op.s_inverse) {
    report.add_conclusion("S invertible", false);
    return report;
  }
  const auto check = verify_resolution(perturbed_family(perturbed, *op.s_inverse), options);
  report.absorb(check.report, "perturbed.");
  report.set_constant("C_perturbed", check.bounds.lower);
  report.set_constant("D_perturbed", check.bounds.upper);
  report.add_conclusion("perturbed family is a resolution", check.passed());
  return report;
}

#define FRAMEKIT_INSTANTIATE_PERTURBATION(S)                                                      \
  template VerificationReport check_perturbation<S>(const OperatorFamily<S>&,                      \
                                                    const OperatorFamily<S>&,                      \
                                                    const PerturbationParams&,                     \
                                                    const VerifyOptions&);                         \
  template PerturbationOperator<S> build_perturbation_operator<S>(                                 \
      const OperatorFamily<S>&, const OperatorFamily<S>&, double, const VerifyOptions&);           \
  template OperatorFamily<S> perturbed_family<S>(const OperatorFamily<S>&, const Operator<S>&);    \
  template VerificationReport verify_perturbed_resolution<S>(                                      \
      const OperatorFamily<S>&, const OperatorFamily<S>&, const PerturbationParams&, double,       \
      const VerifyOptions&);                                                                       \
  template VerificationReport verify_composite_perturbation<S>(                                    \
      const OperatorFamily<S>&, const OperatorFamily<S>&, const PerturbationParams&, double,       \
      const VerifyOptions&);

FRAMEKIT_INSTANTIATE_PERTURBATION(double)
FRAMEKIT_INSTANTIATE_PERTURBATION(Complex)

}  // namespace framekit
