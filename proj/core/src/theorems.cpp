#include "framekit/theorems.hpp"

#include "framekit/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace framekit {

namespace {

struct Extremes {
  double min = 0.0;
  double max = 0.0;
};

template <typename Scalar>
Extremes extremes(const Operator<Scalar>& a) {
  if (a.rows() == 0) {
    return {};
  }
  const auto s = self_adjoint_spectrum(a);
  return {s.front(), s.back()};
}

template <typename Scalar>
bool same_atoms(const WeightedSubspaceFamily<Scalar>& frame, const OperatorFamily<Scalar>& family) {
  return frame.size() == family.size() && frame.ambient_dim() == family.ambient_dim() &&
         frame.atoms() == family.atoms() && frame.weights() == family.weights();
}

template <typename Scalar>
void record_resolution(VerificationReport& report, const ResolutionCheck& check,
                       const std::string& label) {
  const double residual = check.report.constant("identity_residual");
  report.add_hypothesis(label, check.passed(), residual, check.report.tolerances().at("identity"));
  report.set_constant("C", check.bounds.lower);
  report.set_constant("D", check.bounds.upper);
  report.set_constant("E", check.sup_norm);
}

}  // namespace

template <typename Scalar>
WeightedSubspaceFamily<Scalar> induced_family(const OperatorFamily<Scalar>& family, double rank_tol) {
  std::vector<Subspace<Scalar>> subspaces;
  subspaces.reserve(family.size());
  for (const auto& t : family.operators()) {
    subspaces.push_back(column_space(t, rank_tol));
  }
  return WeightedSubspaceFamily<Scalar>(family.atoms(), family.weights(), std::move(subspaces));
}

template <typename Scalar>
VerificationReport verify_induced_frame(const OperatorFamily<Scalar>& family,
                                        const VerifyOptions& options) {
  if (family.mode() != SumMode::weighted) {
    throw std::invalid_argument("induced frame check needs a weighted-mode family");
  }
  const auto& tol = options.tol;
  VerificationReport report("induced_frame");
  report.set_mode("weighted");
  report.set_tolerance("identity", tol.hypothesis);
  report.set_tolerance("bound_slack", tol.bound_slack);

  const double identity = identity_residual(family);
  report.add_hypothesis("f = sum w^2 mu T f", identity <= tol.hypothesis, identity, tol.hypothesis);
  report.set_constant("identity_residual", identity);

  const Extremes m = extremes(resolution_gram(family));
  const double d = m.max;
  report.set_constant("D", d);
  report.add_hypothesis("D finite and positive", std::isfinite(d) && d > 0.0, d);

  bool any_range = false;
  for (const auto& t : family.operators()) {
    any_range = any_range || numerical_rank(t, tol.rank) > 0;
  }
  if (!any_range) {
    report.add_hypothesis("some T_i nonzero", false);
    report.add_conclusion("induced family is a frame", false);
    return report;
  }

  const auto frame = induced_family(family, tol.rank);
  const Index dim = family.ambient_dim();
  Operator<Scalar> gap_gram = Operator<Scalar>::Zero(dim, dim);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Operator<Scalar> gap = frame.subspace(i).projector() - family.op(i);
    gap_gram += Scalar(family.weighted_mass(i)) * (gap.adjoint() * gap);
  }
  gap_gram = (gap_gram + gap_gram.adjoint()) * Scalar(0.5);
  const double r = std::max(0.0, extremes(gap_gram).max);
  report.set_constant("R", r);
  report.add_hypothesis("R finite", std::isfinite(r), r);

  const FrameBounds bounds = frame_bounds(frame);
  report.set_constant("A", bounds.lower);
  report.set_constant("B", bounds.upper);
  const double predicted_upper = d > 0.0 ? d * std::pow(1.0 + std::sqrt(r / d), 2) : 0.0;
  const double predicted_lower = d > 0.0 ? 1.0 / d : 0.0;
  report.set_constant("predicted_upper", predicted_upper);
  report.set_constant("predicted_lower", predicted_lower);

  report.add_conclusion("induced family is a frame (A > 0)", bounds.is_frame(tol.frame),
                        bounds.lower, tol.frame * bounds.upper);
  report.add_conclusion("B <= D (1 + sqrt(R/D))^2", bounds.upper <= predicted_upper + tol.bound_slack,
                        bounds.upper - predicted_upper, tol.bound_slack);
  report.add_conclusion("A >= 1/D", bounds.lower >= predicted_lower - tol.bound_slack,
                        predicted_lower - bounds.lower, tol.bound_slack);
  report.add_note("R is computed after W_i is built from T_i and recorded as a constant");
  return report;
}

template <typename Scalar>
VerificationReport verify_converse_bounds(const WeightedSubspaceFamily<Scalar>& frame,
                                          const OperatorFamily<Scalar>& family,
                                          const VerifyOptions& options) {
  if (!same_atoms(frame, family)) {
    throw std::invalid_argument("fusion frame and operator family have different atoms or weights");
  }
  if (family.mode() != SumMode::weighted) {
    throw std::invalid_argument("converse bounds check needs a weighted-mode family");
  }
  const auto& tol = options.tol;
  VerificationReport report("converse_bounds");
  report.set_mode("weighted");
  report.set_tolerance("structure", tol.structure);
  report.set_tolerance("identity", tol.hypothesis);
  report.set_tolerance("bound_slack", tol.bound_slack);

  const FrameBounds fb = frame_bounds(frame);
  const double d = fb.upper;
  report.set_constant("D", d);
  report.add_hypothesis("Bessel with bound D", std::isfinite(d) && d > 0.0, d);

  double right_gap = 0.0;
  double range_gap = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Operator<Scalar> p = frame.subspace(i).projector();
    const auto& t = family.op(i);
    const double scale = std::max(1.0, family.norms()[i]);
    right_gap = std::max(right_gap, operator_norm<Scalar>(t * p - t) / scale);
    range_gap = std::max(range_gap, operator_norm<Scalar>(p * t - t) / scale);
  }
  report.add_hypothesis("T_i P_i = T_i", right_gap <= tol.structure, right_gap, tol.structure);
  report.add_hypothesis("T_i maps into W_i", range_gap <= tol.structure, range_gap, tol.structure);

  const double identity = identity_residual(family);
  report.set_constant("identity_residual", identity);
  report.add_hypothesis("f = sum w^2 mu T f", identity <= tol.hypothesis, identity, tol.hypothesis);

  const Extremes m = extremes(resolution_gram(family));
  const double e = family.sup_norm();
  const double lower = d > 0.0 ? 1.0 / d : 0.0;
  report.set_constant("lambda_min_M", m.min);
  report.set_constant("lambda_max_M", m.max);
  report.set_constant("E", e);
  report.set_constant("predicted_lower", lower);
  report.set_constant("DE", d * e);
  report.set_constant("DE2", d * e * e);

  report.add_conclusion("1/D <= lambda_min(M)", m.min >= lower - tol.bound_slack, lower - m.min,
                        tol.bound_slack);
  report.add_conclusion("lambda_max(M) <= D E^2", m.max <= d * e * e + tol.bound_slack,
                        m.max - d * e * e, tol.bound_slack);
  const bool literal = m.max <= d * e + tol.bound_slack;
  report.add_diagnostic("lambda_max(M) <= D E (literal form)", literal, m.max - d * e,
                        tol.bound_slack);
  report.add_note("upper bound asserted with E^2; the D E form holds only when E <= 1");
  if (!literal) {
    report.add_note("literal D E upper bound fails on this instance");
  }
  return report;
}

template <typename Scalar>
VerificationReport verify_projection_family(const WeightedSubspaceFamily<Scalar>& frame,
                                            const VerifyOptions& options) {
  const auto& tol = options.tol;
  VerificationReport report("projection_family");
  report.set_tolerance("identity", tol.hypothesis);
  report.set_tolerance("bound_slack", tol.bound_slack);

  const Index dim = frame.ambient_dim();
  Operator<Scalar> gram = Operator<Scalar>::Zero(dim, dim);
  Operator<Scalar> first_power = Operator<Scalar>::Zero(dim, dim);
  double sup_weight = 0.0;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (!frame.active(i)) {
      continue;
    }
    const Operator<Scalar> p = frame.subspace(i).projector();
    gram += Scalar(frame.mass(i)) * p;
    first_power += Scalar(frame.weight(i) * frame.mass(i)) * p;
    sup_weight = std::max(sup_weight, frame.weight(i));
  }
  gram = (gram + gram.adjoint()) * Scalar(0.5);
  const double gram_max = extremes(gram).max;
  const double c = gram_max > 0.0 ? 1.0 / gram_max : 0.0;
  const double identity =
      max_column_norm<Scalar>(Operator<Scalar>::Identity(dim, dim) - first_power);

  report.set_constant("C", c);
  report.set_constant("sup_weight", sup_weight);
  report.set_constant("identity_residual", identity);
  report.add_hypothesis("weight bounded", std::isfinite(sup_weight), sup_weight);
  report.add_hypothesis("sum mu ||P f||^2 <= ||f||^2 / C with C > 0", c > 0.0, c);
  report.add_hypothesis("f = sum w mu P f", identity <= tol.hypothesis, identity, tol.hypothesis);

  const FrameBounds bounds = frame_bounds(frame);
  report.set_constant("A", bounds.lower);
  report.set_constant("B", bounds.upper);
  const double slack = tol.bound_slack;
  report.add_conclusion("A >= C", bounds.lower >= c * (1.0 - slack), c - bounds.lower, c * slack);

  Rng rng(options.probes.seed);
  double worst = 0.0;
  for (std::size_t k = 0; k < options.probes.quadratic_probes; ++k) {
    const Vector<Scalar> f = random_unit_vector<Scalar>(rng, dim);
    worst = std::max(worst, c - frame_quadratic_form(frame, f));
  }
  report.add_conclusion("C ||f||^2 <= sum w^2 mu ||P f||^2 on probes",
                        worst <= slack * std::max(1.0, c), worst, slack * std::max(1.0, c));
  return report;
}

template <typename Scalar>
VerificationReport verify_orthogonal_reconstruction(const WeightedSubspaceFamily<Scalar>& frame,
                                                    const VerifyOptions& options) {
  const auto& tol = options.tol;
  VerificationReport report("orthogonal_reconstruction");
  report.set_tolerance("structure", tol.structure);
  report.set_tolerance("identity", tol.hypothesis);

  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (frame.active(i) && frame.subspace(i).rank() > 0) {
      active.push_back(i);
    }
  }
  double overlap = 0.0;
  for (std::size_t a = 0; a < active.size(); ++a) {
    for (std::size_t b = a + 1; b < active.size(); ++b) {
      const auto& qa = frame.subspace(active[a]).basis();
      const auto& qb = frame.subspace(active[b]).basis();
      overlap = std::max(overlap, operator_norm<Scalar>(qa.adjoint() * qb));
    }
  }
  report.set_constant("max_pairwise_overlap", overlap);
  report.add_hypothesis("subspaces pairwise orthogonal", overlap <= tol.structure, overlap,
                        tol.structure);

  const FrameBounds bounds = frame_bounds(frame);
  report.set_constant("A", bounds.lower);
  report.set_constant("B", bounds.upper);
  report.add_hypothesis("family is a frame (A > 0)", bounds.is_frame(tol.frame), bounds.lower,
                        tol.frame * bounds.upper);

  const Index dim = frame.ambient_dim();
  Operator<Scalar> sum = Operator<Scalar>::Zero(dim, dim);
  for (std::size_t i : active) {
    sum += frame.subspace(i).projector();
  }
  const Operator<Scalar> gap = Operator<Scalar>::Identity(dim, dim) - sum;
  const double residual = max_column_norm<Scalar>(gap);
  Index worst = 0;
  gap.colwise().norm().maxCoeff(&worst);
  report.set_constant("decomposition_residual", residual);
  report.set_constant("worst_basis_index", static_cast<double>(worst));
  report.add_conclusion("f = sum P f on basis", residual <= tol.hypothesis, residual,
                        tol.hypothesis);

  const VerificationReport converse = verify_projection_family(frame, options);
  const bool converse_ok = !converse.hypotheses_hold() || converse.conclusion_checked();
  report.add_conclusion("converse via projection-family criterion", converse_ok);
  report.set_constant("converse_applicable", converse.hypotheses_hold() ? 1.0 : 0.0);
  return report;
}

template <typename Scalar>
VerificationReport verify_induced_frame_sequence(const OperatorFamily<Scalar>& family,
                                                 std::span<const Vector<Scalar>> frame_sequence,
                                                 const VerifyOptions& options) {
  if (frame_sequence.empty()) {
    throw std::invalid_argument("frame sequence must be nonempty");
  }
  const Index dim = family.ambient_dim();
  for (const auto& f : frame_sequence) {
    if (f.size() != dim) {
      throw DimensionError("frame sequence vector has the wrong dimension");
    }
  }
  const auto& tol = options.tol;
  VerificationReport report("induced_frame_sequence");
  report.set_mode(std::string(to_string(family.mode())));
  report.set_tolerance("structure", tol.structure);
  report.set_tolerance("bound_slack", tol.bound_slack);

  report.add_hypothesis("raw sum mode", family.mode() == SumMode::raw);
  const auto check = verify_resolution(family, options);
  record_resolution<Scalar>(report, check, "family is a resolution");
  const double c = check.bounds.lower;
  const double d = check.bounds.upper;

  const Subspace<Scalar> span = orthonormal_basis(frame_sequence, dim, tol.rank);
  const Operator<Scalar>& q = span.basis();
  report.set_constant("span_dim", static_cast<double>(span.rank()));
  if (span.rank() == 0) {
    report.add_hypothesis("frame sequence spans a nonzero subspace", false);
    report.add_conclusion("induced bounds within [A_s C, B_s D]", false);
    return report;
  }

  Operator<Scalar> seq_op = Operator<Scalar>::Zero(dim, dim);
  for (const auto& f : frame_sequence) {
    seq_op += f * f.adjoint();
  }
  const Operator<Scalar> seq_on_span = q.adjoint() * seq_op * q;
  const Extremes seq = extremes<Scalar>((seq_on_span + seq_on_span.adjoint()) * Scalar(0.5));
  report.set_constant("A_s", seq.min);
  report.set_constant("B_s", seq.max);
  report.add_hypothesis("frame sequence bounds positive", seq.min > tol.frame * seq.max, seq.min);

  const Operator<Scalar> off_span = Operator<Scalar>::Identity(dim, dim) - span.projector();
  double leak = 0.0;
  Operator<Scalar> compressed = Operator<Scalar>::Zero(dim, dim);
  Operator<Scalar> induced = Operator<Scalar>::Zero(dim, dim);
  for (std::size_t j = 0; j < family.size(); ++j) {
    const auto& t = family.op(j);
    leak = std::max(leak, operator_norm<Scalar>(off_span * t * q) / std::max(1.0, family.norms()[j]));
    const Operator<Scalar> pt = span.projector() * t;
    compressed += Scalar(family.weighted_mass(j)) * (pt.adjoint() * pt);
    const double scale = family.weight(j) * std::sqrt(family.mass(j));
    for (const auto& f : frame_sequence) {
      const Vector<Scalar> g = Scalar(scale) * (t.adjoint() * f);
      induced += g * g.adjoint();
    }
  }
  report.set_constant("span_leakage", leak);
  report.add_hypothesis("span invariant under every T_j", leak <= tol.structure, leak,
                        tol.structure);

  const Operator<Scalar> on_span = q.adjoint() * induced * q;
  const Extremes ind = extremes<Scalar>((on_span + on_span.adjoint()) * Scalar(0.5));
  const Operator<Scalar> c_span_op = q.adjoint() * compressed * q;
  const double c_span = extremes<Scalar>((c_span_op + c_span_op.adjoint()) * Scalar(0.5)).min;
  report.set_constant("induced_lower", ind.min);
  report.set_constant("induced_upper", ind.max);
  report.set_constant("predicted_lower", seq.min * c);
  report.set_constant("predicted_upper", seq.max * d);
  report.set_constant("C_on_span", c_span);

  report.add_conclusion("induced lower >= A_s C", ind.min >= seq.min * c - tol.bound_slack,
                        seq.min * c - ind.min, tol.bound_slack);
  report.add_conclusion("induced upper <= B_s D", ind.max <= seq.max * d + tol.bound_slack,
                        ind.max - seq.max * d, tol.bound_slack);
  report.add_diagnostic("induced lower >= A_s C_on_span", ind.min >= seq.min * c_span - tol.bound_slack,
                        seq.min * c_span - ind.min, tol.bound_slack);
  return report;
}

template <typename Scalar>
CountableReconstruction<Scalar> countable_reconstruction(const OperatorFamily<Scalar>& family,
                                                         const Vector<Scalar>& f,
                                                         const VerifyOptions& options) {
  const Index dim = family.ambient_dim();
  if (f.size() != dim) {
    throw DimensionError("vector dimension differs from the family's ambient dimension");
  }
  const auto& tol = options.tol;
  CountableReconstruction<Scalar> out;
  auto& report = out.report;
  report.set_mode(std::string(to_string(family.mode())));
  report.set_tolerance("reconstruction", 1e-8);
  report.set_tolerance("agreement", tol.hypothesis);

  report.add_hypothesis("raw sum mode", family.mode() == SumMode::raw);
  const auto check = verify_resolution(family, options);
  record_resolution<Scalar>(report, check, "family is a resolution");

  for (Index k = 0; k < dim; ++k) {
    if (f(k) != Scalar(0)) {
      out.coordinates.push_back(k);
    }
  }
  const auto hf = static_cast<Index>(out.coordinates.size());
  report.set_constant("hf_dim", static_cast<double>(hf));
  out.inverse_first = Vector<Scalar>::Zero(dim);
  out.inverse_last = Vector<Scalar>::Zero(dim);
  if (hf == 0) {
    report.set_constant("index_set_size", 0.0);
    report.add_conclusion("f = 0 reconstructs trivially", true);
    return out;
  }

  Operator<Scalar> embed = Operator<Scalar>::Zero(dim, hf);
  for (Index j = 0; j < hf; ++j) {
    embed(out.coordinates[static_cast<std::size_t>(j)], j) = Scalar(1);
  }
  std::vector<bool> in_set(family.size(), false);
  for (Index k : out.coordinates) {
    for (std::size_t i : support(family, canonical_vector<Scalar>(dim, k), 1e-12)) {
      in_set[i] = true;
    }
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (in_set[i]) {
      out.index_set.push_back(i);
    }
  }
  report.set_constant("index_set_size", static_cast<double>(out.index_set.size()));

  // Compressions of w^2 mu T_i* T_i to H_f.
  std::vector<Operator<Scalar>> pieces;
  Operator<Scalar> s = Operator<Scalar>::Zero(hf, hf);
  Operator<Scalar> full = Operator<Scalar>::Zero(dim, dim);
  for (std::size_t i : out.index_set) {
    const Operator<Scalar> tt = family.op(i).adjoint() * family.op(i);
    full += Scalar(family.weighted_mass(i)) * tt;
    pieces.push_back(embed.adjoint() * tt * embed);
    s += Scalar(family.weighted_mass(i)) * pieces.back();
  }
  s = (s + s.adjoint()) * Scalar(0.5);
  const Operator<Scalar> off = Operator<Scalar>::Identity(dim, dim) - embed * embed.adjoint();
  report.set_constant("hf_leakage", operator_norm<Scalar>(off * full * embed));

  const Extremes se = s.rows() > 0 ? extremes(s) : Extremes{};
  report.set_constant("lambda_min_S", se.min);
  report.set_constant("lambda_max_S", se.max);
  const bool invertible = se.max > 0.0 && se.min > tol.frame * se.max;
  report.add_hypothesis("S invertible on H_f", invertible, se.min, tol.frame * se.max);
  if (!invertible) {
    report.add_conclusion("reconstruction", false);
    return out;
  }

  const Vector<Scalar> fj = embed.adjoint() * f;
  const Vector<Scalar> s_inv_f = solve_positive(s, fj, 0.0);
  Vector<Scalar> first = Vector<Scalar>::Zero(hf);
  Vector<Scalar> last = Vector<Scalar>::Zero(hf);
  for (std::size_t n = 0; n < out.index_set.size(); ++n) {
    const Scalar c(family.weighted_mass(out.index_set[n]));
    first += c * solve_positive(s, Vector<Scalar>(pieces[n] * fj), 0.0);
    last += c * (pieces[n] * s_inv_f);
  }
  out.inverse_first = embed * first;
  out.inverse_last = embed * last;

  const double fn = f.norm();
  const double err_first = (out.inverse_first - f).norm() / fn;
  const double err_last = (out.inverse_last - f).norm() / fn;
  const double agreement = (out.inverse_first - out.inverse_last).norm() / fn;
  report.set_constant("relative_error_inverse_first", err_first);
  report.set_constant("relative_error_inverse_last", err_last);
  report.set_constant("ordering_agreement", agreement);
  report.add_conclusion("f = sum w^2 mu S^-1 T*T f", err_first <= 1e-8, err_first, 1e-8);
  report.add_conclusion("f = sum w^2 mu T*T S^-1 f", err_last <= 1e-8, err_last, 1e-8);
  report.add_conclusion("orderings agree", agreement <= tol.hypothesis, agreement, tol.hypothesis);
  return out;
}

#define FRAMEKIT_INSTANTIATE_THEOREMS(S)                                                          \
  template WeightedSubspaceFamily<S> induced_family<S>(const OperatorFamily<S>&, double);          \
  template VerificationReport verify_induced_frame<S>(const OperatorFamily<S>&,                    \
                                                      const VerifyOptions&);                       \
  template VerificationReport verify_converse_bounds<S>(const WeightedSubspaceFamily<S>&,          \
                                                        const OperatorFamily<S>&,                  \
                                                        const VerifyOptions&);                     \
  template VerificationReport verify_projection_family<S>(const WeightedSubspaceFamily<S>&,        \
                                                          const VerifyOptions&);                   \
  template VerificationReport verify_orthogonal_reconstruction<S>(                                 \
      const WeightedSubspaceFamily<S>&, const VerifyOptions&);                                     \
  template VerificationReport verify_induced_frame_sequence<S>(                                    \
      const OperatorFamily<S>&, std::span<const Vector<S>>, const VerifyOptions&);                 \
  template CountableReconstruction<S> countable_reconstruction<S>(                                 \
      const OperatorFamily<S>&, const Vector<S>&, const VerifyOptions&);

FRAMEKIT_INSTANTIATE_THEOREMS(double)
FRAMEKIT_INSTANTIATE_THEOREMS(Complex)

}  // namespace framekit
