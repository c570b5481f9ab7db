#include "framekit/resolution.hpp"

#include "framekit/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace framekit {

std::string_view to_string(SumMode mode) {
  return mode == SumMode::raw ? "raw" : "weighted";
}

SumMode parse_sum_mode(std::string_view name) {
  if (name == "raw") return SumMode::raw;
  if (name == "weighted") return SumMode::weighted;
  throw std::invalid_argument("unknown sum mode: " + std::string(name));
}

template <typename Scalar>
OperatorFamily<Scalar>::OperatorFamily(AtomicMeasure atoms, std::vector<double> weights,
                                       std::vector<Operator<Scalar>> operators, SumMode mode)
    : atoms_(std::move(atoms)),
      weights_(std::move(weights)),
      operators_(std::move(operators)),
      mode_(mode) {
  if (weights_.size() != atoms_.size() || operators_.size() != atoms_.size()) {
    throw std::invalid_argument("atoms, weights and operators must have equal length");
  }
  ambient_dim_ = operators_.front().rows();
  if (ambient_dim_ <= 0) {
    throw DimensionError("ambient dimension must be positive");
  }
  norms_.reserve(operators_.size());
  for (std::size_t i = 0; i < operators_.size(); ++i) {
    const auto& t = operators_[i];
    if (t.rows() != ambient_dim_ || t.cols() != ambient_dim_) {
      throw DimensionError("operators must all be square of the same dimension");
    }
    if (!t.allFinite()) {
      throw std::invalid_argument("operator entries must be finite");
    }
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw std::invalid_argument("weights must be finite and nonnegative");
    }
    norms_.push_back(operator_norm(t));
  }
  sup_norm_ = *std::max_element(norms_.begin(), norms_.end());
}

template <typename Scalar>
OperatorFamily<Scalar> OperatorFamily<Scalar>::with_mode(SumMode mode) const {
  return OperatorFamily(atoms_, weights_, operators_, mode);
}

template <typename Scalar>
OperatorFamily<Scalar> OperatorFamily<Scalar>::with_operators(
    std::vector<Operator<Scalar>> operators) const {
  return OperatorFamily(atoms_, weights_, std::move(operators), mode_);
}

template <typename Scalar>
Operator<Scalar> resolution_gram(const OperatorFamily<Scalar>& family) {
  const Index d = family.ambient_dim();
  Operator<Scalar> m = Operator<Scalar>::Zero(d, d);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double c = family.weighted_mass(i);
    if (c == 0.0) {
      continue;
    }
    m += Scalar(c) * (family.op(i).adjoint() * family.op(i));
  }
  return (m + m.adjoint()) * Scalar(0.5);
}

template <typename Scalar>
Operator<Scalar> identity_sum(const OperatorFamily<Scalar>& family) {
  const Index d = family.ambient_dim();
  Operator<Scalar> s = Operator<Scalar>::Zero(d, d);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double c = family.mode() == SumMode::raw ? 1.0 : family.weighted_mass(i);
    s += Scalar(c) * family.op(i);
  }
  return s;
}

template <typename Scalar>
double identity_residual(const OperatorFamily<Scalar>& family) {
  const Index d = family.ambient_dim();
  return max_column_norm<Scalar>(Operator<Scalar>::Identity(d, d) - identity_sum(family));
}

template <typename Scalar>
double resolution_quadratic_form(const OperatorFamily<Scalar>& family, const Vector<Scalar>& f) {
  if (f.size() != family.ambient_dim()) {
    throw DimensionError("vector dimension differs from the family's ambient dimension");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    acc += family.weighted_mass(i) * (family.op(i) * f).squaredNorm();
  }
  return acc;
}

template <typename Scalar>
ResolutionCheck verify_resolution(const OperatorFamily<Scalar>& family,
                                  const VerifyOptions& options) {
  const auto& tol = options.tol;
  ResolutionCheck out;
  auto& report = out.report;
  report.set_mode(std::string(to_string(family.mode())));

  const auto spectrum = self_adjoint_spectrum(resolution_gram(family));
  const double c = std::max(0.0, spectrum.front());
  const double d = std::max(0.0, spectrum.back());
  out.bounds = {c, d};
  out.sup_norm = family.sup_norm();

  const Operator<Scalar> sum = identity_sum(family);
  const Index dim = family.ambient_dim();
  const double basis_residual =
      max_column_norm<Scalar>(Operator<Scalar>::Identity(dim, dim) - sum);

  Rng rng(options.probes.seed);
  double probe_residual = 0.0;
  for (std::size_t k = 0; k < options.probes.identity_probes; ++k) {
    const Vector<Scalar> f = random_unit_vector<Scalar>(rng, dim);
    probe_residual = std::max(probe_residual, (f - sum * f).norm());
  }

  report.set_constant("C", c);
  report.set_constant("D", d);
  report.set_constant("E", out.sup_norm);
  report.set_constant("identity_residual", basis_residual);
  report.set_constant("identity_probe_residual", probe_residual);
  report.set_tolerance("identity", tol.hypothesis);
  report.set_tolerance("frame", tol.frame);

  report.add_hypothesis("operators bounded", std::isfinite(out.sup_norm), out.sup_norm);
  report.add_conclusion("lower bound C > 0", d > 0.0 && c > tol.frame * d, c, tol.frame * d);
  report.add_conclusion("upper bound D finite", std::isfinite(d), d);
  report.add_conclusion(family.mode() == SumMode::raw ? "f = sum T_i f on basis"
                                                      : "f = sum w_i^2 mu_i T_i f on basis",
                        basis_residual <= tol.hypothesis, basis_residual, tol.hypothesis);
  report.add_conclusion("identity sum on random probes", probe_residual <= tol.hypothesis,
                        probe_residual, tol.hypothesis);
  report.add_note("weak measurability is vacuous for atomic measures");
  report.add_note("unconditional summability is automatic for finite families");
  return out;
}

template <typename Scalar>
std::vector<std::size_t> support(const OperatorFamily<Scalar>& family, const Vector<Scalar>& f,
                                 double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("support tolerance must be positive");
  }
  if (f.size() != family.ambient_dim()) {
    throw DimensionError("vector dimension differs from the family's ambient dimension");
  }
  std::vector<std::size_t> out;
  const double fn = f.norm();
  if (fn == 0.0) {
    return out;
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    if ((family.op(i) * f).norm() > tol * fn) {
      out.push_back(i);
    }
  }
  return out;
}

template <typename Scalar>
OperatorFamily<Scalar> from_orthonormal_basis(Index dim) {
  if (dim < 1) {
    throw DimensionError("dimension must be positive");
  }
  std::vector<Operator<Scalar>> ops;
  ops.reserve(static_cast<std::size_t>(dim));
  for (Index k = 0; k < dim; ++k) {
    Operator<Scalar> t = Operator<Scalar>::Zero(dim, dim);
    t(k, k) = Scalar(1);
    ops.push_back(std::move(t));
  }
  const auto n = static_cast<std::size_t>(dim);
  return OperatorFamily<Scalar>(AtomicMeasure::counting(n), std::vector<double>(n, 1.0),
                                std::move(ops), SumMode::raw);
}

#define FRAMEKIT_INSTANTIATE_RESOLUTION(S)                                                        \
  template class OperatorFamily<S>;                                                               \
  template Operator<S> resolution_gram<S>(const OperatorFamily<S>&);                              \
  template Operator<S> identity_sum<S>(const OperatorFamily<S>&);                                 \
  template double identity_residual<S>(const OperatorFamily<S>&);                                 \
  template double resolution_quadratic_form<S>(const OperatorFamily<S>&, const Vector<S>&);       \
  template ResolutionCheck verify_resolution<S>(const OperatorFamily<S>&, const VerifyOptions&);  \
  template std::vector<std::size_t> support<S>(const OperatorFamily<S>&, const Vector<S>&,        \
                                               double);                                           \
  template OperatorFamily<S> from_orthonormal_basis<S>(Index);

FRAMEKIT_INSTANTIATE_RESOLUTION(double)
FRAMEKIT_INSTANTIATE_RESOLUTION(Complex)

}  // namespace framekit
