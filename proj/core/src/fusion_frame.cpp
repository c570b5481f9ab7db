#include "framekit/fusion_frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace framekit {

namespace {

std::string describe_bounds(const FrameBounds& b) {
  std::ostringstream os;
  os.precision(17);
  os << "family is not a frame (A = " << b.lower << ", B = " << b.upper << ")";
  return os.str();
}

template <typename Scalar>
void require_dim(const WeightedSubspaceFamily<Scalar>& family, const Vector<Scalar>& f) {
  if (f.size() != family.ambient_dim()) {
    throw DimensionError("vector dimension differs from the family's ambient dimension");
  }
}

}  // namespace

double FrameBounds::condition_number() const noexcept {
  if (!(lower > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return upper / lower;
}

NotAFrameError::NotAFrameError(FrameBounds bounds)
    : std::domain_error(describe_bounds(bounds)), bounds_(bounds) {}

template <typename Scalar>
WeightedSubspaceFamily<Scalar>::WeightedSubspaceFamily(AtomicMeasure atoms,
                                                       std::vector<double> weights,
                                                       std::vector<Subspace<Scalar>> subspaces)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), subspaces_(std::move(subspaces)) {
  if (weights_.size() != atoms_.size() || subspaces_.size() != atoms_.size()) {
    throw std::invalid_argument("atoms, weights and subspaces must have equal length");
  }
  ambient_dim_ = subspaces_.front().ambient_dim();
  bool any_nonzero = false;
  for (std::size_t i = 0; i < subspaces_.size(); ++i) {
    if (subspaces_[i].ambient_dim() != ambient_dim_) {
      throw DimensionError("subspaces live in different ambient spaces");
    }
    if (!std::isfinite(weights_[i]) || weights_[i] < 0.0) {
      throw std::invalid_argument("weights must be finite and nonnegative");
    }
    any_nonzero = any_nonzero || subspaces_[i].rank() > 0;
  }
  if (!any_nonzero) {
    throw std::invalid_argument("family needs at least one nonzero subspace");
  }
}

template <typename Scalar>
std::vector<std::size_t> WeightedSubspaceFamily<Scalar>::zero_weight_atoms() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) {
      out.push_back(i);
    }
  }
  return out;
}

template <typename Scalar>
WeightedSubspaceFamily<Scalar> WeightedSubspaceFamily<Scalar>::scaled(double c) const {
  if (!(c > 0.0)) {
    throw std::invalid_argument("weight scale must be positive");
  }
  std::vector<double> w = weights_;
  for (double& x : w) {
    x *= c;
  }
  return WeightedSubspaceFamily(atoms_, std::move(w), subspaces_);
}

template <typename Scalar>
Coefficients<Scalar> analysis(const WeightedSubspaceFamily<Scalar>& family, const Vector<Scalar>& f) {
  require_dim(family, f);
  Coefficients<Scalar> out;
  out.blocks.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    out.blocks.push_back(Scalar(family.weight(i)) * family.subspace(i).project(f));
  }
  return out;
}

template <typename Scalar>
Vector<Scalar> synthesis(const WeightedSubspaceFamily<Scalar>& family,
                         const Coefficients<Scalar>& phi, double membership_tol) {
  if (phi.blocks.size() != family.size()) {
    throw DimensionError("coefficient blocks are not aligned with the family");
  }
  Vector<Scalar> out = Vector<Scalar>::Zero(family.ambient_dim());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& block = phi.blocks[i];
    if (block.size() != family.ambient_dim()) {
      throw DimensionError("coefficient block has the wrong dimension");
    }
    const double leak = (block - family.subspace(i).project(block)).norm();
    if (leak > membership_tol * std::max(1.0, block.norm())) {
      std::ostringstream os;
      os << "coefficient block " << i << " is not in its subspace (distance " << leak << ")";
      throw std::invalid_argument(os.str());
    }
    out += Scalar(family.weight(i) * family.mass(i)) * block;
  }
  return out;
}

template <typename Scalar>
Scalar coefficient_inner(const WeightedSubspaceFamily<Scalar>& family,
                         const Coefficients<Scalar>& phi, const Coefficients<Scalar>& psi) {
  if (phi.blocks.size() != family.size() || psi.blocks.size() != family.size()) {
    throw DimensionError("coefficient blocks are not aligned with the family");
  }
  Scalar acc(0);
  for (std::size_t i = 0; i < family.size(); ++i) {
    acc += Scalar(family.mass(i)) * phi.blocks[i].dot(psi.blocks[i]);
  }
  return acc;
}

template <typename Scalar>
double frame_quadratic_form(const WeightedSubspaceFamily<Scalar>& family, const Vector<Scalar>& f) {
  require_dim(family, f);
  double acc = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!family.active(i)) {
      continue;
    }
    const double w = family.weight(i);
    acc += w * w * family.mass(i) * family.subspace(i).project(f).squaredNorm();
  }
  return acc;
}

template <typename Scalar>
Operator<Scalar> frame_operator(const WeightedSubspaceFamily<Scalar>& family) {
  const Index d = family.ambient_dim();
  Operator<Scalar> s = Operator<Scalar>::Zero(d, d);
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!family.active(i) || family.subspace(i).rank() == 0) {
      continue;
    }
    const double w = family.weight(i);
    const auto& q = family.subspace(i).basis();
    s += Scalar(w * w * family.mass(i)) * (q * q.adjoint());
  }
  // Exact self-adjointness; the sum above is symmetric only up to rounding.
  return (s + s.adjoint()) * Scalar(0.5);
}

template <typename Scalar>
FrameBounds frame_bounds(const WeightedSubspaceFamily<Scalar>& family) {
  const auto spectrum = self_adjoint_spectrum(frame_operator(family));
  return {std::max(0.0, spectrum.front()), std::max(0.0, spectrum.back())};
}

template <typename Scalar>
Operator<Scalar> synthesis_matrix(const WeightedSubspaceFamily<Scalar>& family) {
  Index cols = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    cols += family.subspace(i).rank();
  }
  Operator<Scalar> t(family.ambient_dim(), cols);
  Index offset = 0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& q = family.subspace(i).basis();
    const double scale = family.weight(i) * std::sqrt(family.mass(i));
    t.middleCols(offset, q.cols()) = Scalar(scale) * q;
    offset += q.cols();
  }
  return t;
}

template <typename Scalar>
VerificationReport verify_characterization(const WeightedSubspaceFamily<Scalar>& family,
                                           const Tolerances& tol) {
  VerificationReport report("characterization");
  const FrameBounds bounds = frame_bounds(family);
  const Operator<Scalar> t = synthesis_matrix(family);
  const auto sigma = singular_values(t);
  const double norm_t = sigma.empty() ? 0.0 : sigma.front();
  const bool is_frame = bounds.is_frame(tol.frame);

  // rank(T) with the threshold matching the frame test: sigma^2 > frame * B.
  const double rank_threshold = std::sqrt(tol.frame) * norm_t;
  const auto rank = static_cast<Index>(std::count_if(
      sigma.begin(), sigma.end(), [&](double s) { return norm_t > 0.0 && s > rank_threshold; }));
  const bool surjective = rank == family.ambient_dim();

  // Injectivity of T* from its own matrix, by column-pivoted QR.
  bool injective = false;
  if (t.cols() > 0 && norm_t > 0.0) {
    Eigen::ColPivHouseholderQR<Operator<Scalar>> qr(t.adjoint());
    qr.setThreshold(std::sqrt(tol.frame));
    injective = qr.rank() == family.ambient_dim();
  }

  report.set_constant("A", bounds.lower);
  report.set_constant("B", bounds.upper);
  report.set_constant("synthesis_norm", norm_t);
  report.set_constant("sqrt_B", std::sqrt(bounds.upper));
  report.set_constant("synthesis_rank", static_cast<double>(rank));
  report.set_constant("ambient_dim", static_cast<double>(family.ambient_dim()));
  report.set_constant("is_frame", is_frame ? 1.0 : 0.0);
  report.set_constant("analysis_injective", injective ? 1.0 : 0.0);
  report.set_constant("synthesis_surjective", surjective ? 1.0 : 0.0);
  report.set_constant("zero_weight_atoms", static_cast<double>(family.zero_weight_atoms().size()));
  report.set_tolerance("norm", tol.hypothesis);
  report.set_tolerance("frame", tol.frame);

  report.add_hypothesis("family is Bessel (finite B)", std::isfinite(bounds.upper));

  const double norm_gap = std::abs(norm_t - std::sqrt(bounds.upper));
  const double norm_tol = tol.hypothesis * std::max(1.0, std::sqrt(bounds.upper));
  report.add_conclusion("||T|| = sqrt(B)", norm_gap <= norm_tol, norm_gap, norm_tol);
  report.add_conclusion("||T||^2 <= B", norm_t * norm_t - bounds.upper <= norm_tol,
                        norm_t * norm_t - bounds.upper, norm_tol);
  report.add_conclusion("analysis injective iff A > 0", injective == is_frame);
  report.add_conclusion("synthesis onto iff A > 0", surjective == is_frame);
  if (!is_frame) {
    report.add_note("not a frame: lower bound A vanishes");
  }
  report.add_note("weak measurability is vacuous for atomic measures");
  return report;
}

template <typename Scalar>
Reconstruction<Scalar> reconstruct(const WeightedSubspaceFamily<Scalar>& family,
                                   const Vector<Scalar>& f, const Tolerances& tol) {
  require_dim(family, f);
  const Operator<Scalar> s = frame_operator(family);
  const auto spectrum = self_adjoint_spectrum(s);
  const FrameBounds bounds{std::max(0.0, spectrum.front()), std::max(0.0, spectrum.back())};
  if (!bounds.is_frame(tol.frame)) {
    throw NotAFrameError(bounds);
  }
  Vector<Scalar> weighted = Vector<Scalar>::Zero(family.ambient_dim());
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!family.active(i)) {
      continue;
    }
    const double w = family.weight(i);
    weighted += Scalar(w * w * family.mass(i)) * family.subspace(i).project(f);
  }
  Reconstruction<Scalar> out;
  out.value = solve_positive(s, weighted, 0.0);
  const double fn = f.norm();
  const double err = (out.value - f).norm();
  out.relative_residual = fn > 0.0 ? err / fn : err;
  return out;
}

#define FRAMEKIT_INSTANTIATE_FUSION(S)                                                           \
  template class WeightedSubspaceFamily<S>;                                                      \
  template Coefficients<S> analysis<S>(const WeightedSubspaceFamily<S>&, const Vector<S>&);      \
  template Vector<S> synthesis<S>(const WeightedSubspaceFamily<S>&, const Coefficients<S>&,      \
                                  double);                                                       \
  template S coefficient_inner<S>(const WeightedSubspaceFamily<S>&, const Coefficients<S>&,      \
                                  const Coefficients<S>&);                                       \
  template double frame_quadratic_form<S>(const WeightedSubspaceFamily<S>&, const Vector<S>&);   \
  template Operator<S> frame_operator<S>(const WeightedSubspaceFamily<S>&);                      \
  template FrameBounds frame_bounds<S>(const WeightedSubspaceFamily<S>&);                        \
  template Operator<S> synthesis_matrix<S>(const WeightedSubspaceFamily<S>&);                    \
  template VerificationReport verify_characterization<S>(const WeightedSubspaceFamily<S>&,       \
                                                         const Tolerances&);                     \
  template Reconstruction<S> reconstruct<S>(const WeightedSubspaceFamily<S>&, const Vector<S>&,  \
                                            const Tolerances&);

FRAMEKIT_INSTANTIATE_FUSION(double)
FRAMEKIT_INSTANTIATE_FUSION(Complex)

}  // namespace framekit
