#pragma once

// Weighted families of subspaces over an atomic measure (fusion frames).
//
// With atoms x_i, masses mu_i, weights w_i and subspaces W_i:
//   analysis    T*(f)    = (w_i P_i f)_i
//   synthesis   T(phi)   = sum_i w_i mu_i phi_i
//   frame op    S        = T T* = sum_i w_i^2 mu_i P_i
// The coefficient space carries <phi, psi> = sum_i mu_i <phi_i, psi_i>.
// Atoms with w_i = 0 are stored but contribute nothing to any sum.

#include "framekit/hilbert.hpp"
#include "framekit/measure.hpp"
#include "framekit/report.hpp"
#include "framekit/tolerances.hpp"

#include <stdexcept>
#include <vector>

namespace framekit {

template <typename Scalar>
class WeightedSubspaceFamily {
 public:
  WeightedSubspaceFamily(AtomicMeasure atoms, std::vector<double> weights,
                         std::vector<Subspace<Scalar>> subspaces);

  Index ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t size() const noexcept { return subspaces_.size(); }
  const AtomicMeasure& atoms() const noexcept { return atoms_; }
  double weight(std::size_t i) const { return weights_.at(i); }
  double mass(std::size_t i) const { return atoms_.mass(i); }
  const Subspace<Scalar>& subspace(std::size_t i) const { return subspaces_.at(i); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<Subspace<Scalar>>& subspaces() const noexcept { return subspaces_; }

  bool active(std::size_t i) const { return weights_.at(i) > 0.0; }
  std::vector<std::size_t> zero_weight_atoms() const;

  /// Same subspaces and masses, every weight multiplied by c > 0.
  WeightedSubspaceFamily scaled(double c) const;

 private:
  AtomicMeasure atoms_;
  std::vector<double> weights_;
  std::vector<Subspace<Scalar>> subspaces_;
  Index ambient_dim_ = 0;
};

/// An element of the representation space: block i lies in W_i.
template <typename Scalar>
struct Coefficients {
  std::vector<Vector<Scalar>> blocks;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;

  /// A family is a frame iff lower > rel_tol * upper.
  bool is_frame(double rel_tol = 1e-10) const noexcept {
    return upper > 0.0 && lower > rel_tol * upper;
  }
  /// upper / lower; +inf when the family is not a frame.
  double condition_number() const noexcept;
};

class NotAFrameError : public std::domain_error {
 public:
  explicit NotAFrameError(FrameBounds bounds);
  const FrameBounds& bounds() const noexcept { return bounds_; }

 private:
  FrameBounds bounds_;
};

template <typename Scalar>
Coefficients<Scalar> analysis(const WeightedSubspaceFamily<Scalar>& family, const Vector<Scalar>& f);

/// Throws std::invalid_argument if a block leaves its subspace by more
/// than `membership_tol` (relative to the block norm, absolute below 1).
template <typename Scalar>
Vector<Scalar> synthesis(const WeightedSubspaceFamily<Scalar>& family,
                         const Coefficients<Scalar>& phi, double membership_tol = 1e-10);

/// mu-weighted inner product on the representation space.
template <typename Scalar>
Scalar coefficient_inner(const WeightedSubspaceFamily<Scalar>& family,
                         const Coefficients<Scalar>& phi, const Coefficients<Scalar>& psi);

/// sum_i w_i^2 mu_i ||P_i f||^2, the middle member of the frame inequality.
template <typename Scalar>
double frame_quadratic_form(const WeightedSubspaceFamily<Scalar>& family, const Vector<Scalar>& f);

template <typename Scalar>
Operator<Scalar> frame_operator(const WeightedSubspaceFamily<Scalar>& family);

/// A = lambda_min(S) (clamped at 0), B = lambda_max(S).
template <typename Scalar>
FrameBounds frame_bounds(const WeightedSubspaceFamily<Scalar>& family);

/// Dense synthesis map in isometric coordinates of the representation
/// space: columns w_i sqrt(mu_i) Q_i for an orthonormal basis Q_i of W_i.
/// Its product with its adjoint is the frame operator.
template <typename Scalar>
Operator<Scalar> synthesis_matrix(const WeightedSubspaceFamily<Scalar>& family);

/// Bessel/frame characterizations through the synthesis operator:
/// ||T|| = sqrt(B), T* injective iff A > 0, T onto iff A > 0.
template <typename Scalar>
VerificationReport verify_characterization(const WeightedSubspaceFamily<Scalar>& family,
                                           const Tolerances& tol = {});

template <typename Scalar>
struct Reconstruction {
  Vector<Scalar> value;
  double relative_residual = 0.0;
};

/// sum_i w_i^2 mu_i S^{-1} P_i f. Throws NotAFrameError when A <= frame tol * B.
template <typename Scalar>
Reconstruction<Scalar> reconstruct(const WeightedSubspaceFamily<Scalar>& family,
                                   const Vector<Scalar>& f, const Tolerances& tol = {});

}  // namespace framekit
