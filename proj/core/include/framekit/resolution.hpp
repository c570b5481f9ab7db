#pragma once

// Operator families {T_i} over an atomic measure, the unconditional atomic
// resolutions of the identity: bounds C, D on sum w_i^2 mu_i ||T_i f||^2
// and the identity sum. Two sum conventions coexist and every family
// carries its own:
//   raw       f = sum_i T_i f
//   weighted  f = sum_i w_i^2 mu_i T_i f

#include "framekit/hilbert.hpp"
#include "framekit/measure.hpp"
#include "framekit/report.hpp"
#include "framekit/tolerances.hpp"

#include <string_view>
#include <vector>

namespace framekit {

enum class SumMode { raw, weighted };

std::string_view to_string(SumMode mode);
SumMode parse_sum_mode(std::string_view name);

template <typename Scalar>
class OperatorFamily {
 public:
  OperatorFamily(AtomicMeasure atoms, std::vector<double> weights,
                 std::vector<Operator<Scalar>> operators, SumMode mode);

  Index ambient_dim() const noexcept { return ambient_dim_; }
  std::size_t size() const noexcept { return operators_.size(); }
  SumMode mode() const noexcept { return mode_; }
  const AtomicMeasure& atoms() const noexcept { return atoms_; }
  double weight(std::size_t i) const { return weights_.at(i); }
  double mass(std::size_t i) const { return atoms_.mass(i); }
  const Operator<Scalar>& op(std::size_t i) const { return operators_.at(i); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<Operator<Scalar>>& operators() const noexcept { return operators_; }
  /// Operator norms ||T_i||.
  const std::vector<double>& norms() const noexcept { return norms_; }
  /// E = max_i ||T_i||.
  double sup_norm() const noexcept { return sup_norm_; }

  /// w_i^2 mu_i, the coefficient of atom i in weighted sums.
  double weighted_mass(std::size_t i) const { return weight(i) * weight(i) * mass(i); }

  OperatorFamily with_mode(SumMode mode) const;
  /// New family on the same atoms and weights.
  OperatorFamily with_operators(std::vector<Operator<Scalar>> operators) const;

 private:
  AtomicMeasure atoms_;
  std::vector<double> weights_;
  std::vector<Operator<Scalar>> operators_;
  SumMode mode_;
  Index ambient_dim_ = 0;
  std::vector<double> norms_;
  double sup_norm_ = 0.0;
};

struct ResolutionBounds {
  double lower = 0.0;  // C
  double upper = 0.0;  // D
};

/// M = sum_i w_i^2 mu_i T_i* T_i, so <M f, f> = sum_i w_i^2 mu_i ||T_i f||^2.
template <typename Scalar>
Operator<Scalar> resolution_gram(const OperatorFamily<Scalar>& family);

/// sum_i T_i (raw) or sum_i w_i^2 mu_i T_i (weighted).
template <typename Scalar>
Operator<Scalar> identity_sum(const OperatorFamily<Scalar>& family);

/// max over canonical basis vectors e_k of ||e_k - (identity sum) e_k||.
template <typename Scalar>
double identity_residual(const OperatorFamily<Scalar>& family);

template <typename Scalar>
double resolution_quadratic_form(const OperatorFamily<Scalar>& family, const Vector<Scalar>& f);

struct ResolutionCheck {
  VerificationReport report{"resolution"};
  ResolutionBounds bounds;
  double sup_norm = 0.0;
  bool passed() const noexcept { return report.passed(); }
};

/// Checks the norm sandwich (C = lambda_min(M) > frame tol * D) and the
/// identity sum in the family's own mode.
template <typename Scalar>
ResolutionCheck verify_resolution(const OperatorFamily<Scalar>& family,
                                  const VerifyOptions& options = {});

/// J_f = {i : ||T_i f|| > tol ||f||}. Empty for f = 0.
template <typename Scalar>
std::vector<std::size_t> support(const OperatorFamily<Scalar>& family, const Vector<Scalar>& f,
                                 double tol = 1e-12);

/// T_k f = <e_k, f> e_k on the counting measure, unit weights, raw mode.
template <typename Scalar>
OperatorFamily<Scalar> from_orthonormal_basis(Index dim);

}  // namespace framekit
