#pragma once

// Numerical verification of the bridges between atomic resolutions of the
// identity and fusion frames. Every routine returns a VerificationReport;
// failed hypotheses and failed conclusions are report entries, never
// exceptions. Exceptions are reserved for malformed input (mismatched
// atoms, wrong sum convention, empty vector lists).

#include "framekit/fusion_frame.hpp"
#include "framekit/report.hpp"
#include "framekit/resolution.hpp"
#include "framekit/tolerances.hpp"

#include <optional>
#include <span>
#include <vector>

namespace framekit {

/// Fusion frame induced by a resolution: W_i = closure of range(T_i),
/// same atoms and weights. Throws if every T_i vanishes.
template <typename Scalar>
WeightedSubspaceFamily<Scalar> induced_family(const OperatorFamily<Scalar>& family,
                                              double rank_tol = 1e-12);

/// Weighted-mode family with f = sum w^2 mu T f. Checks that the induced
/// subspaces form a frame with 1/D <= A and B <= D (1 + sqrt(R/D))^2,
/// where D = lambda_max(M) and R bounds sum w^2 mu ||(P_i - T_i) f||^2.
template <typename Scalar>
VerificationReport verify_induced_frame(const OperatorFamily<Scalar>& family,
                                        const VerifyOptions& options = {});

/// Given a Bessel fusion frame (bound D) and operators T_i : H -> W_i with
/// T_i P_i = T_i and the weighted identity sum, checks
///   1/D <= sum w^2 mu ||T_i f||^2 <= D E^2,   E = max ||T_i||.
/// The variant D E (without the square) is recorded as a diagnostic.
template <typename Scalar>
VerificationReport verify_converse_bounds(const WeightedSubspaceFamily<Scalar>& frame,
                                          const OperatorFamily<Scalar>& family,
                                          const VerifyOptions& options = {});

/// Projection family with a first-power identity sum f = sum w mu P f and
/// Bessel-type bound sum mu ||P f||^2 <= ||f||^2 / C. Checks A >= C.
template <typename Scalar>
VerificationReport verify_projection_family(const WeightedSubspaceFamily<Scalar>& frame,
                                            const VerifyOptions& options = {});

/// Pairwise orthogonal subspaces forming a frame decompose f = sum P_i f.
/// The converse is delegated to verify_projection_family.
template <typename Scalar>
VerificationReport verify_orthogonal_reconstruction(const WeightedSubspaceFamily<Scalar>& frame,
                                                    const VerifyOptions& options = {});

/// Raw-mode resolution with bounds C, D and a frame sequence {f_i} with
/// bounds A_s, B_s on its span V. The doubly indexed family
/// g_ij = w_j sqrt(mu_j) T_j* f_i has frame bounds on V inside
/// [A_s C, B_s D]. The lower end additionally needs T_j V in V, which is
/// recorded as a hypothesis.
template <typename Scalar>
VerificationReport verify_induced_frame_sequence(const OperatorFamily<Scalar>& family,
                                                 std::span<const Vector<Scalar>> frame_sequence,
                                                 const VerifyOptions& options = {});

template <typename Scalar>
struct CountableReconstruction {
  VerificationReport report{"countable_reconstruction"};
  /// sum_i w_i^2 mu_i S^{-1} T_i* T_i f
  Vector<Scalar> inverse_first;
  /// sum_i w_i^2 mu_i T_i* T_i S^{-1} f
  Vector<Scalar> inverse_last;
  /// Atoms whose operators see H_f.
  std::vector<std::size_t> index_set;
  /// Canonical coordinates where f is nonzero; H_f is their span.
  std::vector<Index> coordinates;
};

/// Reconstruction of f from the atoms that see H_f = span{e_k : f_k != 0}.
/// S = sum_{i in I} w_i^2 mu_i T_i* T_i is compressed to H_f and inverted
/// there; both orderings of the formula are returned.
template <typename Scalar>
CountableReconstruction<Scalar> countable_reconstruction(const OperatorFamily<Scalar>& family,
                                                         const Vector<Scalar>& f,
                                                         const VerifyOptions& options = {});

}  // namespace framekit
