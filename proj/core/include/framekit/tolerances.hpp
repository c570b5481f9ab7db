#pragma once

#include <cstddef>
#include <cstdint>

namespace framekit {

/// Numerical thresholds shared by every verification routine. The defaults
/// are the contract values used by the acceptance suite.
struct Tolerances {
  /// Singular values at or below rank * sigma_max are treated as zero.
  double rank = 1e-12;
  /// A family is "not a frame" when its lower bound is <= frame * upper bound.
  double frame = 1e-10;
  /// Residual threshold for identity sums and other hypothesis checks.
  double hypothesis = 1e-9;
  /// Structural checks: subspace membership, orthogonality, T P = T.
  double structure = 1e-10;
  /// Additive slack on predicted bounds.
  double bound_slack = 1e-9;
  /// Relative threshold for the self-adjointness test.
  double self_adjoint = 1e-12;
};

/// Sizes and seeds of the random probe sets used where a statement
/// quantifies over all vectors.
struct ProbeOptions {
  std::size_t quadratic_probes = 1000;
  std::size_t perturbation_probes = 2000;
  std::size_t identity_probes = 10;
  std::size_t exhaustive_subset_limit = 12;
  std::size_t sampled_subsets = 10000;
  std::uint64_t seed = 0x5eedf00dULL;
};

struct VerifyOptions {
  Tolerances tol;
  ProbeOptions probes;
};

}  // namespace framekit
