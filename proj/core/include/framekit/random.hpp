#pragma once

// Seeded, platform-independent random numbers.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are implementation-defined, so the
// transforms are spelled out here:
//   uniform()  = (next() >> 11) * 2^-53          in [0, 1)
//   normal()   = Box-Muller on two uniforms, cosine branch only
// Any port that reproduces these three lines reproduces every generated
// instance (up to last-ulp differences in log/cos/sqrt of the host libm).

#include "framekit/hilbert.hpp"

#include <cstdint>
#include <random>

namespace framekit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [lo, hi].
  std::size_t uniform_index(std::size_t lo, std::size_t hi);

 private:
  std::mt19937_64 engine_;
};

template <typename Scalar>
Scalar random_scalar(Rng& rng) {
  if constexpr (std::is_same_v<Scalar, Complex>) {
    const double re = rng.normal();
    const double im = rng.normal();
    return {re, im};
  } else {
    return rng.normal();
  }
}

template <typename Scalar>
Vector<Scalar> random_gaussian_vector(Rng& rng, Index dim) {
  Vector<Scalar> v(dim);
  for (Index i = 0; i < dim; ++i) {
    v(i) = random_scalar<Scalar>(rng);
  }
  return v;
}

template <typename Scalar>
Vector<Scalar> random_unit_vector(Rng& rng, Index dim) {
  Vector<Scalar> v = random_gaussian_vector<Scalar>(rng, dim);
  while (v.norm() == 0.0) {
    v = random_gaussian_vector<Scalar>(rng, dim);
  }
  return v / v.norm();
}

template <typename Scalar>
Operator<Scalar> random_gaussian_matrix(Rng& rng, Index rows, Index cols) {
  Operator<Scalar> m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = random_scalar<Scalar>(rng);
    }
  }
  return m;
}

/// Haar-distributed unitary (orthogonal in the real case).
template <typename Scalar>
Operator<Scalar> random_unitary(Rng& rng, Index dim) {
  const Operator<Scalar> g = random_gaussian_matrix<Scalar>(rng, dim, dim);
  Eigen::HouseholderQR<Operator<Scalar>> qr(g);
  Operator<Scalar> q = qr.householderQ();
  for (Index j = 0; j < dim; ++j) {
    const Scalar d = qr.matrixQR()(j, j);
    const double a = std::abs(d);
    if (a > 0.0) {
      q.col(j) *= d / a;
    }
  }
  return q;
}

/// Uniformly random subspace of the given rank.
template <typename Scalar>
Subspace<Scalar> random_subspace(Rng& rng, Index dim, Index rank) {
  const Operator<Scalar> q = random_unitary<Scalar>(rng, dim);
  return Subspace<Scalar>::from_orthonormal_columns(q.leftCols(rank));
}

/// Self-adjoint positive semidefinite operator with spectrum in [0, norm]
/// and largest eigenvalue exactly `norm`.
template <typename Scalar>
Operator<Scalar> random_psd(Rng& rng, Index dim, double norm) {
  const Operator<Scalar> u = random_unitary<Scalar>(rng, dim);
  Vector<Scalar> d(dim);
  for (Index i = 0; i < dim; ++i) {
    d(i) = Scalar(norm * rng.uniform());
  }
  d(0) = Scalar(norm);
  return u * d.asDiagonal() * u.adjoint();
}

}  // namespace framekit
