#pragma once

// Finite-dimensional Hilbert space primitives: vectors, operators,
// subspaces held by an orthonormal basis, projections, spectra and
// positive-definite solves. Everything is templated on the scalar field;
// double and std::complex<double> are instantiated.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace framekit {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Operator = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotSelfAdjointError : public std::domain_error {
 public:
  NotSelfAdjointError(double asymmetry);
  double asymmetry() const noexcept { return asymmetry_; }

 private:
  double asymmetry_;
};

class NotPositiveDefiniteError : public std::domain_error {
 public:
  explicit NotPositiveDefiniteError(double lambda_min);
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  double lambda_min_;
};

/// A subspace of K^d stored as a d x r matrix with orthonormal columns.
template <typename Scalar>
class Subspace {
 public:
  /// The zero subspace of K^d.
  explicit Subspace(Index ambient_dim);

  /// Wraps columns that are already orthonormal. Throws if the Gram matrix
  /// deviates from the identity by more than `tol` in any entry.
  static Subspace from_orthonormal_columns(Operator<Scalar> basis, double tol = 1e-10);

  Index ambient_dim() const noexcept { return basis_.rows(); }
  Index rank() const noexcept { return basis_.cols(); }
  const Operator<Scalar>& basis() const noexcept { return basis_; }

  Operator<Scalar> projector() const;
  Vector<Scalar> project(const Vector<Scalar>& f) const;

 private:
  explicit Subspace(Operator<Scalar> basis) : basis_(std::move(basis)) {}

  Operator<Scalar> basis_;
};

/// Orthonormal basis of span(spanning). Directions whose singular value is
/// <= rel_tol * sigma_max are discarded. All vectors must have ambient_dim
/// entries.
template <typename Scalar>
Subspace<Scalar> orthonormal_basis(std::span<const Vector<Scalar>> spanning, Index ambient_dim,
                                   double rel_tol = 1e-12);

/// Closure of the range of A, i.e. its column space.
template <typename Scalar>
Subspace<Scalar> column_space(const Operator<Scalar>& a, double rel_tol = 1e-12);

template <typename Scalar>
Vector<Scalar> project(const Subspace<Scalar>& w, const Vector<Scalar>& f);

/// max |A - A*| / max(1, max |A|), entrywise.
template <typename Scalar>
double adjoint_asymmetry(const Operator<Scalar>& a);

template <typename Scalar>
struct SpectralDecomposition {
  std::vector<double> values;  // ascending
  Operator<Scalar> vectors;    // columns are eigenvectors
};

template <typename Scalar>
SpectralDecomposition<Scalar> eigen_decompose(const Operator<Scalar>& a, double tol = 1e-12);

/// Real eigenvalues of a self-adjoint operator, ascending.
template <typename Scalar>
std::vector<double> self_adjoint_spectrum(const Operator<Scalar>& a, double tol = 1e-12);

/// Solves A x = f for self-adjoint positive definite A. Throws
/// NotPositiveDefiniteError when lambda_min <= rel_tol * max(lambda_max, 0).
template <typename Scalar>
Vector<Scalar> solve_positive(const Operator<Scalar>& a, const Vector<Scalar>& f,
                              double rel_tol = 1e-13);

/// Singular values in descending order.
template <typename Scalar>
std::vector<double> singular_values(const Operator<Scalar>& a);

template <typename Scalar>
double operator_norm(const Operator<Scalar>& a);

template <typename Scalar>
double min_singular_value(const Operator<Scalar>& a);

template <typename Scalar>
Index numerical_rank(const Operator<Scalar>& a, double rel_tol = 1e-12);

/// Largest column norm of A, i.e. max_k ||A e_k||.
template <typename Scalar>
double max_column_norm(const Operator<Scalar>& a);

template <typename Scalar>
Vector<Scalar> canonical_vector(Index dim, Index k) {
  return Vector<Scalar>::Unit(dim, k);
}

}  // namespace framekit
