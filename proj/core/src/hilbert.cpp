#include "framekit/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace framekit {

namespace {

std::string describe_lambda(double lambda_min) {
  std::ostringstream os;
  os.precision(17);
  os << "operator is not positive definite (lambda_min = " << lambda_min << ")";
  return os.str();
}

std::string describe_asymmetry(double asymmetry) {
  std::ostringstream os;
  os << "operator is not self-adjoint (relative asymmetry " << asymmetry << ")";
  return os.str();
}

template <typename Scalar>
Operator<Scalar> hermitian_part(const Operator<Scalar>& a) {
  return (a + a.adjoint()) * Scalar(0.5);
}

template <typename Scalar>
void require_square(const Operator<Scalar>& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("operator must be square");
  }
}

}  // namespace

NotSelfAdjointError::NotSelfAdjointError(double asymmetry)
    : std::domain_error(describe_asymmetry(asymmetry)), asymmetry_(asymmetry) {}

NotPositiveDefiniteError::NotPositiveDefiniteError(double lambda_min)
    : std::domain_error(describe_lambda(lambda_min)), lambda_min_(lambda_min) {}

template <typename Scalar>
Subspace<Scalar>::Subspace(Index ambient_dim) : basis_(ambient_dim, 0) {
  if (ambient_dim <= 0) {
    throw DimensionError("ambient dimension must be positive");
  }
}

template <typename Scalar>
Subspace<Scalar> Subspace<Scalar>::from_orthonormal_columns(Operator<Scalar> basis, double tol) {
  if (basis.rows() <= 0) {
    throw DimensionError("ambient dimension must be positive");
  }
  if (basis.cols() > basis.rows()) {
    throw DimensionError("more basis vectors than the ambient dimension");
  }
  const Operator<Scalar> gram = basis.adjoint() * basis;
  const Operator<Scalar> id = Operator<Scalar>::Identity(basis.cols(), basis.cols());
  if (basis.cols() > 0 && (gram - id).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("basis columns are not orthonormal");
  }
  return Subspace(std::move(basis));
}

template <typename Scalar>
Operator<Scalar> Subspace<Scalar>::projector() const {
  return basis_ * basis_.adjoint();
}

template <typename Scalar>
Vector<Scalar> Subspace<Scalar>::project(const Vector<Scalar>& f) const {
  if (f.size() != ambient_dim()) {
    throw DimensionError("vector and subspace dimensions differ");
  }
  if (rank() == 0) {
    return Vector<Scalar>::Zero(ambient_dim());
  }
  return basis_ * (basis_.adjoint() * f);
}

template <typename Scalar>
Subspace<Scalar> column_space(const Operator<Scalar>& a, double rel_tol) {
  if (a.rows() <= 0) {
    throw DimensionError("ambient dimension must be positive");
  }
  if (a.cols() == 0) {
    return Subspace<Scalar>(a.rows());
  }
  Eigen::JacobiSVD<Operator<Scalar>> svd(a, Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  Index r = 0;
  if (sigma_max > 0.0) {
    while (r < sigma.size() && sigma(r) > rel_tol * sigma_max) {
      ++r;
    }
  }
  Operator<Scalar> q = svd.matrixU().leftCols(r);
  // One pass of Householder QR on the retained directions restores
  // orthonormality to working precision and fixes the sign convention.
  if (r > 0) {
    Eigen::HouseholderQR<Operator<Scalar>> qr(q);
    Operator<Scalar> thin = qr.householderQ() * Operator<Scalar>::Identity(a.rows(), r);
    for (Index j = 0; j < r; ++j) {
      const Scalar d = qr.matrixQR()(j, j);
      if (std::real(d) < 0.0) {
        thin.col(j) = -thin.col(j);
      }
    }
    q = std::move(thin);
  }
  return Subspace<Scalar>::from_orthonormal_columns(std::move(q), 1e-10);
}

template <typename Scalar>
Subspace<Scalar> orthonormal_basis(std::span<const Vector<Scalar>> spanning, Index ambient_dim,
                                   double rel_tol) {
  if (rel_tol <= 0.0) {
    throw std::invalid_argument("rank tolerance must be positive");
  }
  Operator<Scalar> columns(ambient_dim, static_cast<Index>(spanning.size()));
  for (std::size_t j = 0; j < spanning.size(); ++j) {
    if (spanning[j].size() != ambient_dim) {
      throw DimensionError("spanning vectors have mismatched dimensions");
    }
    columns.col(static_cast<Index>(j)) = spanning[j];
  }
  return column_space(columns, rel_tol);
}

template <typename Scalar>
Vector<Scalar> project(const Subspace<Scalar>& w, const Vector<Scalar>& f) {
  return w.project(f);
}

template <typename Scalar>
double adjoint_asymmetry(const Operator<Scalar>& a) {
  require_square(a);
  if (a.size() == 0) {
    return 0.0;
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

template <typename Scalar>
SpectralDecomposition<Scalar> eigen_decompose(const Operator<Scalar>& a, double tol) {
  const double asym = adjoint_asymmetry(a);
  if (asym > tol) {
    throw NotSelfAdjointError(asym);
  }
  Eigen::SelfAdjointEigenSolver<Operator<Scalar>> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigen decomposition did not converge");
  }
  SpectralDecomposition<Scalar> out;
  const auto& ev = solver.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  out.vectors = solver.eigenvectors();
  return out;
}

template <typename Scalar>
std::vector<double> self_adjoint_spectrum(const Operator<Scalar>& a, double tol) {
  const double asym = adjoint_asymmetry(a);
  if (asym > tol) {
    throw NotSelfAdjointError(asym);
  }
  Eigen::SelfAdjointEigenSolver<Operator<Scalar>> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

template <typename Scalar>
Vector<Scalar> solve_positive(const Operator<Scalar>& a, const Vector<Scalar>& f, double rel_tol) {
  require_square(a);
  if (f.size() != a.rows()) {
    throw DimensionError("right-hand side dimension differs from operator");
  }
  const auto spectrum = self_adjoint_spectrum(a);
  const double lambda_min = spectrum.front();
  const double lambda_max = spectrum.back();
  if (lambda_max <= 0.0 || lambda_min <= rel_tol * lambda_max) {
    throw NotPositiveDefiniteError(lambda_min);
  }
  const Operator<Scalar> h = hermitian_part(a);
  Eigen::LLT<Operator<Scalar>> llt(h);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(lambda_min);
  }
  Vector<Scalar> x = llt.solve(f);
  // One step of iterative refinement.
  const Vector<Scalar> r = f - h * x;
  x += llt.solve(r);
  return x;
}

template <typename Scalar>
std::vector<double> singular_values(const Operator<Scalar>& a) {
  if (a.size() == 0) {
    return {};
  }
  Eigen::JacobiSVD<Operator<Scalar>> svd(a);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

template <typename Scalar>
double operator_norm(const Operator<Scalar>& a) {
  const auto s = singular_values(a);
  return s.empty() ? 0.0 : s.front();
}

template <typename Scalar>
double min_singular_value(const Operator<Scalar>& a) {
  const auto s = singular_values(a);
  if (s.empty()) {
    return 0.0;
  }
  // A wide matrix has rows() singular values; a tall one is not onto.
  if (a.cols() < a.rows()) {
    return 0.0;
  }
  return s.back();
}

template <typename Scalar>
Index numerical_rank(const Operator<Scalar>& a, double rel_tol) {
  const auto s = singular_values(a);
  if (s.empty() || s.front() <= 0.0) {
    return 0;
  }
  return static_cast<Index>(
      std::count_if(s.begin(), s.end(), [&](double v) { return v > rel_tol * s.front(); }));
}

template <typename Scalar>
double max_column_norm(const Operator<Scalar>& a) {
  if (a.cols() == 0) {
    return 0.0;
  }
  return a.colwise().norm().maxCoeff();
}

#define FRAMEKIT_INSTANTIATE_HILBERT(S)                                                        \
  template class Subspace<S>;                                                                  \
  template Subspace<S> orthonormal_basis<S>(std::span<const Vector<S>>, Index, double);        \
  template Subspace<S> column_space<S>(const Operator<S>&, double);                            \
  template Vector<S> project<S>(const Subspace<S>&, const Vector<S>&);                         \
  template double adjoint_asymmetry<S>(const Operator<S>&);                                    \
  template SpectralDecomposition<S> eigen_decompose<S>(const Operator<S>&, double);            \
  template std::vector<double> self_adjoint_spectrum<S>(const Operator<S>&, double);           \
  template Vector<S> solve_positive<S>(const Operator<S>&, const Vector<S>&, double);          \
  template std::vector<double> singular_values<S>(const Operator<S>&);                         \
  template double operator_norm<S>(const Operator<S>&);                                        \
  template double min_singular_value<S>(const Operator<S>&);                                   \
  template Index numerical_rank<S>(const Operator<S>&, double);                                \
  template double max_column_norm<S>(const Operator<S>&);

FRAMEKIT_INSTANTIATE_HILBERT(double)
FRAMEKIT_INSTANTIATE_HILBERT(Complex)

}  // namespace framekit
