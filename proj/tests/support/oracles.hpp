#pragma once

// Reference computations that avoid the library's own linear algebra:
// a cyclic Jacobi eigensolver and frame/resolution sums assembled by loops.

#include "framekit/fusion_frame.hpp"
#include "framekit/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

using framekit::Complex;
using framekit::Index;
using framekit::Operator;
using framekit::Vector;

// Complex conjugate that keeps real scalars real.
inline double cj(double x) { return x; }
inline Complex cj(const Complex& x) { return std::conj(x); }

// Eigenvalues of a real symmetric matrix, ascending.
inline std::vector<double> jacobi_eigenvalues(Operator<double> a) {
  const Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(out.begin(), out.end());
  return out;
}

// Hermitian eigenvalues through the real embedding [[Re, -Im], [Im, Re]],
// whose spectrum is that of the input with every value doubled.
inline std::vector<double> eigenvalues(const Operator<double>& a) {
  return jacobi_eigenvalues(0.5 * (a + a.transpose()));
}

inline std::vector<double> eigenvalues(const Operator<Complex>& a) {
  const Operator<Complex> h = 0.5 * (a + a.adjoint());
  const Index n = h.rows();
  Operator<double> r(2 * n, 2 * n);
  r << h.real(), -h.imag(), h.imag(), h.real();
  const auto doubled = jacobi_eigenvalues(r);
  std::vector<double> out;
  for (std::size_t i = 0; i < doubled.size(); i += 2) out.push_back(doubled[i]);
  return out;
}

// sum_i w_i^2 mu_i sum_k q_k q_k^* over active atoms, by outer products.
template <typename Scalar>
Operator<Scalar> frame_operator(const framekit::WeightedSubspaceFamily<Scalar>& f) {
  const Index d = f.ambient_dim();
  Operator<Scalar> s = Operator<Scalar>::Zero(d, d);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double c = f.weight(i) * f.weight(i) * f.mass(i);
    const auto& q = f.subspace(i).basis();
    for (Index k = 0; k < q.cols(); ++k)
      for (Index r = 0; r < d; ++r)
        for (Index col = 0; col < d; ++col)
          s(r, col) += Scalar(c) * q(r, k) * cj(q(col, k));
  }
  return s;
}

// sum_i w_i^2 mu_i ||Q_i^* f||^2
template <typename Scalar>
double frame_sum(const framekit::WeightedSubspaceFamily<Scalar>& fam, const Vector<Scalar>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto& q = fam.subspace(i).basis();
    double block = 0.0;
    for (Index k = 0; k < q.cols(); ++k) {
      Scalar c(0);
      for (Index r = 0; r < q.rows(); ++r) c += cj(q(r, k)) * f(r);
      block += std::norm(c);
    }
    acc += fam.weight(i) * fam.weight(i) * fam.mass(i) * block;
  }
  return acc;
}

// sum_i w_i^2 mu_i T_i^* T_i by explicit triple loops.
template <typename Scalar>
Operator<Scalar> resolution_gram(const framekit::OperatorFamily<Scalar>& r) {
  const Index d = r.ambient_dim();
  Operator<Scalar> m = Operator<Scalar>::Zero(d, d);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& t = r.op(i);
    const double c = r.weighted_mass(i);
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b) {
        Scalar acc(0);
        for (Index k = 0; k < d; ++k) acc += cj(t(k, a)) * t(k, b);
        m(a, b) += Scalar(c) * acc;
      }
  }
  return m;
}

inline double operator_norm(const Operator<double>& a) {
  return std::sqrt(std::max(0.0, jacobi_eigenvalues(a.transpose() * a).back()));
}

inline double operator_norm(const Operator<Complex>& a) {
  return std::sqrt(std::max(0.0, eigenvalues(Operator<Complex>(a.adjoint() * a)).back()));
}

}  // namespace oracle
