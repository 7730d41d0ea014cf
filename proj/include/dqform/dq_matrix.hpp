#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "dqform/dual_quaternion.hpp"
#include "dqform/errors.hpp"
#include "dqform/quaternion.hpp"

// Register the quaternion types as Eigen scalars so that dense matrices over
// them get Eigen's full expression machinery (sums, products, adjoint()).
// IsComplex is set so that adjoint() applies the quaternion conjugation found
// by ADL rather than the identity.
namespace Eigen {

template <typename T>
struct NumTraits<dqform::Quaternion<T>> : GenericNumTraits<dqform::Quaternion<T>> {
  typedef T Real;
  typedef dqform::Quaternion<T> NonInteger;
  typedef dqform::Quaternion<T> Nested;
  typedef T Literal;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 4,
    MulCost = 16
  };
  static inline Real epsilon() { return NumTraits<T>::epsilon(); }
  static inline Real dummy_precision() { return NumTraits<T>::dummy_precision(); }
  static inline int digits10() { return NumTraits<T>::digits10(); }
};

template <typename T>
struct NumTraits<dqform::DualQuaternion<T>> : GenericNumTraits<dqform::DualQuaternion<T>> {
  typedef T Real;
  typedef dqform::DualQuaternion<T> NonInteger;
  typedef dqform::DualQuaternion<T> Nested;
  typedef T Literal;
  enum {
    IsComplex = 1,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 8,
    MulCost = 32
  };
  static inline Real epsilon() { return NumTraits<T>::epsilon(); }
  static inline Real dummy_precision() { return NumTraits<T>::dummy_precision(); }
  static inline int digits10() { return NumTraits<T>::digits10(); }
};

}  // namespace Eigen

namespace dqform {

using QMatrix = Eigen::Matrix<Quaterniond, Eigen::Dynamic, Eigen::Dynamic>;
using QVector = Eigen::Matrix<Quaterniond, Eigen::Dynamic, 1>;
using DQMatrix = Eigen::Matrix<DualQuaterniond, Eigen::Dynamic, Eigen::Dynamic>;
using DQVector = Eigen::Matrix<DualQuaterniond, Eigen::Dynamic, 1>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline QMatrix standardPart(const DQMatrix& a) {
  QMatrix out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).s;
  return out;
}

inline QMatrix dualPart(const DQMatrix& a) {
  QMatrix out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).d;
  return out;
}

inline DQMatrix joinParts(const QMatrix& s, const QMatrix& d) {
  if (s.rows() != d.rows() || s.cols() != d.cols())
    throw DimensionMismatch("standard and dual parts differ in shape");
  DQMatrix out(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j) out(i, j) = {s(i, j), d(i, j)};
  return out;
}

inline DQMatrix fromStandard(const QMatrix& s) {
  DQMatrix out(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i)
    for (Eigen::Index j = 0; j < s.cols(); ++j) out(i, j) = s(i, j);
  return out;
}

/// Largest absolute component over all entries (both parts), the entrywise
/// check metric used by the predicates below.
inline double maxAbsComponent(const DualQuaterniond& q) {
  double m = 0;
  for (double c : {q.s.w, q.s.x, q.s.y, q.s.z, q.d.w, q.d.x, q.d.y, q.d.z})
    m = std::max(m, std::abs(c));
  return m;
}

inline double maxAbsComponent(const DQMatrix& a) {
  double m = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) m = std::max(m, maxAbsComponent(a(i, j)));
  return m;
}

/// Entrywise Hermitian predicate: a(i,j) == conj(a(j,i)) within tol.
inline bool isHermitian(const DQMatrix& a, double tol = 1e-10) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j)
      if (maxAbsComponent(a(i, j) - conj(a(j, i))) > tol) return false;
  return true;
}

inline bool isHermitian(const QMatrix& a, double tol = 1e-10) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      Quaterniond del = a(i, j) - a(j, i).conjugate();
      if (std::abs(del.w) > tol || std::abs(del.x) > tol || std::abs(del.y) > tol ||
          std::abs(del.z) > tol)
        return false;
    }
  return true;
}

inline bool isUnitary(const DQMatrix& a, double tol = 1e-9) {
  if (a.rows() != a.cols()) return false;
  const DQMatrix at = a.adjoint();
  DQMatrix g = at * a;
  for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, i) -= DualQuaterniond(1.0);
  return maxAbsComponent(g) <= tol;
}

/// Frobenius norm of the standard part: sqrt(sum of |a_ij|^2).
inline double frobeniusNormStandard(const DQMatrix& a) {
  double t = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) t += a(i, j).s.squaredNorm();
  return std::sqrt(t);
}

/// Frobenius norm of the dual part.
inline double frobeniusNormDual(const DQMatrix& a) {
  double t = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) t += a(i, j).d.squaredNorm();
  return std::sqrt(t);
}

/// Combined Frobenius-style norm: entry magnitudes of both parts summed in
/// squares. This is the scalar used for residual ratios.
inline double frobeniusNorm(const DQMatrix& a) {
  double t = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) t += abs2(a(i, j));
  return std::sqrt(t);
}

inline double frobeniusNorm(const QMatrix& a) {
  double t = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) t += a(i, j).squaredNorm();
  return std::sqrt(t);
}

/// Solves A X = B by Gauss-Jordan elimination with partial pivoting over the
/// quaternions (row operations are left multiplications, so noncommutativity
/// is respected). Pivots below 1e-12 in magnitude raise Singular.
inline QMatrix quaternionSolve(QMatrix a, QMatrix b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n) throw DimensionMismatch("solve shapes");
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index piv = k;
    double best = a(k, k).norm();
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double m = a(i, k).norm();
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (best < 1e-12) throw Singular("pivot below 1e-12 in standard-part solve");
    if (piv != k) {
      a.row(k).swap(a.row(piv));
      b.row(k).swap(b.row(piv));
    }
    const Quaterniond inv = a(k, k).inverse();
    for (Eigen::Index j = k; j < n; ++j) a(k, j) = inv * a(k, j);
    b.row(k) = (inv * b.row(k)).eval();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == k || a(i, k).isZero()) continue;
      const Quaterniond f = a(i, k);
      for (Eigen::Index j = k; j < n; ++j) a(i, j) = a(i, j) - f * a(k, j);
      b.row(i) -= f * b.row(k);
    }
  }
  return b;
}

/// Matrix inverse A^-1 - A^-1 A_d A^-1 eps, realized through the
/// standard-part solve.
inline DQMatrix inverse(const DQMatrix& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("inverse of non-square matrix");
  const QMatrix s = standardPart(a);
  const QMatrix sinv = quaternionSolve(s, QMatrix::Identity(n, n));
  const QMatrix dinv = -(sinv * dualPart(a) * sinv).eval();
  return joinParts(sinv, dinv);
}

}  // namespace dqform
