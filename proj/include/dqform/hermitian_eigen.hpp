#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "dqform/dq_matrix.hpp"
#include "dqform/dual_number.hpp"
#include "dqform/errors.hpp"

namespace dqform {

// ---------------------------------------------------------------------------
// Complex Hermitian Jacobi eigensolver (self-contained; the dual quaternion
// Hermitian decomposition below rests on it via the complex adjoint map).
// ---------------------------------------------------------------------------

struct ComplexJacobiResult {
  Eigen::VectorXd values;
  ComplexMatrix vectors;  // columns; m = vectors * diag(values) * vectors^H
  int sweeps = 0;
};

inline double offDiagonalNorm(const ComplexMatrix& m) {
  double t = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j) t += std::norm(m(i, j));
  return std::sqrt(t);
}

/// Cyclic Jacobi for complex Hermitian matrices. Deterministic sweep order,
/// off-diagonal convergence threshold 1e-12 * ||m||_F, sweep cap `sweepCap`.
inline ComplexJacobiResult jacobiHermitian(ComplexMatrix m, int sweepCap = 100) {
  using Complex = std::complex<double>;
  const Eigen::Index n = m.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = m.norm();
  const double threshold = 1e-12 * scale;
  const double skipTol = n > 1 ? 0.1 * threshold / double(n) : 0.0;

  for (int sweep = 0; sweep <= sweepCap; ++sweep) {
    if (offDiagonalNorm(m) <= threshold)
      return {m.diagonal().real(), std::move(v), sweep};
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(m(p, q));
        if (r <= skipTol) continue;
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const Complex sigma = (t * c) * (m(p, q) / r);

        // m <- G^H m G with G = [[c, sigma], [-conj(sigma), c]] at (p, q).
        const ComplexVector colp = m.col(p), colq = m.col(q);
        m.col(p) = c * colp - std::conj(sigma) * colq;
        m.col(q) = sigma * colp + c * colq;
        const Eigen::RowVectorXcd rowp = m.row(p), rowq = m.row(q);
        m.row(p) = c * rowp - sigma * rowq;
        m.row(q) = std::conj(sigma) * rowp + c * rowq;
        m(p, q) = m(q, p) = Complex(0);
        m(p, p) = Complex(app - t * r);
        m(q, q) = Complex(aqq + t * r);

        const ComplexVector vp = v.col(p), vq = v.col(q);
        v.col(p) = c * vp - std::conj(sigma) * vq;
        v.col(q) = sigma * vp + c * vq;
      }
    }
  }
  throw ConvergenceFailure("Jacobi sweep cap exceeded");
}

// ---------------------------------------------------------------------------
// Quaternion Hermitian eigendecomposition through the complex adjoint.
// ---------------------------------------------------------------------------

/// Complex adjoint of a quaternion matrix A = A1 + A2 j:
/// [[A1, A2], [-conj(A2), conj(A1)]], Hermitian when A is.
inline ComplexMatrix complexAdjoint(const QMatrix& a) {
  const Eigen::Index n = a.rows();
  ComplexMatrix m(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Quaterniond& q = a(i, j);
      const std::complex<double> a1(q.w, q.x), a2(q.y, q.z);
      m(i, j) = a1;
      m(i, n + j) = a2;
      m(n + i, j) = -std::conj(a2);
      m(n + i, n + j) = std::conj(a1);
    }
  return m;
}

/// Recovers the quaternion vector x = u - conj(v) j from a complex adjoint
/// eigenvector (u; v).
inline QVector quaternionColumn(const ComplexVector& w) {
  const Eigen::Index n = w.size() / 2;
  QVector x(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const std::complex<double> u = w(t), v = w(n + t);
    x(t) = Quaterniond(u.real(), u.imag(), -v.real(), v.imag());
  }
  return x;
}

inline Quaterniond innerProduct(const QVector& a, const QVector& b) {
  Quaterniond s;
  for (Eigen::Index t = 0; t < a.size(); ++t) s += a(t).conjugate() * b(t);
  return s;
}

inline DualQuaterniond innerProduct(const DQVector& a, const DQVector& b) {
  DualQuaterniond s;
  for (Eigen::Index t = 0; t < a.size(); ++t) s += conj(a(t)) * b(t);
  return s;
}

inline double vectorNorm(const QVector& a) {
  double t = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) t += a(i).squaredNorm();
  return std::sqrt(t);
}

struct QuaternionEigenResult {
  Eigen::VectorXd values;  // descending
  QMatrix vectors;         // orthonormal columns (right module)
  std::vector<std::vector<int>> clusters;
};

/// Eigendecomposition of a quaternion Hermitian matrix: diagonalize the 2n x 2n
/// complex adjoint with Jacobi, pair the doubled spectrum, and extract one
/// orthonormal quaternion eigenvector per pair by pivoted Gram-Schmidt over
/// the right quaternion module.
inline QuaternionEigenResult quaternionHermitianEigen(const QMatrix& a, double clusterTol = 1e-8) {
  const Eigen::Index n = a.rows();
  QuaternionEigenResult out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  if (n == 0) return out;

  const ComplexJacobiResult jac = jacobiHermitian(complexAdjoint(a));
  std::vector<int> order(2 * n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return jac.values(i) > jac.values(j); });

  const double pairTol = 1e-9 * frobeniusNorm(a);
  std::vector<std::pair<int, int>> pairs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const int i1 = order[2 * k], i2 = order[2 * k + 1];
    if (std::abs(jac.values(i1) - jac.values(i2)) > pairTol)
      throw ConvergenceFailure("complex adjoint spectrum failed to pair");
    pairs[k] = {i1, i2};
    out.values(k) = 0.5 * (jac.values(i1) + jac.values(i2));
  }

  // Cluster equal standard eigenvalues (absolute gap tolerance).
  Eigen::Index col = 0;
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && out.values(start) - out.values(stop) <= clusterTol) ++stop;
    const Eigen::Index k = stop - start;
    std::vector<int> cluster(k);
    std::iota(cluster.begin(), cluster.end(), int(start));

    // Candidate quaternion vectors from the 2k complex eigenvectors.
    std::vector<QVector> cand;
    cand.reserve(2 * k);
    for (Eigen::Index m = start; m < stop; ++m) {
      cand.push_back(quaternionColumn(jac.vectors.col(pairs[m].first)));
      cand.push_back(quaternionColumn(jac.vectors.col(pairs[m].second)));
    }
    std::vector<QVector> accepted;
    while (Eigen::Index(accepted.size()) < k) {
      std::size_t best = 0;
      double bestNorm = -1;
      for (std::size_t c = 0; c < cand.size(); ++c) {
        const double nn = vectorNorm(cand[c]);
        if (nn > bestNorm) {
          bestNorm = nn;
          best = c;
        }
      }
      if (bestNorm < 1e-6)
        throw ConvergenceFailure("quaternion eigenvector extraction failed");
      QVector u = cand[best];
      // Second orthogonalization pass for numerical cleanliness.
      for (const QVector& acc : accepted) {
        const Quaterniond ip = innerProduct(acc, u);
        for (Eigen::Index t = 0; t < n; ++t) u(t) -= acc(t) * ip;
      }
      const double unorm = vectorNorm(u);
      for (Eigen::Index t = 0; t < n; ++t) u(t) = u(t) / unorm;
      // Deflate every remaining candidate against the accepted vector.
      for (QVector& x : cand) {
        const Quaterniond ip = innerProduct(u, x);
        for (Eigen::Index t = 0; t < n; ++t) x(t) -= u(t) * ip;
      }
      accepted.push_back(std::move(u));
    }
    for (Eigen::Index m = 0; m < k; ++m) out.vectors.col(col + m) = accepted[m];
    col += k;
    out.clusters.push_back(std::move(cluster));
    start = stop;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dual quaternion Hermitian eigendecomposition.
// ---------------------------------------------------------------------------

struct HermitianEigenDecomposition {
  std::vector<DualNumberd> eigenvalues;  // standard parts descending; dual
                                         // parts descending within a cluster
  DQMatrix eigenvectors;                 // unitary
  std::vector<std::vector<int>> clusters;
};

/// Eigendecomposition of a dual quaternion Hermitian matrix. Standard parts
/// come from the quaternion solve above; within each eigenvalue cluster the
/// dual parts are the eigenvalues of W = U_i^* A_d U_i and the basis is
/// rotated by W's eigenvectors. The dual parts of the eigenvectors solve
/// (A - lambda I) x_d = x lambda_d - A_d x in the orthogonal complement of
/// the cluster eigenspace (zero gauge inside it).
inline HermitianEigenDecomposition hermitianEigen(const DQMatrix& a, double hermTol = 1e-10) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("eigendecomposition of non-square matrix");
  if (!isHermitian(a, hermTol)) throw NotHermitian("input fails the entrywise Hermitian check");

  const QMatrix as = standardPart(a);
  const QMatrix ad = dualPart(a);
  QuaternionEigenResult base = quaternionHermitianEigen(as);

  QMatrix u = base.vectors;
  Eigen::VectorXd duals(n);
  for (const std::vector<int>& cluster : base.clusters) {
    const Eigen::Index c0 = cluster.front();
    const Eigen::Index k = Eigen::Index(cluster.size());
    const QMatrix ui = u.middleCols(c0, k);
    const QMatrix uit = ui.adjoint();
    QMatrix w = uit * (ad * ui).eval();
    const QMatrix wt = w.adjoint();
    w = ((w + wt) * Quaterniond(0.5)).eval();
    const QuaternionEigenResult refined = quaternionHermitianEigen(w);
    u.middleCols(c0, k) = (ui * refined.vectors).eval();
    duals.segment(c0, k) = refined.values;
  }

  // Eigenvector dual parts via the spectral pseudo-inverse of A - lambda I.
  QMatrix udual = QMatrix::Zero(n, n);
  const std::size_t nClusters = base.clusters.size();
  std::vector<QMatrix> blockT(nClusters);  // adjoints of cluster bases
  for (std::size_t m = 0; m < nClusters; ++m) {
    const auto& cm = base.clusters[m];
    blockT[m] = u.middleCols(cm.front(), cm.size()).adjoint();
  }
  for (std::size_t i = 0; i < nClusters; ++i) {
    const double lambda = base.values(base.clusters[i].front());
    for (int cIdx : base.clusters[i]) {
      const QVector x = u.col(cIdx);
      QVector r = (-(ad * x)).eval();
      for (Eigen::Index t = 0; t < n; ++t) r(t) += x(t) * Quaterniond(duals(cIdx));
      QVector xd = QVector::Zero(n);
      for (std::size_t m = 0; m < nClusters; ++m) {
        if (m == i) continue;
        const auto& cm = base.clusters[m];
        QVector coeff = blockT[m] * r;
        const double gap = base.values(cm.front()) - lambda;
        for (Eigen::Index t = 0; t < coeff.size(); ++t) coeff(t) = coeff(t) / gap;
        xd += u.middleCols(cm.front(), cm.size()) * coeff;
      }
      udual.col(cIdx) = xd;
    }
  }

  HermitianEigenDecomposition out;
  out.eigenvalues.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) out.eigenvalues[t] = {base.values(t), duals(t)};
  out.eigenvectors = joinParts(u, udual);
  out.clusters = std::move(base.clusters);
  return out;
}

inline DQMatrix diagonalMatrix(const std::vector<DualNumberd>& values) {
  const Eigen::Index n = Eigen::Index(values.size());
  DQMatrix d = DQMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = values[std::size_t(i)];
  return d;
}

/// ||A U - U Sigma|| in the combined Frobenius norm.
inline double decompositionResidual(const DQMatrix& a, const HermitianEigenDecomposition& e) {
  const DQMatrix lhs = a * e.eigenvectors;
  const DQMatrix rhs = e.eigenvectors * diagonalMatrix(e.eigenvalues);
  return frobeniusNorm((lhs - rhs).eval());
}

// ---------------------------------------------------------------------------
// Rayleigh quotient, Gershgorin discs, definiteness.
// ---------------------------------------------------------------------------

/// Rayleigh quotient x^* A x / x^* x of a Hermitian matrix, a dual number.
inline DualNumberd rayleighQuotient(const DQMatrix& a, const DQVector& x) {
  if (a.rows() != a.cols() || a.cols() != x.size()) throw DimensionMismatch("rayleigh shapes");
  if (!isHermitian(a)) throw NotHermitian("rayleigh quotient requires a Hermitian matrix");
  const DQVector y = a * x;
  const DualQuaterniond num = innerProduct(x, y);
  const DualQuaterniond den = innerProduct(x, x);
  if (den.s.w == 0.0) throw NonAppreciable("x^* x has zero standard part");
  return DualNumberd(num.s.w, num.d.w) / DualNumberd(den.s.w, den.d.w);
}

struct GershgorinReport {
  std::vector<DualNumberd> centers;
  std::vector<DualNumberd> radii;
  std::vector<DualNumberd> eigenvalues;
  std::vector<bool> containedDual;      // containment under the dual total order
  std::vector<bool> containedStandard;  // standard-part-only containment
  bool allContainedDual = true;
  bool allContainedStandard = true;
};

/// Gershgorin discs of a Hermitian matrix: centers are the (dual number)
/// diagonal entries, radii the dual-arithmetic sums of off-diagonal entry
/// magnitudes. Containment flags carry a relative slack of 1e-12; eigenvalues
/// can sit exactly on a disc boundary.
inline GershgorinReport gershgorin(const DQMatrix& a, const std::vector<DualNumberd>& eigenvalues) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("gershgorin of non-square matrix");
  if (!isHermitian(a)) throw NotHermitian("Gershgorin analysis requires a Hermitian matrix");

  GershgorinReport rep;
  rep.eigenvalues = eigenvalues;
  rep.centers.reserve(n);
  rep.radii.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rep.centers.push_back({a(i, i).s.w, a(i, i).d.w});
    DualNumberd radius;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) radius += a(i, j).magnitude();
    rep.radii.push_back(radius);
  }

  const double slack = 1e-12 * std::max(1.0, frobeniusNorm(a));
  for (const DualNumberd& lam : eigenvalues) {
    bool dual = false, standard = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const DualNumberd dist = abs(lam - rep.centers[std::size_t(i)]);
      const DualNumberd& radius = rep.radii[std::size_t(i)];
      if (dist <= DualNumberd(radius.s + slack, radius.d + slack)) dual = true;
      if (std::abs(lam.s - rep.centers[std::size_t(i)].s) <= radius.s + slack) standard = true;
    }
    rep.containedDual.push_back(dual);
    rep.containedStandard.push_back(standard);
    rep.allContainedDual = rep.allContainedDual && dual;
    rep.allContainedStandard = rep.allContainedStandard && standard;
  }
  return rep;
}

inline GershgorinReport gershgorin(const DQMatrix& a) {
  return gershgorin(a, hermitianEigen(a).eigenvalues);
}

enum class Definiteness { PositiveDefinite, PositiveSemidefinite, Indefinite };

/// Sign classification of a Hermitian spectrum under the dual total order.
/// Components within `zeroTol` of zero are treated as zero.
inline Definiteness classifyDefiniteness(const std::vector<DualNumberd>& eigenvalues,
                                         double zeroTol = 1e-10) {
  bool allPositiveAppreciable = true;
  for (const DualNumberd& lam : eigenvalues) {
    const bool stdZero = std::abs(lam.s) <= zeroTol;
    if (lam.s < -zeroTol || (stdZero && lam.d < -zeroTol)) return Definiteness::Indefinite;
    if (!(lam.s > zeroTol)) allPositiveAppreciable = false;
  }
  if (!eigenvalues.empty() && allPositiveAppreciable) return Definiteness::PositiveDefinite;
  return Definiteness::PositiveSemidefinite;
}

inline Definiteness classifyDefiniteness(const DQMatrix& a) {
  if (!isHermitian(a)) throw NotHermitian("definiteness requires a Hermitian matrix");
  return classifyDefiniteness(hermitianEigen(a).eigenvalues);
}

inline const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive-definite";
    case Definiteness::PositiveSemidefinite: return "positive-semidefinite";
    default: return "indefinite";
  }
}

}  // namespace dqform
