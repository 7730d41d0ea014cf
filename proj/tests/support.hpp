// Shared test fixtures: reproducible random instances (splitmix64-backed)
// and independent oracles the implementation is checked against.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "dqform/dq_matrix.hpp"
#include "dqform/dual_quaternion.hpp"
#include "dqform/graph.hpp"
#include "dqform/hermitian_eigen.hpp"
#include "dqform/random.hpp"

namespace dqtest {

using namespace dqform;

inline Quaterniond randomQuaternion(SplitMix64& rng, double scale = 1.0) {
  return {scale * rng.gaussian(), scale * rng.gaussian(), scale * rng.gaussian(),
          scale * rng.gaussian()};
}

inline Quaterniond randomImaginary(SplitMix64& rng, double scale = 1.0) {
  return {0.0, scale * rng.gaussian(), scale * rng.gaussian(), scale * rng.gaussian()};
}

inline UnitQuaterniond randomUnitQuaternion(SplitMix64& rng) {
  Quaterniond q = randomQuaternion(rng);
  while (q.norm() < 1e-6) q = randomQuaternion(rng);
  return UnitQuaterniond(q / q.norm());
}

inline Quaterniond randomUnitAxis(SplitMix64& rng) {
  Quaterniond v = randomImaginary(rng);
  while (v.norm() < 1e-6) v = randomImaginary(rng);
  return v / v.norm();
}

inline DualQuaterniond randomDualQuaternion(SplitMix64& rng, double scale = 1.0) {
  return {randomQuaternion(rng, scale), randomQuaternion(rng, scale)};
}

inline Posed randomPose(SplitMix64& rng, double translationScale = 1.0) {
  return Posed(randomUnitQuaternion(rng), randomImaginary(rng, translationScale));
}

inline Twistd randomTwist(SplitMix64& rng, double scale = 1.0) {
  return Twistd(randomImaginary(rng, scale), randomImaginary(rng, scale));
}

/// Random Hermitian dual quaternion matrix (G + G*)/2 with gaussian G; the
/// dual part generically does not commute with the standard part.
inline DQMatrix randomHermitian(SplitMix64& rng, int n, double scale = 1.0) {
  DQMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = randomDualQuaternion(rng, scale);
  const DQMatrix gt = g.adjoint();
  return ((g + gt) * DualQuaterniond(0.5)).eval();
}

inline DQVector randomDualQuaternionVector(SplitMix64& rng, int n, double scale = 1.0) {
  DQVector v(n);
  for (int i = 0; i < n; ++i) v(i) = randomDualQuaternion(rng, scale);
  return v;
}

/// Random connected graph: a random attachment tree plus `extraEdges`
/// distinct chords.
inline VisibilityGraph randomConnectedGraph(SplitMix64& rng, int n, int extraEdges) {
  VisibilityGraph g(n);
  for (int v = 1; v < n; ++v) g.addEdge(int(rng.below(std::uint64_t(v))), v);
  const int maxEdges = n * (n - 1) / 2;
  int attempts = 0;
  while (g.edgeCount() < std::min(maxEdges, n - 1 + extraEdges) && attempts < 200) {
    const int a = int(rng.below(std::uint64_t(n)));
    const int b = int(rng.below(std::uint64_t(n)));
    ++attempts;
    if (a != b && !g.hasEdge(a, b)) g.addEdge(a, b);
  }
  return g;
}

inline PoseAssignment randomPoseAssignment(SplitMix64& rng, int n) {
  PoseAssignment p;
  for (int i = 0; i < n; ++i) p.poses.push_back(randomPose(rng));
  return p;
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

/// Independent standard-part eigenvalues: Eigen's SelfAdjointEigenSolver on
/// the complex adjoint, deduplicated pairwise. Descending.
inline std::vector<double> standardSpectrumOracle(const DQMatrix& a) {
  const ComplexMatrix m = complexAdjoint(standardPart(a));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd all = solver.eigenvalues();  // ascending
  std::vector<double> out;
  for (Eigen::Index i = all.size() - 1; i >= 1; i -= 2)
    out.push_back(0.5 * (all(i) + all(i - 1)));
  return out;
}

/// Brute-force 2x2 Hermitian oracle: standard eigenvalues from the
/// characteristic equation lambda^2 - tr lambda + (ad - |q|^2) = 0 of
/// [[a, q], [q*, d]], eigenvectors in closed form, dual parts from
/// lambda_d = x^* A_d x / x^* x. Valid when the two standard eigenvalues are
/// distinct.
struct Oracle2x2Result {
  DualNumberd high;
  DualNumberd low;
};

inline Oracle2x2Result oracle2x2(const DQMatrix& m) {
  const double a = m(0, 0).s.w;
  const double d = m(1, 1).s.w;
  const Quaterniond q = m(0, 1).s;
  const double mid = 0.5 * (a + d);
  const double rad = std::sqrt(0.25 * (a - d) * (a - d) + q.squaredNorm());
  const double hi = mid + rad, lo = mid - rad;

  const QMatrix ad = dualPart(m);
  const auto dualFor = [&](double lambda) {
    QVector x(2);
    if (q.norm() > 1e-12) {
      x(0) = q;
      x(1) = Quaterniond(lambda - a);
    } else {
      // diagonal standard part: eigenvector is a coordinate axis
      x(0) = Quaterniond(std::abs(lambda - a) < std::abs(lambda - d) ? 1.0 : 0.0);
      x(1) = Quaterniond(x(0).w == 1.0 ? 0.0 : 1.0);
    }
    Quaterniond num;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) num += x(r).conjugate() * ad(r, c) * x(c);
    const double den = x(0).squaredNorm() + x(1).squaredNorm();
    return num.w / den;
  };
  return {{hi, dualFor(hi)}, {lo, dualFor(lo)}};
}

/// Real 4x4 matrix of left multiplication by a quaternion, for building the
/// split real-valued reference dynamics.
inline Eigen::Matrix4d leftMultiplicationMatrix(const Quaterniond& q) {
  Eigen::Matrix4d m;
  m << q.w, -q.x, -q.y, -q.z,
       q.x,  q.w, -q.z,  q.y,
       q.y,  q.z,  q.w, -q.x,
       q.z, -q.y,  q.x,  q.w;
  return m;
}

/// Real representation of the coupled consensus dynamics
/// (z', z_d') = (-L z, -(L z_d + L_d z)) as one 8n x 8n matrix acting on the
/// stacked coefficient vector (vec z, vec z_d).
inline Eigen::MatrixXd realSystemMatrix(const DQMatrix& lap) {
  const Eigen::Index n = lap.rows();
  Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(8 * n, 8 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const Eigen::Matrix4d ls = leftMultiplicationMatrix(lap(i, j).s);
      const Eigen::Matrix4d ld = leftMultiplicationMatrix(lap(i, j).d);
      sys.block<4, 4>(4 * i, 4 * j) -= ls;
      sys.block<4, 4>(4 * n + 4 * i, 4 * n + 4 * j) -= ls;
      sys.block<4, 4>(4 * n + 4 * i, 4 * j) -= ld;
    }
  return sys;
}

inline Eigen::VectorXd realStateVector(const DQVector& z) {
  const Eigen::Index n = z.size();
  Eigen::VectorXd v(8 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v.segment<4>(4 * i) << z(i).s.w, z(i).s.x, z(i).s.y, z(i).s.z;
    v.segment<4>(4 * n + 4 * i) << z(i).d.w, z(i).d.x, z(i).d.y, z(i).d.z;
  }
  return v;
}

/// Real graph Laplacian spectrum (descending) via Eigen's self-adjoint
/// solver: the similarity oracle for consistent configuration Laplacians.
inline std::vector<double> realLaplacianSpectrum(const VisibilityGraph& g) {
  const int n = g.vertexCount();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : g.edges()) {
    lap(i, j) = -1;
    lap(j, i) = -1;
    lap(i, i) += 1;
    lap(j, j) += 1;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = n - 1; i >= 0; --i) out.push_back(solver.eigenvalues()(i));
  return out;
}

inline double maxAbs8(const DualQuaterniond& q) {
  return maxAbsComponent(q);
}

}  // namespace dqtest
