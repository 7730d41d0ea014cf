#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dqform/dq_matrix.hpp"
#include "dqform/dual_quaternion.hpp"
#include "dqform/errors.hpp"
#include "dqform/graph.hpp"
#include "dqform/hermitian_eigen.hpp"

namespace dqform {

/// A consensus problem instance: graph, Laplacian bundle, point states z
/// (general dual quaternions), optional target formation, and integration
/// parameters.
struct Scenario {
  VisibilityGraph graph;
  LaplacianBundle bundle;
  DQVector z0;
  std::optional<DQVector> target;
  Integrator integrator = Integrator::Rk4;
  double dt = 1e-3;
  double horizon = 20.0;
};

struct TrajectoryLog {
  std::vector<double> t;
  std::vector<DQVector> z;
  std::vector<std::pair<double, double>> disagreement;  // ||Lz|| standard, dual parts
};

inline std::pair<double, double> vectorNormParts(const DQVector& v) {
  double s = 0, d = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    s += v(i).s.squaredNorm();
    d += v(i).d.squaredNorm();
  }
  return {std::sqrt(s), std::sqrt(d)};
}

/// The two statements of the control law, which coincide exactly for real
/// unit weights but not in general:
///  - literal:   u_i = sum over edges (i,j) of l_ij (z_j - z_i),
///  - canonical: u = -L z (the closed-loop form the stability story uses).
struct ControlInputs {
  DQVector literal;
  DQVector canonical;
  double maxDifference = 0;  // max entry magnitude of literal - canonical
};

inline ControlInputs controlInputs(const Scenario& s, const DQVector& z) {
  const Eigen::Index n = s.bundle.laplacian.rows();
  if (z.size() != n) throw DimensionMismatch("state size does not match the Laplacian");
  ControlInputs out;
  out.canonical = -(s.bundle.laplacian * z);
  out.literal = DQVector::Zero(n);
  for (const auto& [i, j] : s.graph.edges()) {
    out.literal(i) += s.bundle.laplacian(i, j) * (z(j) - z(i));
    out.literal(j) += s.bundle.laplacian(j, i) * (z(i) - z(j));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const DualQuaterniond diff = out.literal(i) - out.canonical(i);
    out.maxDifference = std::max(out.maxDifference, std::sqrt(abs2(diff)));
  }
  return out;
}

namespace detail {

inline bool allFinite(const DQVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const DualQuaterniond& q = v(i);
    for (double c : {q.s.w, q.s.x, q.s.y, q.s.z, q.d.w, q.d.x, q.d.y, q.d.z})
      if (!std::isfinite(c)) return false;
  }
  return true;
}

}  // namespace detail

/// Integrates the closed-loop consensus dynamics dz/dt = -L z with a fixed
/// step. Logs every step. Throws Unstable if the disagreement norm grows
/// beyond 10x its initial value, StepRejected on non-finite state.
inline TrajectoryLog simulate(const Scenario& s) {
  if (!(s.dt > 0) || s.horizon < s.dt) throw DomainError("need dt > 0 and horizon >= dt");
  const DQMatrix& lap = s.bundle.laplacian;
  if (s.z0.size() != lap.rows()) throw DimensionMismatch("z0 size does not match the Laplacian");

  const auto f = [&lap](const DQVector& z) -> DQVector { return -(lap * z); };
  const auto disagreement = [&lap](const DQVector& z) { return vectorNormParts(lap * z); };

  TrajectoryLog out;
  DQVector z = s.z0;
  auto dis = disagreement(z);
  const double initial = std::hypot(dis.first, dis.second);
  const double growthLimit = 10.0 * initial;
  out.t.push_back(0.0);
  out.z.push_back(z);
  out.disagreement.push_back(dis);

  const long steps = std::lround(s.horizon / s.dt);
  const DualQuaterniond h(s.dt), h2(s.dt / 2), h6(s.dt / 6);
  for (long k = 1; k <= steps; ++k) {
    if (s.integrator == Integrator::Euler) {
      z = z + f(z) * h;
    } else {
      const DQVector k1 = f(z);
      const DQVector k2 = f(z + k1 * h2);
      const DQVector k3 = f(z + k2 * h2);
      const DQVector k4 = f(z + k3 * h);
      z = z + (k1 + k2 * DualQuaterniond(2.0) + k3 * DualQuaterniond(2.0) + k4) * h6;
    }
    if (!detail::allFinite(z)) throw StepRejected("non-finite state at t = " + std::to_string(k * s.dt));
    dis = disagreement(z);
    const double now = std::hypot(dis.first, dis.second);
    if (now > growthLimit && now > 1e-9)
      throw Unstable("disagreement norm grew over 10x its initial value");
    out.t.push_back(double(k) * s.dt);
    out.z.push_back(z);
    out.disagreement.push_back(dis);
  }
  return out;
}

/// Residual ||L v|| of the target formation as a dual number carrying the
/// standard and dual norm components; <= 1e-8 in both certifies an
/// equilibrium.
inline DualNumberd checkTarget(const Scenario& s) {
  if (!s.target) throw NoTarget("scenario has no target formation");
  if (s.target->size() != s.bundle.laplacian.rows())
    throw DimensionMismatch("target size does not match the Laplacian");
  const auto parts = vectorNormParts(s.bundle.laplacian * (*s.target));
  return {parts.first, parts.second};
}

/// Columns of the eigenvector matrix whose eigenvalues vanish: a basis of the
/// equilibrium set, from which valid targets can be assembled.
inline DQMatrix equilibriumBasis(const LaplacianSpectrum& spectrum, double zeroTol = 1e-8) {
  const Eigen::Index n = spectrum.eigen.eigenvectors.rows();
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < Eigen::Index(spectrum.eigen.eigenvalues.size()); ++i) {
    const DualNumberd& lam = spectrum.eigen.eigenvalues[std::size_t(i)];
    if (std::abs(lam.s) <= zeroTol && std::abs(lam.d) <= zeroTol) cols.push_back(i);
  }
  DQMatrix basis(n, Eigen::Index(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) basis.col(Eigen::Index(c)) = spectrum.eigen.eigenvectors.col(cols[c]);
  return basis;
}

enum class StabilityCertificate { Stable, Marginal, Unknown };

inline const char* to_string(StabilityCertificate c) {
  switch (c) {
    case StabilityCertificate::Stable: return "stable";
    case StabilityCertificate::Marginal: return "marginal";
    default: return "unknown";
  }
}

/// Stability of the consensus dynamics from the Laplacian spectrum:
/// stable when the spectrum is PSD with exactly one zero eigenvalue,
/// marginal when more than one eigenvalue vanishes (disconnected consensus;
/// n = 1, whose whole spectrum is the single zero, is also reported
/// marginal), unknown when some eigenvalue falls inside the tolerance band
/// between "zero" (1e-8) and "clearly positive" (1e-7).
inline StabilityCertificate stabilityCertificate(const LaplacianBundle& bundle) {
  const LaplacianSpectrum spectrum = laplacianSpectrum(bundle);
  const double zeroTol = 1e-8, clearTol = 1e-7;
  int zeros = 0;
  bool ambiguous = false;
  for (const DualNumberd& lam : spectrum.eigen.eigenvalues) {
    if (std::abs(lam.s) <= zeroTol && std::abs(lam.d) <= zeroTol) {
      ++zeros;
    } else if (lam.s > clearTol || (std::abs(lam.s) <= zeroTol && lam.d > clearTol)) {
      // clearly positive
    } else {
      ambiguous = true;  // inside the band, or negative beyond tolerance
    }
  }
  if (ambiguous) return StabilityCertificate::Unknown;
  if (zeros > 1 || bundle.laplacian.rows() == 1) return StabilityCertificate::Marginal;
  if (zeros == 1) return StabilityCertificate::Stable;
  return StabilityCertificate::Unknown;  // no zero at all: not a Laplacian spectrum
}

struct PoseTrajectoryLog {
  std::vector<double> t;
  std::vector<std::vector<Posed>> poses;
  double maxUnitDrift = 0;  // worst |constraint violation| seen before renormalization
};

/// Twist source for the pose-level mode: agent index and time to twist.
using TwistLaw = std::function<Twistd(int agent, double t)>;

/// Integrates each agent's kinematics dq/dt = (1/2) q xi with per-agent
/// twists from `law`, logging every step.
inline PoseTrajectoryLog simulatePoseMode(const PoseAssignment& assignment, const TwistLaw& law,
                                          double dt, double horizon,
                                          Integrator scheme = Integrator::Rk4) {
  if (!(dt > 0) || horizon < dt) throw DomainError("need dt > 0 and horizon >= dt");
  const int n = int(assignment.poses.size());
  PoseTrajectoryLog out;
  std::vector<Posed> current = assignment.poses;
  out.t.push_back(0.0);
  out.poses.push_back(current);
  const long steps = std::lround(horizon / dt);
  for (long k = 1; k <= steps; ++k) {
    const double t = double(k - 1) * dt;
    for (int i = 0; i < n; ++i) {
      current[std::size_t(i)] = kinematicsStep(current[std::size_t(i)], law(i, t), dt, scheme);
      const DualQuaterniond& q = current[std::size_t(i)].dq();
      const double drift =
          std::max(std::abs(q.s.norm() - 1.0), std::abs(dot(q.s, q.d)));
      out.maxUnitDrift = std::max(out.maxUnitDrift, drift);
    }
    out.t.push_back(double(k) * dt);
    out.poses.push_back(current);
  }
  return out;
}

}  // namespace dqform
