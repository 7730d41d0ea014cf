#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "dqform/dual_number.hpp"
#include "dqform/errors.hpp"
#include "dqform/quaternion.hpp"

namespace dqform {

/// Dual quaternion s + d*eps with quaternion standard part s and dual part d.
template <typename T = double>
struct DualQuaternion {
  Quaternion<T> s{};
  Quaternion<T> d{};

  constexpr DualQuaternion() = default;
  constexpr DualQuaternion(T real) : s(real) {}
  constexpr DualQuaternion(const Quaternion<T>& standard) : s(standard) {}
  constexpr DualQuaternion(const DualNumber<T>& n) : s(n.s), d(n.d) {}
  constexpr DualQuaternion(const Quaternion<T>& standard, const Quaternion<T>& dual)
      : s(standard), d(dual) {}

  constexpr bool operator==(const DualQuaternion&) const = default;

  constexpr DualQuaternion operator-() const { return {-s, -d}; }

  friend constexpr DualQuaternion operator+(const DualQuaternion& a, const DualQuaternion& b) {
    return {a.s + b.s, a.d + b.d};
  }
  friend constexpr DualQuaternion operator-(const DualQuaternion& a, const DualQuaternion& b) {
    return {a.s - b.s, a.d - b.d};
  }
  // p q = pq + (p q_d + p_d q) eps
  friend constexpr DualQuaternion operator*(const DualQuaternion& a, const DualQuaternion& b) {
    return {a.s * b.s, a.s * b.d + a.d * b.s};
  }

  DualQuaternion& operator+=(const DualQuaternion& o) { return *this = *this + o; }
  DualQuaternion& operator-=(const DualQuaternion& o) { return *this = *this - o; }
  DualQuaternion& operator*=(const DualQuaternion& o) { return *this = *this * o; }

  constexpr DualQuaternion conjugate() const { return {s.conjugate(), d.conjugate()}; }

  constexpr bool isAppreciable() const { return !s.isZero(); }
  constexpr bool isImaginary(T tol = T(0)) const {
    return s.isImaginary(tol) && d.isImaginary(tol);
  }
  constexpr bool isZero() const { return s.isZero() && d.isZero(); }

  /// Magnitude as a dual number: |s| + <s,d>/|s| eps when appreciable,
  /// |d| eps otherwise.
  DualNumber<T> magnitude() const {
    if (!s.isZero()) {
      const T n = s.norm();
      return {n, dot(s, d) / n};
    }
    return {T(0), d.norm()};
  }

  /// Inverse s^-1 - s^-1 d s^-1 eps; defined exactly for appreciable inputs.
  DualQuaternion inverse() const {
    if (s.isZero()) throw NonAppreciable("dual quaternion with zero standard part");
    const Quaternion<T> si = s.inverse();
    return {si, -(si * d * si)};
  }
};

template <typename T>
constexpr DualQuaternion<T> conj(const DualQuaternion<T>& q) {
  return q.conjugate();
}

// Eigen scalar-trait hooks (see quaternion.hpp).
template <typename T>
constexpr T real(const DualQuaternion<T>& q) {
  return q.s.w;
}
template <typename T>
T imag(const DualQuaternion<T>& q) {
  return std::sqrt(q.s.squaredNorm() - q.s.w * q.s.w + q.d.squaredNorm());
}
template <typename T>
constexpr T abs2(const DualQuaternion<T>& q) {
  return q.s.squaredNorm() + q.d.squaredNorm();
}

enum class Integrator { Euler, Rk4 };

template <typename T>
class Twist;

/// Rigid-body pose as a unit dual quaternion q + (eps/2) q p_b, where q is
/// the attitude and p_b the body-frame position. Construction accepts dual
/// quaternions within 1e-9 of the unit constraints (|q| = 1 and
/// q q_d* + q_d q* = 0) and renormalizes: the standard part is scaled to
/// unit norm, the dual part gets its component along q removed.
template <typename T = double>
class Pose {
 public:
  Pose() : dq_(T(1)) {}

  explicit Pose(const DualQuaternion<T>& q) {
    const T n = q.s.norm();
    if (std::abs(n - T(1)) > T(1e-9)) throw NotUnit("standard part norm " + std::to_string(double(n)));
    Quaternion<T> sn = q.s / n;
    Quaternion<T> dn = q.d;
    const T ortho = dot(sn, dn);
    if (std::abs(ortho) > T(1e-9)) throw NotUnit("q q_d* + q_d q* = " + std::to_string(2 * double(ortho)));
    dq_ = {sn, dn - sn * Quaternion<T>(ortho)};
  }

  /// Eq-of-motion form: rotation q succeeded by body-frame translation p_b.
  Pose(const UnitQuaternion<T>& rotation, const Quaternion<T>& translationBody) {
    if (!translationBody.isImaginary(T(1e-12)))
      throw NotImaginary("body translation must be imaginary");
    const Quaternion<T>& q = rotation.value();
    dq_ = {q, q * translationBody / T(2)};
  }

  const DualQuaternion<T>& dq() const { return dq_; }
  operator const DualQuaternion<T>&() const { return dq_; }

  UnitQuaternion<T> rotation() const { return uncheckedUnit(dq_.s); }

  /// Body-frame translation p_b = 2 q* q_d (imaginary).
  Quaternion<T> translation() const {
    Quaternion<T> p = dq_.s.conjugate() * dq_.d * Quaternion<T>(T(2));
    p.w = T(0);
    return p;
  }

  Pose conjugate() const { return Pose(dq_.conjugate(), Unchecked{}); }
  Pose inverse() const { return conjugate(); }

  friend Pose operator*(const Pose& a, const Pose& b) {
    return Pose(renormalize(a.dq_ * b.dq_), Unchecked{});
  }

 private:
  struct Unchecked {};
  Pose(const DualQuaternion<T>& q, Unchecked) : dq_(q) {}

  static DualQuaternion<T> renormalize(const DualQuaternion<T>& q) {
    Quaternion<T> sn = q.s / q.s.norm();
    return {sn, q.d - sn * Quaternion<T>(dot(sn, q.d))};
  }

  DualQuaternion<T> dq_;

  template <typename U>
  friend Pose<U> uncheckedPose(const DualQuaternion<U>& q);
  template <typename U>
  friend Pose<U> kinematicsStep(const Pose<U>&, const Twist<U>&, U, Integrator);
};

template <typename T>
Pose<T> uncheckedPose(const DualQuaternion<T>& q) {
  return Pose<T>(q, typename Pose<T>::Unchecked{});
}

/// Body-frame twist: imaginary dual quaternion w + eps*(pdot + w x p).
template <typename T = double>
class Twist {
 public:
  Twist() = default;

  explicit Twist(const DualQuaternion<T>& xi) : xi_(xi) {
    if (!xi.isImaginary(T(1e-12))) throw NotImaginary("twist must be imaginary");
  }

  Twist(const Quaternion<T>& angular, const Quaternion<T>& dual) : Twist(DualQuaternion<T>(angular, dual)) {}

  /// Assembles a twist from body-frame angular velocity, linear velocity and
  /// position: xi = w + eps*(pdot + w x p).
  static Twist fromBodyVelocities(const Quaternion<T>& angular, const Quaternion<T>& linear,
                                  const Quaternion<T>& position) {
    if (!angular.isImaginary(T(1e-12)) || !linear.isImaginary(T(1e-12)) ||
        !position.isImaginary(T(1e-12)))
      throw NotImaginary("twist velocity inputs must be imaginary");
    return Twist(DualQuaternion<T>(angular, linear + cross(angular, position)));
  }

  const DualQuaternion<T>& xi() const { return xi_; }
  const Quaternion<T>& angular() const { return xi_.s; }

 private:
  DualQuaternion<T> xi_{};
};

/// One integration step of the kinematics dq/dt = (1/2) q xi with the twist
/// held constant over the step, followed by renormalization back onto the
/// unit constraint. Steps whose renormalization correction exceeds 1e-3 are
/// rejected.
template <typename T>
Pose<T> kinematicsStep(const Pose<T>& pose, const Twist<T>& twist, T dt, Integrator scheme) {
  if (!(dt > T(0))) throw DomainError("dt must be positive");
  const DualQuaternion<T>& xi = twist.xi();
  const auto f = [&xi](const DualQuaternion<T>& q) { return q * xi * DualQuaternion<T>(T(0.5)); };

  const DualQuaternion<T>& q0 = pose.dq();
  DualQuaternion<T> q1;
  if (scheme == Integrator::Euler) {
    q1 = q0 + f(q0) * DualQuaternion<T>(dt);
  } else {
    const DualQuaternion<T> k1 = f(q0);
    const DualQuaternion<T> k2 = f(q0 + k1 * DualQuaternion<T>(dt / T(2)));
    const DualQuaternion<T> k3 = f(q0 + k2 * DualQuaternion<T>(dt / T(2)));
    const DualQuaternion<T> k4 = f(q0 + k3 * DualQuaternion<T>(dt));
    q1 = q0 + (k1 + k2 * DualQuaternion<T>(T(2)) + k3 * DualQuaternion<T>(T(2)) + k4) *
                  DualQuaternion<T>(dt / T(6));
  }

  const T n = q1.s.norm();
  const Quaternion<T> sn = q1.s / n;
  const T ortho = dot(sn, q1.d);
  if (std::max(std::abs(n - T(1)), std::abs(ortho)) > T(1e-3))
    throw StepRejected("renormalization correction exceeds 1e-3; reduce dt");
  return Pose<T>(DualQuaternion<T>(sn, q1.d - sn * Quaternion<T>(ortho)),
                 typename Pose<T>::Unchecked{});
}

/// Eq-of-motion logarithm: ln q = (1/2)(theta*axis + eps p_b), imaginary.
template <typename T>
DualQuaternion<T> log(const Pose<T>& pose) {
  return {log(pose.rotation()), pose.translation() / T(2)};
}

/// Inverse of log: assembles the pose with attitude exp(v.s) and body
/// translation 2*v.d.
template <typename T>
Pose<T> exp(const DualQuaternion<T>& v) {
  if (!v.isImaginary(T(1e-12))) throw NotImaginary("pose exp argument must be imaginary");
  Quaternion<T> pb = v.d * Quaternion<T>(T(2));
  pb.w = T(0);
  return Pose<T>(exp(v.s), pb);
}

/// Adjoint action Ad_q v = q v q* of a pose on an imaginary dual quaternion.
template <typename T>
DualQuaternion<T> adjoint(const Pose<T>& pose, const DualQuaternion<T>& v) {
  if (!v.isImaginary(T(1e-12))) throw NotImaginary("adjoint argument must be imaginary");
  DualQuaternion<T> r = pose.dq() * v * pose.dq().conjugate();
  r.s.w = T(0);
  r.d.w = T(0);
  return r;
}

/// Left-invariant error from `pose` to `target`: q_e = q_t* q.
template <typename T>
Pose<T> leftInvariantError(const Pose<T>& target, const Pose<T>& pose) {
  return target.conjugate() * pose;
}

using DualQuaterniond = DualQuaternion<double>;
using Posed = Pose<double>;
using Twistd = Twist<double>;

inline std::string to_string(const DualQuaterniond& q) {
  return "(" + to_string(q.s) + ") + (" + to_string(q.d) + ")\xce\xb5";
}

inline std::ostream& operator<<(std::ostream& os, const DualQuaterniond& q) {
  return os << to_string(q);
}

}  // namespace dqform
