#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "dqform/errors.hpp"

namespace dqform {

/// Hamilton quaternion w + x*i + y*j + z*k over a real scalar type.
template <typename T = double>
struct Quaternion {
  T w{}, x{}, y{}, z{};

  constexpr Quaternion() = default;
  constexpr Quaternion(T real) : w(real) {}
  constexpr Quaternion(T w_, T x_, T y_, T z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion i() { return {T(0), T(1), T(0), T(0)}; }
  static constexpr Quaternion j() { return {T(0), T(0), T(1), T(0)}; }
  static constexpr Quaternion k() { return {T(0), T(0), T(0), T(1)}; }

  constexpr bool operator==(const Quaternion&) const = default;

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

  friend constexpr Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend constexpr Quaternion operator/(const Quaternion& a, T s) {
    return {a.w / s, a.x / s, a.y / s, a.z / s};
  }

  Quaternion& operator+=(const Quaternion& o) { return *this = *this + o; }
  Quaternion& operator-=(const Quaternion& o) { return *this = *this - o; }
  Quaternion& operator*=(const Quaternion& o) { return *this = *this * o; }

  constexpr T squaredNorm() const { return w * w + x * x + y * y + z * z; }
  T norm() const { return std::sqrt(squaredNorm()); }

  constexpr Quaternion conjugate() const { return {w, -x, -y, -z}; }

  Quaternion inverse() const {
    const T n2 = squaredNorm();
    if (n2 == T(0)) throw ZeroDivisor("zero quaternion");
    return conjugate() / n2;
  }

  constexpr T realPart() const { return w; }
  constexpr Quaternion imaginaryPart() const { return {T(0), x, y, z}; }
  constexpr bool isImaginary(T tol = T(0)) const { return std::abs(w) <= tol; }
  constexpr bool isZero() const { return w == T(0) && x == T(0) && y == T(0) && z == T(0); }

  Quaternion normalized() const {
    const T n = norm();
    if (n == T(0)) throw ZeroDivisor("cannot normalize zero quaternion");
    return *this / n;
  }
};

template <typename T>
constexpr Quaternion<T> conj(const Quaternion<T>& q) {
  return q.conjugate();
}

// Eigen scalar-trait hooks: real() is the real part; imag() is the norm of
// the imaginary part (zero exactly when the quaternion is real); abs2() the
// squared 4-norm.
template <typename T>
constexpr T real(const Quaternion<T>& q) {
  return q.w;
}
template <typename T>
T imag(const Quaternion<T>& q) {
  return std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
}
template <typename T>
constexpr T abs2(const Quaternion<T>& q) {
  return q.squaredNorm();
}

/// Euclidean inner product of the four components.
template <typename T>
constexpr T dot(const Quaternion<T>& a, const Quaternion<T>& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Cross product of (the imaginary parts of) two quaternions, as an
/// imaginary quaternion. Equals Im(ab - ba)/2 for imaginary a, b.
template <typename T>
constexpr Quaternion<T> cross(const Quaternion<T>& a, const Quaternion<T>& b) {
  return {T(0), a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Unit quaternion (rotation). Construction accepts quaternions within 1e-9
/// of unit norm and renormalizes; anything farther off is rejected.
template <typename T = double>
class UnitQuaternion {
 public:
  UnitQuaternion() : q_(T(1)) {}

  explicit UnitQuaternion(const Quaternion<T>& q) {
    const T n = q.norm();
    if (std::abs(n - T(1)) > T(1e-9)) throw NotUnit("quaternion norm " + std::to_string(double(n)));
    q_ = q / n;
  }

  const Quaternion<T>& value() const { return q_; }
  operator const Quaternion<T>&() const { return q_; }

  UnitQuaternion conjugate() const { return UnitQuaternion(q_.conjugate(), Unchecked{}); }
  UnitQuaternion inverse() const { return conjugate(); }

  friend UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
    Quaternion<T> p = a.q_ * b.q_;
    return UnitQuaternion(p / p.norm(), Unchecked{});
  }

 private:
  struct Unchecked {};
  UnitQuaternion(const Quaternion<T>& q, Unchecked) : q_(q) {}
  Quaternion<T> q_;

  template <typename U>
  friend UnitQuaternion<U> uncheckedUnit(const Quaternion<U>& q);
};

template <typename T>
UnitQuaternion<T> uncheckedUnit(const Quaternion<T>& q) {
  return UnitQuaternion<T>(q, typename UnitQuaternion<T>::Unchecked{});
}

/// Rotation of `angle` radians about the imaginary unit `axis`:
/// cos(angle/2) + sin(angle/2)*axis.
template <typename T>
UnitQuaternion<T> rotationFromAxisAngle(T angle, const Quaternion<T>& axis) {
  if (std::abs(axis.norm() - T(1)) > T(1e-9) || !axis.isImaginary(T(1e-9)))
    throw BadAxis("axis must be an imaginary unit quaternion");
  const T h = angle / T(2);
  Quaternion<T> q = Quaternion<T>(std::cos(h)) + axis.imaginaryPart() * Quaternion<T>(std::sin(h));
  return uncheckedUnit(q / q.norm());
}

/// exp of an imaginary quaternion v = (theta/2)*axis.
template <typename T>
UnitQuaternion<T> exp(const Quaternion<T>& v) {
  if (!v.isImaginary(T(1e-12))) throw NotImaginary("exp argument must be imaginary");
  const T half = imag(v);
  if (half < T(1e-300)) return UnitQuaternion<T>();
  return rotationFromAxisAngle(T(2) * half, v.imaginaryPart() / half);
}

/// log of a unit quaternion: (theta/2)*axis with theta = 2*atan2(|Im q|, Re q)
/// in [0, 2*pi). The identity (and anything within 1e-12 of real) maps to 0.
template <typename T>
Quaternion<T> log(const UnitQuaternion<T>& uq) {
  const Quaternion<T>& q = uq.value();
  const T im = imag(q);
  if (im < T(1e-12)) return Quaternion<T>();
  const T theta = T(2) * std::atan2(im, q.w);
  return q.imaginaryPart() * Quaternion<T>(theta / (T(2) * im));
}

/// Adjoint action Ad_q v = q v q* on an imaginary quaternion.
template <typename T>
Quaternion<T> adjoint(const UnitQuaternion<T>& q, const Quaternion<T>& v) {
  if (!v.isImaginary(T(1e-12))) throw NotImaginary("adjoint argument must be imaginary");
  Quaternion<T> r = q.value() * v * q.value().conjugate();
  r.w = T(0);
  return r;
}

/// Frame change q* r q: takes coordinates in the original frame to the new
/// frame (the conjugate variant of the adjoint).
template <typename T>
Quaternion<T> frameChange(const UnitQuaternion<T>& q, const Quaternion<T>& r) {
  if (!r.isImaginary(T(1e-12))) throw NotImaginary("frameChange argument must be imaginary");
  Quaternion<T> out = q.value().conjugate() * r * q.value();
  out.w = T(0);
  return out;
}

using Quaterniond = Quaternion<double>;
using UnitQuaterniond = UnitQuaternion<double>;

/// Renders "w+xi+yj+zk" with 17-significant-digit components.
inline std::string to_string(const Quaterniond& q) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi%+.17gj%+.17gk", q.w, q.x, q.y, q.z);
  return buf;
}

inline std::ostream& operator<<(std::ostream& os, const Quaterniond& q) {
  return os << to_string(q);
}

}  // namespace dqform
