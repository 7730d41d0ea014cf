#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>

#include "dqform/errors.hpp"

namespace dqform {

/// Dual number s + d*eps with eps^2 = 0; s is the standard part, d the dual
/// (infinitesimal) part. The comparison operators implement the total order
/// on dual numbers: lexicographic by (s, d).
template <typename T = double>
struct DualNumber {
  T s{};
  T d{};

  constexpr DualNumber() = default;
  constexpr DualNumber(T standard) : s(standard) {}
  constexpr DualNumber(T standard, T dual) : s(standard), d(dual) {}

  constexpr bool operator==(const DualNumber&) const = default;
  constexpr auto operator<=>(const DualNumber&) const = default;

  constexpr DualNumber operator-() const { return {-s, -d}; }

  friend constexpr DualNumber operator+(const DualNumber& a, const DualNumber& b) {
    return {a.s + b.s, a.d + b.d};
  }
  friend constexpr DualNumber operator-(const DualNumber& a, const DualNumber& b) {
    return {a.s - b.s, a.d - b.d};
  }
  // eps^2 = 0: the product drops the a.d*b.d term.
  friend constexpr DualNumber operator*(const DualNumber& a, const DualNumber& b) {
    return {a.s * b.s, a.s * b.d + a.d * b.s};
  }
  friend DualNumber operator/(const DualNumber& a, const DualNumber& b) {
    if (b.s == T(0)) throw NonAppreciableDivisor("dual number with zero standard part");
    return {a.s / b.s, (a.d * b.s - a.s * b.d) / (b.s * b.s)};
  }

  DualNumber& operator+=(const DualNumber& o) { return *this = *this + o; }
  DualNumber& operator-=(const DualNumber& o) { return *this = *this - o; }
  DualNumber& operator*=(const DualNumber& o) { return *this = *this * o; }
  DualNumber& operator/=(const DualNumber& o) { return *this = *this / o; }
};

template <typename T>
constexpr bool isAppreciable(const DualNumber<T>& x) {
  return x.s != T(0);
}

template <typename T>
constexpr bool isInfinitesimal(const DualNumber<T>& x) {
  return x.s == T(0);
}

/// Magnitude of a dual number, itself a dual number: (|s|, sign(s)*d) when
/// appreciable, (0, |d|) otherwise.
template <typename T>
DualNumber<T> abs(const DualNumber<T>& x) {
  if (x.s != T(0)) return {std::abs(x.s), x.s > T(0) ? x.d : -x.d};
  return {T(0), std::abs(x.d)};
}

/// Square root of a nonnegative dual number:
/// (sqrt(s) + d/(2 sqrt(s)) eps)^2 = s + d eps. No dual number squares to an
/// infinitesimal positive, so those inputs are rejected rather than
/// approximated.
template <typename T>
DualNumber<T> sqrt(const DualNumber<T>& x) {
  if (x.s < T(0) || (x.s == T(0) && x.d < T(0)))
    throw DomainError("negative dual number has no square root");
  if (x.s == T(0)) {
    if (x.d != T(0)) throw DomainError("infinitesimal positive has no dual square root");
    return {};
  }
  const T r = std::sqrt(x.s);
  return {r, x.d / (T(2) * r)};
}

using DualNumberd = DualNumber<double>;

/// Renders "s+d(eps)" with full 17-significant-digit components, e.g. "2+3ε".
inline std::string to_string(const DualNumberd& x) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17g\xce\xb5", x.s, x.d);
  return buf;
}

/// Parses the to_string format; a bare real "s" is accepted as s+0ε.
inline DualNumberd parseDualNumber(const std::string& text) {
  const std::string eps = "\xce\xb5";
  std::string body = text;
  bool hasEps = false;
  if (body.size() >= eps.size() && body.compare(body.size() - eps.size(), eps.size(), eps) == 0) {
    hasEps = true;
    body.resize(body.size() - eps.size());
  }
  const char* begin = body.c_str();
  char* end = nullptr;
  const double s = std::strtod(begin, &end);
  if (end == begin) throw ParseError("not a dual number: '" + text + "'");
  if (!hasEps) {
    if (*end != '\0') throw ParseError("trailing characters in '" + text + "'");
    return {s, 0.0};
  }
  const char* dualBegin = end;
  const double d = std::strtod(dualBegin, &end);
  if (end == dualBegin || *end != '\0') throw ParseError("bad dual part in '" + text + "'");
  return {s, d};
}

template <typename T>
std::ostream& operator<<(std::ostream& os, const DualNumber<T>& x) {
  return os << to_string(DualNumberd(double(x.s), double(x.d)));
}

}  // namespace dqform
