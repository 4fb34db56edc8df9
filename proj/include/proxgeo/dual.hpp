#pragma once

#include <cmath>
#include <utility>

namespace proxgeo {

/// Forward-mode scalar carrying a value and one directional derivative.
/// Nest (`Dual<Dual<double>>`) to obtain second derivatives.
template <class T>
struct Dual {
  T v{};  // value
  T d{};  // directional derivative

  Dual() = default;
  Dual(double x) : v(x), d() {}  // constants promote with zero derivative
  Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}
};

inline double scalar_value(double x) { return x; }
template <class T>
double scalar_value(const Dual<T>& x) {
  return scalar_value(x.v);
}

inline bool is_identically_zero(double x) { return x == 0.0; }
template <class T>
bool is_identically_zero(const Dual<T>& x) {
  return is_identically_zero(x.v) && is_identically_zero(x.d);
}

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

template <class T> Dual<T> operator+(const Dual<T>& a, double b) { return a + Dual<T>(b); }
template <class T> Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a) + b; }
template <class T> Dual<T> operator-(const Dual<T>& a, double b) { return a - Dual<T>(b); }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return a * Dual<T>(b); }
template <class T> Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a) * b; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return a / Dual<T>(b); }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tan;

template <class T>
Dual<T> sin(const Dual<T>& x) {
  return {sin(x.v), x.d * cos(x.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  return {cos(x.v), -(x.d * sin(x.v))};
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
  T c = cos(x.v);
  return {tan(x.v), x.d / (c * c)};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.v);
  return {e, x.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  return {log(x.v), x.d / x.v};
}
template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  T s = sqrt(x.v);
  return {s, x.d / (2.0 * s)};
}

// General power. The exponent-variation term needs log(base); it is only
// added when the exponent actually carries a derivative, so constant integer
// exponents work for negative bases.
template <class T>
Dual<T> pow(const Dual<T>& a, const Dual<T>& b) {
  T p = pow(a.v, b.v);
  T deriv = a.d * (b.v * pow(a.v, b.v - 1.0));
  if (!is_identically_zero(b.d)) deriv = deriv + b.d * (p * log(a.v));
  return {p, deriv};
}
template <class T>
Dual<T> pow(const Dual<T>& a, double b) {
  return pow(a, Dual<T>(b));
}

}  // namespace proxgeo
