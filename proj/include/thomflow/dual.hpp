#pragma once

// Forward-mode dual numbers, v + d*eps with eps^2 = 0.
//
// Only first derivatives are needed, so the derivative part is a scalar and
// every elementary function below applies its exact derivative rule.

#include <cmath>
#include <concepts>
#include <ostream>

namespace thomflow {

template <std::floating_point T = double>
struct Dual {
  T value{};
  T deriv{};

  constexpr Dual() = default;
  constexpr Dual(T v) : value(v) {}  // NOLINT: constants promote implicitly
  constexpr Dual(T v, T d) : value(v), deriv(d) {}

  static constexpr Dual variable(T v) { return {v, T{1}}; }

  constexpr Dual& operator+=(const Dual& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    value -= o.value;
    deriv -= o.deriv;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    deriv = (deriv * o.value - value * o.deriv) / (o.value * o.value);
    value /= o.value;
    return *this;
  }
};

template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.value, -a.deriv};
}

template <typename T>
constexpr Dual<T> operator+(Dual<T> a, const Dual<T>& b) {
  return a += b;
}
template <typename T>
constexpr Dual<T> operator-(Dual<T> a, const Dual<T>& b) {
  return a -= b;
}
template <typename T>
constexpr Dual<T> operator*(Dual<T> a, const Dual<T>& b) {
  return a *= b;
}
template <typename T>
constexpr Dual<T> operator/(Dual<T> a, const Dual<T>& b) {
  return a /= b;
}

// Mixed scalar forms; the scalar is a constant (zero derivative).
template <typename T>
constexpr Dual<T> operator+(Dual<T> a, T b) {
  a.value += b;
  return a;
}
template <typename T>
constexpr Dual<T> operator+(T a, Dual<T> b) {
  b.value += a;
  return b;
}
template <typename T>
constexpr Dual<T> operator-(Dual<T> a, T b) {
  a.value -= b;
  return a;
}
template <typename T>
constexpr Dual<T> operator-(T a, const Dual<T>& b) {
  return {a - b.value, -b.deriv};
}
template <typename T>
constexpr Dual<T> operator*(const Dual<T>& a, T b) {
  return {a.value * b, a.deriv * b};
}
template <typename T>
constexpr Dual<T> operator*(T a, const Dual<T>& b) {
  return {a * b.value, a * b.deriv};
}
template <typename T>
constexpr Dual<T> operator/(const Dual<T>& a, T b) {
  return {a.value / b, a.deriv / b};
}
template <typename T>
constexpr Dual<T> operator/(T a, const Dual<T>& b) {
  return {a / b.value, -a * b.deriv / (b.value * b.value)};
}

template <typename T>
Dual<T> exp(const Dual<T>& a) {
  const T e = std::exp(a.value);
  return {e, e * a.deriv};
}
template <typename T>
Dual<T> log(const Dual<T>& a) {
  return {std::log(a.value), a.deriv / a.value};
}
template <typename T>
Dual<T> sin(const Dual<T>& a) {
  return {std::sin(a.value), std::cos(a.value) * a.deriv};
}
template <typename T>
Dual<T> cos(const Dual<T>& a) {
  return {std::cos(a.value), -std::sin(a.value) * a.deriv};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  const T s = std::sqrt(a.value);
  return {s, a.deriv / (T{2} * s)};
}
template <typename T>
Dual<T> pow(const Dual<T>& a, T p) {
  // d(a^p) = p a^(p-1) da; written without a^(p-1) so a = 0, p = 1 works.
  const T v = std::pow(a.value, p);
  const T d = (p == T{0}) ? T{0} : p * std::pow(a.value, p - T{1}) * a.deriv;
  return {v, d};
}
template <typename T>
Dual<T> pow(const Dual<T>& a, const Dual<T>& b) {
  // a^b = exp(b log a), a > 0
  return exp(b * log(a));
}

template <typename T>
std::ostream& operator<<(std::ostream& os, const Dual<T>& a) {
  return os << a.value << " + " << a.deriv << "e";
}

}  // namespace thomflow
