#pragma once

// Real numbers stored as sign * exp(log_magnitude).
//
// Anything carrying the factor exp(-1/r) goes through this type: that factor
// is below the smallest double once r < 1/745, while its logarithm is just
// -1/r.

#include <cmath>
#include <limits>

namespace thomflow {

struct SignedLogValue {
  int sign = 0;  // -1, 0 or +1
  double log_magnitude = -std::numeric_limits<double>::infinity();

  static SignedLogValue zero() { return {}; }

  static SignedLogValue from_double(double v) {
    if (v == 0.0) return zero();
    return {v > 0.0 ? 1 : -1, std::log(std::abs(v))};
  }

  /// exp(log_value), always positive.
  static SignedLogValue from_log(double log_value) { return {1, log_value}; }

  double to_double() const {
    return sign == 0 ? 0.0 : sign * std::exp(log_magnitude);
  }

  bool is_zero() const { return sign == 0; }
};

inline SignedLogValue operator*(const SignedLogValue& a,
                                const SignedLogValue& b) {
  if (a.sign == 0 || b.sign == 0) return SignedLogValue::zero();
  return {a.sign * b.sign, a.log_magnitude + b.log_magnitude};
}

inline SignedLogValue operator/(const SignedLogValue& a,
                                const SignedLogValue& b) {
  if (a.sign == 0) return SignedLogValue::zero();
  return {a.sign * b.sign, a.log_magnitude - b.log_magnitude};
}

inline SignedLogValue operator-(const SignedLogValue& a) {
  return {-a.sign, a.log_magnitude};
}

/// Scale by an ordinary double.
inline SignedLogValue operator*(const SignedLogValue& a, double s) {
  return a * SignedLogValue::from_double(s);
}

/// Sum of two signed-log values without leaving log space.
inline SignedLogValue operator+(const SignedLogValue& a,
                                const SignedLogValue& b) {
  if (a.sign == 0) return b;
  if (b.sign == 0) return a;
  const bool a_big = a.log_magnitude >= b.log_magnitude;
  const SignedLogValue& big = a_big ? a : b;
  const SignedLogValue& small = a_big ? b : a;
  const double ratio = std::exp(small.log_magnitude - big.log_magnitude);
  if (big.sign == small.sign) {
    return {big.sign, big.log_magnitude + std::log1p(ratio)};
  }
  if (ratio == 1.0) return SignedLogValue::zero();
  return {big.sign, big.log_magnitude + std::log1p(-ratio)};
}

/// Total order consistent with the represented reals.
inline bool operator<(const SignedLogValue& a, const SignedLogValue& b) {
  if (a.sign != b.sign) return a.sign < b.sign;
  if (a.sign == 0) return false;
  return a.sign > 0 ? a.log_magnitude < b.log_magnitude
                    : a.log_magnitude > b.log_magnitude;
}

/// |a/b - 1| for values of equal sign; infinity when signs differ.
inline double relative_difference(const SignedLogValue& a,
                                  const SignedLogValue& b) {
  if (a.sign != b.sign) return std::numeric_limits<double>::infinity();
  if (a.sign == 0) return 0.0;
  return std::abs(std::expm1(a.log_magnitude - b.log_magnitude));
}

}  // namespace thomflow
