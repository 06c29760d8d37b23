#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace geoverify {

/// Largest chart dimension supported by the fixed-capacity jet storage.
inline constexpr int kMaxDim = 12;

using JetVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using JetMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

/// Value, gradient and Hessian of a scalar field at a point.
///
/// Arithmetic propagates all three exactly by the chain rule, so a Jet2 seeded
/// with `variable` carries exact first and second partial derivatives through
/// any composition of the supported operations. Updates are symmetric up to
/// rounding; eval_jet2 returns an exactly symmetric Hessian.
struct Jet2 {
  double value = 0.0;
  JetVector gradient;
  JetMatrix hessian;

  Jet2() = default;
  Jet2(double v, int dim) : value(v), gradient(JetVector::Zero(dim)), hessian(JetMatrix::Zero(dim, dim)) {}

  static Jet2 constant(double v, int dim) { return Jet2(v, dim); }
  static Jet2 variable(double v, int index, int dim) {
    Jet2 j(v, dim);
    j.gradient(index) = 1.0;
    return j;
  }

  int dim() const { return static_cast<int>(gradient.size()); }
};

/// Applies a scalar function with known first and second derivatives.
inline Jet2 chain(const Jet2& a, double f, double df, double d2f) {
  Jet2 r;
  r.value = f;
  r.gradient = df * a.gradient;
  r.hessian = df * a.hessian + d2f * (a.gradient * a.gradient.transpose());
  return r;
}

inline Jet2 operator-(const Jet2& a) {
  Jet2 r;
  r.value = -a.value;
  r.gradient = -a.gradient;
  r.hessian = -a.hessian;
  return r;
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value + b.value;
  r.gradient = a.gradient + b.gradient;
  r.hessian = a.hessian + b.hessian;
  return r;
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value - b.value;
  r.gradient = a.gradient - b.gradient;
  r.hessian = a.hessian - b.hessian;
  return r;
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r;
  r.value = a.value * b.value;
  r.gradient = a.value * b.gradient + b.value * a.gradient;
  const JetMatrix cross = a.gradient * b.gradient.transpose();
  r.hessian = a.value * b.hessian + b.value * a.hessian + cross + cross.transpose();
  return r;
}

inline Jet2 reciprocal(const Jet2& a) {
  const double inv = 1.0 / a.value;
  return chain(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

inline Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e, e);
}

inline Jet2 log(const Jet2& a) { return chain(a, std::log(a.value), 1.0 / a.value, -1.0 / (a.value * a.value)); }

inline Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value);
  return chain(a, s, std::cos(a.value), -s);
}

inline Jet2 cos(const Jet2& a) {
  const double c = std::cos(a.value);
  return chain(a, c, -std::sin(a.value), -c);
}

inline Jet2 sinh(const Jet2& a) {
  const double s = std::sinh(a.value);
  return chain(a, s, std::cosh(a.value), s);
}

inline Jet2 cosh(const Jet2& a) {
  const double c = std::cosh(a.value);
  return chain(a, c, std::sinh(a.value), c);
}

inline Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.value);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.value));
}

/// a^c for a constant exponent c. Derivative terms with a zero coefficient are
/// skipped so that integer powers stay finite at a = 0.
inline Jet2 pow(const Jet2& a, double c) {
  if (c == 0.0) return Jet2::constant(1.0, a.dim());
  if (c == 1.0) return a;
  const double f = std::pow(a.value, c);
  const double df = c * std::pow(a.value, c - 1.0);
  const double d2f = (c == 2.0) ? 2.0 : c * (c - 1.0) * std::pow(a.value, c - 2.0);
  return chain(a, f, df, d2f);
}

inline double value_of(const Jet2& a) { return a.value; }
inline double value_of(double a) { return a; }
inline long double value_of(long double a) { return a; }

}  // namespace geoverify
