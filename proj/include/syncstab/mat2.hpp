#pragma once

#include <array>
#include <cmath>

namespace syncstab {

/// Row-major 2x2 real matrix. Everything linear in this library is planar.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  static constexpr Mat2 identity() { return {}; }

  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }

  Mat2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }

  double frobenius() const {
    return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22);
  }

  std::array<double, 2> apply(std::array<double, 2> v) const {
    return {a11 * v[0] + a12 * v[1], a21 * v[0] + a22 * v[1]};
  }

  friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend constexpr Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  friend constexpr Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& x) {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
  }
};

/// exp(A t) for A = [[0, 1], [-omega^2, 0]], omega > 0.
inline Mat2 harmonic_flow(double omega, double t) {
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return {c, s / omega, -omega * s, c};
}

}  // namespace syncstab
