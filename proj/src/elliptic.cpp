#include "syncstab/elliptic.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "syncstab/error.hpp"

namespace syncstab {

namespace {
constexpr int kMaxAgmSteps = 40;
}

EllipticModulus EllipticModulus::from_k2(double k2) {
  if (!(k2 >= 0.0 && k2 < 1.0)) throw InputError("elliptic modulus needs 0 <= k^2 < 1");
  // 1 - k2 is exact for k2 in [0.5, 1) and loses at most an ulp elsewhere.
  return {std::sqrt(k2), k2, std::sqrt(1.0 - k2)};
}

EllipticModulus EllipticModulus::from_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw InputError("elliptic modulus needs 0 <= k < 1");
  return {k, k * k, std::sqrt((1.0 - k) * (1.0 + k))};
}

double complete_K(EllipticModulus k) {
  double a = 1.0;
  double b = k.kp();
  for (int i = 0; i < kMaxAgmSteps && std::abs(a - b) > 1e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (2.0 * a);
}

JacobiValues jacobi(double u, EllipticModulus k) {
  if (k.k2() == 0.0) return {u, std::sin(u), std::cos(u), 1.0};

  std::array<double, kMaxAgmSteps + 1> a{}, c{};
  a[0] = 1.0;
  double b = k.kp();
  c[0] = k.k();
  int n = 0;
  while (n < kMaxAgmSteps && std::abs(c[n]) > 1e-17 * a[n]) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  std::array<double, kMaxAgmSteps + 1> phi{};
  phi[n] = std::ldexp(a[n] * u, n);
  for (int j = n; j > 0; --j)
    phi[j - 1] = 0.5 * (phi[j] + std::asin(c[j] / a[j] * std::sin(phi[j])));

  JacobiValues r;
  r.am = phi[0];
  r.sn = std::sin(r.am);
  r.cn = std::cos(r.am);
  r.dn = n > 0 ? r.cn / std::cos(phi[1] - phi[0]) : 1.0;
  return r;
}

}  // namespace syncstab
