#pragma once

#include <string>
#include <string_view>

#include "syncstab/mat2.hpp"
#include "syncstab/orbit.hpp"
#include "syncstab/potential.hpp"

namespace syncstab {

/// Period-advance matrix of a planar linear Hamiltonian system.
struct Monodromy {
  Mat2 m;
  double T = 0.0;
  double det_residual = 0.0;  // |det m - 1|, reported, never projected away

  double trace() const { return m.trace(); }
};

enum class StabilityKind { elliptic, hyperbolic, parabolic };

std::string_view to_string(StabilityKind k);
StabilityKind stability_kind_from_string(std::string_view s);

struct StabilityClass {
  StabilityKind kind = StabilityKind::elliptic;
  double trace = 0.0;
  int sign = 1;  // sign of the trace; meaningful when |trace| >= 2
};

inline constexpr double kDefaultClassTol = 1e-6;

/// Largest det_residual that classify() will accept.
inline constexpr double kMaxClassifiableDetResidual = 1e-6;

/// Fundamental-matrix propagation of z' = [[0,1],[-(shift + V''(p(t;E))),0]] z
/// from t0 to t1 along the synchronous orbit: returns X(t1) X(t0)^{-1}.
Mat2 orbit_transfer(const Potential& pot, double shift, double E, double t0, double t1,
                    double tol = kDefaultTol);

/// Relative (w = xi - eta) channel: w'' + (2 kappa + V''(p)) w = 0, over [-tau, tau].
Monodromy monodromy_w(const Potential& pot, double kappa, double E, double tol = kDefaultTol);

/// Tangent (u = xi + eta) channel: u'' + V''(p) u = 0, over [-tau, tau].
Monodromy monodromy_u(const Potential& pot, double E, double tol = kDefaultTol);

/// Throws NumericalError when det_residual exceeds kMaxClassifiableDetResidual.
StabilityClass classify(const Monodromy& m, double tol_class = kDefaultClassTol);
StabilityClass classify_trace(double trace, double tol_class = kDefaultClassTol);

/// theta(T) - theta(0) for theta = arg(w + i w') along one period starting at t = 0.
double theta_winding(const Potential& pot, double kappa, double E, double theta0,
                     double tol = kDefaultTol);

struct EllipticityCertificate {
  bool positive = false;  // F u . u_perp > 0 for every sampled direction
  double min_value = 0.0;
};

/// Samples F_E u . u_perp over unit vectors u = (cos a, sin a), u_perp = (sin a, -cos a).
/// A strictly positive form means F_E has no real eigenvector.
EllipticityCertificate ellipticity_certificate(const Mat2& F, int samples);
EllipticityCertificate large_E_certificate(const Potential& pot, double kappa, double E,
                                           int samples = 360, double tol = kDefaultTol);

}  // namespace syncstab
