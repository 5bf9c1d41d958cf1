#include "syncstab/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "syncstab/error.hpp"
#include "syncstab/ode.hpp"

namespace syncstab {

namespace {

// (p, p', x11, x12, x21, x22)
ode::State<6> advance_with_orbit(const Potential& pot, double shift, double E, double t,
                                 double tol) {
  auto rhs = [&pot, shift](double, const ode::State<6>& y) {
    const auto v = pot.eval(y[0]);
    const double q = shift + v.d2v;
    return ode::State<6>{y[1], -v.dv, y[4], y[5], -q * y[2], -q * y[3]};
  };
  const ode::State<6> y0{0.0, launch_speed(pot, E), 1.0, 0.0, 0.0, 1.0};
  return ode::integrate<6>(rhs, y0, 0.0, t, tol);
}

Mat2 as_matrix(const ode::State<6>& y) { return {y[2], y[3], y[4], y[5]}; }

Monodromy over_period(const Potential& pot, double shift, double E, double tol) {
  const double tau = period(pot, E, tol).tau;
  Monodromy out;
  out.m = orbit_transfer(pot, shift, E, -tau, tau, tol);
  out.T = 2.0 * tau;
  out.det_residual = std::abs(out.m.det() - 1.0);
  return out;
}

}  // namespace

std::string_view to_string(StabilityKind k) {
  switch (k) {
    case StabilityKind::elliptic: return "elliptic";
    case StabilityKind::hyperbolic: return "hyperbolic";
    case StabilityKind::parabolic: return "parabolic";
  }
  return "unknown";
}

StabilityKind stability_kind_from_string(std::string_view s) {
  if (s == "elliptic") return StabilityKind::elliptic;
  if (s == "hyperbolic") return StabilityKind::hyperbolic;
  if (s == "parabolic") return StabilityKind::parabolic;
  throw InputError("unknown stability class '" + std::string(s) + "'");
}

Mat2 orbit_transfer(const Potential& pot, double shift, double E, double t0, double t1,
                    double tol) {
  const Mat2 x1 = as_matrix(advance_with_orbit(pot, shift, E, t1, tol));
  if (t0 == 0.0) return x1;
  const Mat2 x0 = as_matrix(advance_with_orbit(pot, shift, E, t0, tol));
  return x1 * x0.inverse();
}

Monodromy monodromy_w(const Potential& pot, double kappa, double E, double tol) {
  system_params(pot, kappa);
  return over_period(pot, 2.0 * kappa, E, tol);
}

Monodromy monodromy_u(const Potential& pot, double E, double tol) {
  return over_period(pot, 0.0, E, tol);
}

StabilityClass classify_trace(double trace, double tol_class) {
  StabilityClass c;
  c.trace = trace;
  c.sign = trace < 0.0 ? -1 : 1;
  const double gap = std::abs(trace) - 2.0;
  if (std::abs(gap) <= tol_class) c.kind = StabilityKind::parabolic;
  else if (gap > 0.0) c.kind = StabilityKind::hyperbolic;
  else c.kind = StabilityKind::elliptic;
  return c;
}

StabilityClass classify(const Monodromy& m, double tol_class) {
  if (!(m.det_residual <= kMaxClassifiableDetResidual))
    throw NumericalError("monodromy is not symplectic enough to classify (|det - 1| = " +
                         std::to_string(m.det_residual) + ")");
  return classify_trace(m.trace(), tol_class);
}

double theta_winding(const Potential& pot, double kappa, double E, double theta0, double tol) {
  const double T = period(pot, E, tol).T;
  auto rhs = [&pot, kappa](double, const ode::State<3>& y) {
    const auto v = pot.eval(y[0]);
    const double s = std::sin(y[2]), c = std::cos(y[2]);
    return ode::State<3>{y[1], -v.dv, -s * s - (2.0 * kappa + v.d2v) * c * c};
  };
  const ode::State<3> y0{0.0, launch_speed(pot, E), theta0};
  return ode::integrate<3>(rhs, y0, 0.0, T, tol)[2] - theta0;
}

EllipticityCertificate ellipticity_certificate(const Mat2& F, int samples) {
  if (samples < 1) throw InputError("certificate needs at least one sample");
  EllipticityCertificate cert;
  cert.min_value = std::numeric_limits<double>::infinity();
  for (int j = 0; j < samples; ++j) {
    const double a = 2.0 * std::numbers::pi * j / samples;
    const double c = std::cos(a), s = std::sin(a);
    const auto fu = F.apply({c, s});
    cert.min_value = std::min(cert.min_value, fu[0] * s - fu[1] * c);
  }
  cert.positive = cert.min_value > 0.0;
  return cert;
}

EllipticityCertificate large_E_certificate(const Potential& pot, double kappa, double E,
                                           int samples, double tol) {
  if (!(E >= 1.0)) throw InputError("large_E_certificate needs E >= 1");
  return ellipticity_certificate(monodromy_w(pot, kappa, E, tol).m, samples);
}

}  // namespace syncstab
