#pragma once

// Thin wrapper over Boost.Odeint's controlled Runge-Kutta-Fehlberg 7(8).
// All trajectory and fundamental-matrix propagation goes through here.

#include <array>
#include <cmath>
#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "syncstab/error.hpp"

namespace syncstab::ode {

template <std::size_t N>
using State = std::array<double, N>;

namespace detail {

template <std::size_t N>
using Stepper = boost::numeric::odeint::runge_kutta_fehlberg78<State<N>>;

inline double initial_step(double t0, double t1) {
  const double span = t1 - t0;
  return span == 0.0 ? 0.0 : span * 1e-3;
}

}  // namespace detail

/// Tolerances below this cannot be met in double precision.
inline constexpr double kMinTol = 1e-15;
inline constexpr long kMaxSteps = 2'000'000;

/// Advance y from t0 to t1 (either direction) with rel/abs tolerance tol.
template <std::size_t N, class Rhs>
State<N> integrate(Rhs&& rhs, State<N> y, double t0, double t1, double tol) {
  if (t0 == t1) return y;
  if (!(tol >= kMinTol)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "ODE tolerance %g is below attainable precision", tol);
    throw NumericalError(buf);
  }
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(tol, tol, detail::Stepper<N>{});
  auto system = [&rhs](const State<N>& x, State<N>& dxdt, double t) { dxdt = rhs(t, x); };

  const double dir = t1 > t0 ? 1.0 : -1.0;
  double t = t0;
  double dt = detail::initial_step(t0, t1);
  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
    int rejected = 0;
    while (stepper.try_step(system, y, t, dt) == odeint::fail) {
      if (++rejected > 500) throw NumericalError("ODE step control failed: too many rejected steps");
    }
    if (++steps > kMaxSteps) throw NumericalError("ODE step limit exceeded");
    if (std::abs(dt) <= 1e-14 * std::max(1.0, std::abs(t)) && dir * (t1 - t) > 0.0)
      throw NumericalError("ODE step size underflow");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw NumericalError("ODE solution became non-finite");
  }
  return y;
}

/// Integrate through the monotone sequence `times` (times[0] is the initial
/// time of y) and call observe(t, y) at each of them.
template <std::size_t N, class Rhs, class Observer>
void integrate_through(Rhs&& rhs, State<N> y, std::span<const double> times, double tol,
                       Observer&& observe) {
  if (times.empty()) return;
  observe(times[0], y);
  for (std::size_t i = 1; i < times.size(); ++i) {
    y = integrate<N>(rhs, y, times[i - 1], times[i], tol);
    observe(times[i], y);
  }
}

}  // namespace syncstab::ode
