#pragma once

#include <span>
#include <vector>

#include "syncstab/potential.hpp"

namespace syncstab {

inline constexpr double kDefaultTol = 1e-12;

/// One point of a synchronous orbit p'' + V'(p) = 0 with p(0) = 0, p'(0) > 0.
struct OrbitState {
  double t = 0.0;
  double p = 0.0;
  double p_dot = 0.0;
  double E = 0.0;  // p_dot^2/2 + V(p) evaluated at this state
};

struct PeriodResult {
  double T = 0.0;
  double tau = 0.0;  // T / 2
  double E = 0.0;
};

/// Period of the rotating orbit, T(E) = (1/sqrt 2) int_{-pi}^{pi} dx / sqrt(E - V(x)).
/// The near-saddle ends are integrated in sinh-stretched coordinates, so the
/// relative accuracy is uniform down to E ~ 1e-12.
PeriodResult period(const Potential& pot, double E, double tol = kDefaultTol);

/// Initial velocity sqrt(2 (E - V(0))).
double launch_speed(const Potential& pot, double E);

OrbitState orbit_state(const Potential& pot, double E, double t, double tol = kDefaultTol);

/// States at each of the (monotone, any sign) times.
std::vector<OrbitState> orbit_states(const Potential& pot, double E, std::span<const double> times,
                                     double tol = kDefaultTol);

/// Distance pi - |p0(t)| of the separatrix orbit from the saddle, obtained by
/// inverting t = int_0^{p0} dx / sqrt(-2 V(x)). Accurate in relative terms
/// even when it is far below machine epsilon.
double heteroclinic_offset(const Potential& pot, double t, double tol = kDefaultTol);

/// E = 0 orbit with p0(0) = 0.
OrbitState heteroclinic_state(const Potential& pot, double t, double tol = kDefaultTol);

/// sup_{0 <= t <= tau(E)} |p(t; E) - p0(t)| on a uniform grid of `grid` points.
/// Requires 0 < E < 1.
double proximity_sup(const Potential& pot, double E, int grid = 1000, double tol = kDefaultTol);

/// Initial data for the two-particle system, expressed around the synchronous
/// orbit: x = p + w/2, y = p - w/2 at t = 0.
struct BinaryStart {
  double w = 0.0;
  double w_dot = 0.0;
};

struct ChainCheckOptions {
  BinaryStart start{0.1, 0.0};
  /// Added to x_2 only, which breaks the period-2 pattern when nonzero.
  double break_period_two = 0.0;
  /// Fixed RK78 steps per orbit period (both systems share the step sequence).
  int steps_per_period = 400;
};

/// Integrates the ring x_n'' + V'(x_n) = (kappa/2)(x_{n-1} - 2 x_n + x_{n+1})
/// from period-2 data and the two-particle system side by side; returns the
/// max over time and sites of |x_n - (x or y)|. `horizon` is in time units.
double chain_check(const Potential& pot, double kappa, double E, int n_particles, double horizon,
                   const ChainCheckOptions& opts = {});

}  // namespace syncstab

namespace syncstab {

/// Phase constant G of the separatrix: pi - |p0(t)| = pi exp(lambda G - lambda |t|) (1 + o(1)),
/// i.e. G = int_0^pi [1/sqrt(-2 V(pi - s)) - 1/(lambda s)] ds.
double separatrix_phase_constant(const Potential& pot, double tol = kDefaultTol);

}  // namespace syncstab
