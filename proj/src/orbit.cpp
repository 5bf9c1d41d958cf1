#include "syncstab/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "syncstab/error.hpp"
#include "syncstab/ode.hpp"

namespace syncstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr unsigned kQuadDepth = 15;

using boost::math::quadrature::gauss_kronrod;

void require_rotating(double E) {
  if (!(E > 0.0)) {
    std::ostringstream msg;
    msg << "energy must be positive for a rotating synchronous orbit (got " << E << ")";
    throw InputError(msg.str());
  }
}

double saddle_rate(const Potential& pot) {
  const double c = pot.top_curvature();
  if (!(c < 0.0)) throw InputError("potential maximum at pi is degenerate");
  return std::sqrt(-c);
}

template <class F>
double quad(F&& f, double a, double b, double tol) {
  double err = 0.0;
  const double rel = std::max(tol * 0.1, 1e-14);
  return gauss_kronrod<double, 31>::integrate(f, a, b, kQuadDepth, rel, &err);
}

// 1/sqrt(2 d(s)) - 1/(lambda s), written so that the O(s^4) cancellation in
// the numerator is done analytically by Potential::parabola_defect.
double separatrix_remainder(const Potential& pot, double lambda, double s) {
  if (s <= 0.0) return 0.0;
  const double q = std::sqrt(2.0 * pot.depth_from_top(s));
  const double ls = lambda * s;
  return 2.0 * pot.parabola_defect(s) / (ls * q * (ls + q));
}

ode::State<2> pendulum_rhs(const Potential& pot, const ode::State<2>& y) {
  return {y[1], -pot.slope(y[0])};
}

}  // namespace

PeriodResult period(const Potential& pot, double E, double tol) {
  require_rotating(E);
  const double lambda = saddle_rate(pot);
  // pi - x = c sinh(u) flattens the sqrt(E + lambda^2 s^2 / 2) peak at the saddle.
  const double c = std::sqrt(2.0 * E) / lambda;
  const double umax = std::asinh(kPi / c);
  auto integrand = [&](double u) {
    const double s = std::min(c * std::sinh(u), kPi);
    return c * std::cosh(u) / std::sqrt(E + pot.depth_from_top(s));
  };
  // Both halves of [-pi, pi] coincide because V is even.
  const double T = std::sqrt(2.0) * quad(integrand, 0.0, umax, tol);
  if (!std::isfinite(T) || T <= 0.0) throw NumericalError("period quadrature failed");
  return {T, 0.5 * T, E};
}

double launch_speed(const Potential& pot, double E) {
  require_rotating(E);
  return std::sqrt(2.0 * (E - pot.value(0.0)));
}

OrbitState orbit_state(const Potential& pot, double E, double t, double tol) {
  const double times[2] = {0.0, t};
  return orbit_states(pot, E, times, tol).back();
}

std::vector<OrbitState> orbit_states(const Potential& pot, double E, std::span<const double> times,
                                     double tol) {
  const double v0 = launch_speed(pot, E);
  std::vector<OrbitState> out;
  out.reserve(times.size());
  auto rhs = [&pot](double, const ode::State<2>& y) { return pendulum_rhs(pot, y); };
  ode::State<2> y{0.0, v0};
  double t_prev = 0.0;
  for (double t : times) {
    y = ode::integrate<2>(rhs, y, t_prev, t, tol);
    t_prev = t;
    out.push_back({t, y[0], y[1], 0.5 * y[1] * y[1] + pot.value(y[0])});
  }
  return out;
}

double heteroclinic_offset(const Potential& pot, double t, double tol) {
  const double lambda = saddle_rate(pot);
  const double target = std::abs(t);
  if (target == 0.0) return kPi;

  // Elapsed time to reach offset s = e^y:
  //   t(y) = int_s^pi [1/sqrt(2 d) - 1/(lambda s')] ds' + (ln pi - y) / lambda.
  auto time_at = [&](double y) {
    const double s = std::exp(y);
    const double reg = quad([&](double x) { return separatrix_remainder(pot, lambda, x); }, s,
                            kPi, tol);
    return reg + (std::log(kPi) - y) / lambda;
  };
  auto dtime_dy = [&](double y) {
    const double s = std::exp(y);
    return -s / std::sqrt(2.0 * pot.depth_from_top(s));
  };

  double hi = std::log(kPi);  // time_at(hi) = 0 < target
  double lo = hi - lambda * target - 1.0;
  while (time_at(lo) < target) lo -= 2.0 + lambda * target;

  double y = std::log(kPi) - lambda * target;
  y = std::clamp(y, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const double f = time_at(y) - target;
    if (f > 0.0) lo = y; else hi = y;
    double next = y - f / dtime_dy(y);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - y) <= 1e-15 * std::max(1.0, std::abs(y)) || hi - lo < 1e-15) {
      y = next;
      break;
    }
    y = next;
  }
  return std::exp(y);
}

double separatrix_phase_constant(const Potential& pot, double tol) {
  const double lambda = saddle_rate(pot);
  return quad([&](double x) { return separatrix_remainder(pot, lambda, x); }, 0.0, kPi, tol);
}

OrbitState heteroclinic_state(const Potential& pot, double t, double tol) {
  const double s = heteroclinic_offset(pot, t, tol);
  const double sign = t < 0.0 ? -1.0 : 1.0;
  OrbitState st;
  st.t = t;
  st.p = t == 0.0 ? 0.0 : sign * (kPi - s);
  st.p_dot = std::sqrt(2.0 * pot.depth_from_top(s));
  st.E = 0.0;
  return st;
}

double proximity_sup(const Potential& pot, double E, int grid, double tol) {
  if (!(E > 0.0 && E < 1.0)) throw InputError("proximity_sup needs 0 < E < 1");
  if (grid < 2) throw InputError("proximity_sup needs at least 2 grid points");
  const double tau = period(pot, E, tol).tau;
  std::vector<double> times(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) times[i] = tau * i / (grid - 1);
  const auto states = orbit_states(pot, E, times, tol);
  double sup = 0.0;
  for (const auto& st : states) {
    const double p0 = heteroclinic_state(pot, st.t, tol).p;
    sup = std::max(sup, std::abs(st.p - p0));
  }
  return sup;
}

double chain_check(const Potential& pot, double kappa, double E, int n_particles, double horizon,
                   const ChainCheckOptions& opts) {
  if (n_particles < 4) throw InputError("chain_check needs at least 4 particles");
  if (n_particles % 2 != 0) throw InputError("chain_check needs an even particle count");
  const double v0 = launch_speed(pot, E);
  const double T = period(pot, E).T;
  const auto n = static_cast<std::size_t>(n_particles);

  using Vec = std::vector<double>;
  const double x0 = 0.5 * opts.start.w, y0 = -0.5 * opts.start.w;
  const double xd0 = v0 + 0.5 * opts.start.w_dot, yd0 = v0 - 0.5 * opts.start.w_dot;

  Vec binary{x0, y0, xd0, yd0};
  Vec chain(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    chain[j] = (j % 2 == 0) ? x0 : y0;
    chain[n + j] = (j % 2 == 0) ? xd0 : yd0;
  }
  chain[2] += opts.break_period_two;

  auto binary_rhs = [&](const Vec& s, Vec& d, double) {
    d[0] = s[2];
    d[1] = s[3];
    d[2] = -pot.slope(s[0]) + kappa * (s[1] - s[0]);
    d[3] = -pot.slope(s[1]) + kappa * (s[0] - s[1]);
  };
  auto chain_rhs = [&](const Vec& s, Vec& d, double) {
    for (std::size_t j = 0; j < n; ++j) {
      const double left = s[(j + n - 1) % n], right = s[(j + 1) % n];
      d[j] = s[n + j];
      d[n + j] = -pot.slope(s[j]) + 0.5 * kappa * (left - 2.0 * s[j] + right);
    }
  };
  auto deviation = [&] {
    double dev = 0.0;
    for (std::size_t j = 0; j < n; ++j) dev = std::max(dev, std::abs(chain[j] - binary[j % 2]));
    return dev;
  };

  boost::numeric::odeint::runge_kutta_fehlberg78<Vec> bstep, cstep;
  const auto steps = static_cast<long>(std::ceil(horizon / T * opts.steps_per_period));
  const double dt = horizon / static_cast<double>(std::max(steps, 1L));
  double worst = deviation();
  for (long i = 0; i < steps; ++i) {
    const double t = dt * static_cast<double>(i);
    bstep.do_step(binary_rhs, binary, t, dt);
    cstep.do_step(chain_rhs, chain, t, dt);
    worst = std::max(worst, deviation());
  }
  if (!std::isfinite(worst)) throw NumericalError("chain integration diverged");
  return worst;
}

}  // namespace syncstab
