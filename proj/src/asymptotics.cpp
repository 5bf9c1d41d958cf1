#include "syncstab/asymptotics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "syncstab/ode.hpp"
#include "syncstab/orbit.hpp"

namespace syncstab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string disagreement_message(double lim, double integ) {
  std::ostringstream msg;
  msg.precision(12);
  msg << "regularized period constant: limit gives " << lim << " but the integral split gives "
      << integ;
  return msg.str();
}

// Least squares for y ~ X beta with 3 columns, by normal equations.
std::array<double, 3> least_squares3(const std::vector<std::array<double, 3>>& X,
                                     const std::vector<double>& y) {
  double A[3][4] = {};
  for (std::size_t r = 0; r < X.size(); ++r) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) A[i][j] += X[r][i] * X[r][j];
      A[i][3] += X[r][i] * y[r];
    }
  }
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    for (int k = 0; k < 4; ++k) std::swap(A[c][k], A[piv][k]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = A[r][c] / A[c][c];
      for (int k = c; k < 4; ++k) A[r][k] -= f * A[c][k];
    }
  }
  return {A[0][3] / A[0][0], A[1][3] / A[1][1], A[2][3] / A[2][2]};
}

// Separatrix offset y = ln s advances with dy/dt' = -sqrt(2 d(s)) / s, t' = |t|.
double log_offset_rate(const Potential& pot, double y) {
  const double s = std::exp(y);
  return -std::sqrt(2.0 * pot.depth_from_top(s)) / s;
}

struct Branches {
  Mat2 forward;   // value at +t
  Mat2 backward;  // value at -t
};

// Integrates M' = L(t) M on both half-lines from M(0) = m0, where L depends on
// t and the separatrix offset; observe(t', forward, backward) at grid points.
template <class Generator, class Observer>
Branches propagate_along_separatrix(const Potential& pot, Generator&& L, double horizon,
                                    const Mat2& m0, double tol, int grid, Observer&& observe) {
  std::vector<double> times(static_cast<std::size_t>(grid) + 1);
  for (int i = 0; i <= grid; ++i) times[i] = horizon * i / grid;

  auto make_rhs = [&](double dir) {
    return [&pot, &L, dir](double tp, const ode::State<5>& st) {
      const double s = std::exp(st[0]);
      const Mat2 g = L(dir * tp, s);
      const Mat2 m{st[1], st[2], st[3], st[4]};
      const Mat2 dm = dir * (g * m);
      return ode::State<5>{log_offset_rate(pot, st[0]), dm.a11, dm.a12, dm.a21, dm.a22};
    };
  };
  const ode::State<5> start{std::log(kPi), m0.a11, m0.a12, m0.a21, m0.a22};
  std::vector<Mat2> fwd, bwd;
  fwd.reserve(times.size());
  bwd.reserve(times.size());
  auto keep = [](std::vector<Mat2>& into) {
    return [&into](double, const ode::State<5>& st) {
      into.push_back({st[1], st[2], st[3], st[4]});
    };
  };
  ode::integrate_through<5>(make_rhs(1.0), start, times, tol, keep(fwd));
  ode::integrate_through<5>(make_rhs(-1.0), start, times, tol, keep(bwd));
  for (std::size_t i = 0; i < times.size(); ++i) observe(times[i], fwd[i], bwd[i]);
  return {fwd.back(), bwd.back()};
}

}  // namespace

KDisagreement::KDisagreement(double lim, double integ)
    : NumericalError(disagreement_message(lim, integ)), k_limit(lim), k_integral(integ) {}

RegularizedPeriod regularized_K(const Potential& pot, KMethod method, double tol,
                                int points_per_decade) {
  if (points_per_decade < 1) throw InputError("points_per_decade must be >= 1");
  if (!(pot.top_curvature() < 0.0)) throw InputError("potential maximum at pi is degenerate");
  const double lambda = std::sqrt(-pot.top_curvature());

  RegularizedPeriod out;
  out.lambda_saddle = lambda;

  // Remainder is O(E ln E); fit r(E) = K + alpha E ln E + beta E over the sweep.
  std::vector<std::array<double, 3>> X;
  std::vector<double> r;
  const int n = 5 * points_per_decade;
  for (int j = 0; j <= n; ++j) {
    const double E = std::pow(10.0, -3.0 - static_cast<double>(j) / points_per_decade);
    const double T = period(pot, E, tol).T;
    X.push_back({1.0, E * std::log(E), E});
    r.push_back(T - std::log(1.0 / E) / lambda);
  }
  const auto beta = least_squares3(X, r);
  out.K_limit = beta[0];

  const double G = separatrix_phase_constant(pot, tol);
  out.K_integral = 2.0 / lambda * std::log(std::sqrt(2.0) * kPi * lambda) + 2.0 * G;
  out.K_literal = 2.0 * std::sqrt(2.0) / lambda * std::log(2.0 * kPi * lambda) +
                  2.0 * std::sqrt(2.0) * G;

  if (std::abs(out.K_limit - out.K_integral) > 1e-2) throw KDisagreement(out.K_limit, out.K_integral);
  out.K = method == KMethod::limit ? out.K_limit : out.K_integral;
  for (std::size_t j = 0; j < r.size(); ++j) out.diagnostics.push_back({X[j][2], r[j] - out.K});
  return out;
}

TransitionMatrix transition_matrix(const Potential& pot, double omega, const DecayingCoefficient& b,
                                   double horizon, double tol, const Mat2& c0) {
  if (!(omega > 0.0)) throw InputError("transition matrix needs omega > 0");
  if (!(horizon > 0.0)) throw InputError("transition matrix needs a positive horizon");
  const double lambda = std::sqrt(-pot.top_curvature());

  auto generator = [&](double t, double s) {
    const Mat2 B{0.0, 0.0, b(t, s), 0.0};
    return harmonic_flow(omega, -t) * B * harmonic_flow(omega, t);
  };
  constexpr int kGrid = 400;
  std::vector<double> ts;
  std::vector<Mat2> advance;
  auto observe = [&](double t, const Mat2& f, const Mat2& bk) {
    ts.push_back(t);
    advance.push_back(f * bk.inverse());
  };
  propagate_along_separatrix(pot, generator, horizon, c0, tol, kGrid, observe);

  TransitionMatrix out;
  out.n = advance.back();
  out.horizon = horizon;
  out.det_residual = std::abs(out.n.det() - 1.0);

  const double floor = 1e-12 * std::max(1.0, out.n.frobenius());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double dist = (advance[i] - out.n).frobenius();
    out.prefactor = std::max(out.prefactor, dist * std::exp(lambda * ts[i]));
    if (ts[i] < 1.0 / lambda || ts[i] > 0.75 * horizon || !(dist > floor)) continue;
    const double ly = std::log(dist);
    sx += ts[i];
    sy += ly;
    sxx += ts[i] * ts[i];
    sxy += ts[i] * ly;
    ++used;
  }
  if (used < 3) {
    // B == 0 leaves nothing to fit; that is only acceptable when C never moved.
    if ((out.n - c0 * c0.inverse()).frobenius() <= floor) {
      out.convergence_rate = std::numeric_limits<double>::infinity();
      return out;
    }
    throw NumericalError("transition matrix: horizon too small to fit the convergence rate");
  }
  const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
  out.convergence_rate = -slope;
  return out;
}

TransitionMatrix transition_N(const Potential& pot, double kappa, double horizon, double tol,
                              const Mat2& c0) {
  const auto params = system_params(pot, kappa);
  if (horizon < 0.0 || !std::isfinite(horizon)) throw InputError("horizon must be >= 0 (0 selects 40/lambda)");
  if (horizon == 0.0) horizon = 40.0 / params.lambda_saddle;
  auto b = [&pot](double, double s) { return -pot.curvature_excess(s); };
  return transition_matrix(pot, params.omega, b, horizon, tol, c0);
}

Monodromy heteroclinic_floquet(const Potential& pot, double kappa, double tau, double tol) {
  const auto params = system_params(pot, kappa);
  if (!(tau > 0.0)) throw InputError("heteroclinic_floquet needs tau > 0");
  const double w2 = params.omega * params.omega;
  auto generator = [&](double, double s) {
    return Mat2{0.0, 1.0, -(w2 + pot.curvature_excess(s)), 0.0};
  };
  const auto ends =
      propagate_along_separatrix(pot, generator, tau, Mat2::identity(), tol, 1, [](auto&&...) {});
  Monodromy out;
  out.m = ends.forward * ends.backward.inverse();
  out.T = 2.0 * tau;
  out.det_residual = std::abs(out.m.det() - 1.0);
  return out;
}

double predicted_trace_at(const TransitionMatrix& n, const SystemParams& params, double tau) {
  const double w = params.omega;
  return (n.n.a11 + n.n.a22) * std::cos(2.0 * w * tau) +
         (n.n.a21 / w - w * n.n.a12) * std::sin(2.0 * w * tau);
}

double predicted_trace(const TransitionMatrix& n, const SystemParams& params, double E,
                       const RegularizedPeriod& K) {
  if (!(E > 0.0)) throw InputError("predicted_trace needs E > 0");
  const double tau = 0.5 * (std::log(1.0 / E) / params.lambda_saddle + K.K);
  return predicted_trace_at(n, params, tau);
}

double trace_amplitude(const TransitionMatrix& n, const SystemParams& params) {
  const double w = params.omega;
  return std::hypot(n.n.a11 + n.n.a22, n.n.a21 / w - w * n.n.a12);
}

namespace {

struct HarmonicFit {
  double a = 0.0, phi = 0.0, rms = 0.0;
};

// y ~ a cos(nu x - phi) = (a cos phi) cos(nu x) + (a sin phi) sin(nu x).
HarmonicFit fit_harmonic(std::span<const double> x, std::span<const double> y, double nu) {
  double cc = 0, ss = 0, cs = 0, cy = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c = std::cos(nu * x[i]), s = std::sin(nu * x[i]);
    cc += c * c;
    ss += s * s;
    cs += c * s;
    cy += c * y[i];
    sy += s * y[i];
  }
  const double det = cc * ss - cs * cs;
  const double p = (cy * ss - sy * cs) / det;
  const double q = (sy * cc - cy * cs) / det;
  HarmonicFit f;
  f.a = std::hypot(p, q);
  f.phi = std::atan2(q, p);
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = p * std::cos(nu * x[i]) + q * std::sin(nu * x[i]) - y[i];
    sq += e * e;
  }
  f.rms = std::sqrt(sq / static_cast<double>(x.size()));
  return f;
}

}  // namespace

FitResult fit_log_model(std::span<const TraceSample> samples, const SystemParams& params,
                        const FitOptions& opts) {
  std::vector<double> x, y;
  for (const auto& s : samples) {
    if (s.failed) continue;
    if (!(s.E > 0.0 && s.E <= opts.e_max))
      throw InputError("fit_log_model: sample energy outside (0, e_max]");
    x.push_back(std::log(s.E));
    y.push_back(s.trace);
  }
  if (x.size() < opts.min_samples) throw InputError("fit_log_model: too few samples");
  const double nu0 = params.omega / params.lambda_saddle;
  const double span = *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
  if (span < opts.min_periods * 2.0 * kPi / nu0)
    throw InputError("fit_log_model: samples span too few log-periods");

  FitResult out;
  out.n_samples = x.size();
  const auto fixed = fit_harmonic(x, y, nu0);
  out.a = fixed.a;
  out.phi = fixed.phi;
  out.rms_residual = fixed.rms;

  // Variable projection: amplitude and phase are linear once nu is fixed.
  auto cost = [&](double nu) { return fit_harmonic(x, y, nu).rms; };
  double best = nu0, best_cost = cost(nu0);
  constexpr int kScan = 600;
  for (int i = 0; i <= kScan; ++i) {
    const double nu = nu0 * (0.6 + 0.8 * i / kScan);
    const double c = cost(nu);
    if (c < best_cost) {
      best_cost = c;
      best = nu;
    }
  }
  const double step = nu0 * 0.8 / kScan;
  double lo = best - step, hi = best + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
  double c1 = cost(m1), c2 = cost(m2);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * nu0; ++it) {
    if (c1 < c2) {
      hi = m2; m2 = m1; c2 = c1; m1 = hi - g * (hi - lo); c1 = cost(m1);
    } else {
      lo = m1; m1 = m2; c1 = c2; m2 = lo + g * (hi - lo); c2 = cost(m2);
    }
  }
  out.free_frequency = 0.5 * (lo + hi);
  const auto free = fit_harmonic(x, y, out.free_frequency);
  out.free_a = free.a;
  out.free_phi = free.phi;
  out.free_rms_residual = free.rms;
  out.period_lnE = 2.0 * kPi / out.free_frequency;
  return out;
}

}  // namespace syncstab
