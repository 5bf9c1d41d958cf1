#include "syncstab/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "syncstab/error.hpp"

namespace syncstab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Grid maxima of |tr| below 2 - kTouchWindow are not examined for tangency.
constexpr double kTouchWindow = 0.5;

double trace_at(const RunConfig& cfg, double E) {
  return monodromy_w(cfg.potential, cfg.kappa, E, cfg.tol).trace();
}

double bracket_width(const RunConfig& cfg, double E) {
  return cfg.endpoint_tol * std::min(1.0, E);
}

// Root of sign * tr(E) - 2 between a (below 2) and b (above 2).
double bisect_edge(const RunConfig& cfg, int sign, double a, double b) {
  double inside = b, outside = a;
  while (std::abs(inside - outside) > bracket_width(cfg, std::min(inside, outside))) {
    const double mid = cfg.grid == GridKind::log ? std::sqrt(inside * outside)
                                                 : 0.5 * (inside + outside);
    if (sign * trace_at(cfg, mid) - 2.0 > 0.0) inside = mid; else outside = mid;
  }
  return 0.5 * (inside + outside);
}

struct Peak {
  double E;
  double value;  // sign * tr
};

// Golden-section maximization of sign * tr over [a, b] in ln E.
Peak refine_peak(const RunConfig& cfg, int sign, double a, double b) {
  double lo = std::log(a), hi = std::log(b);
  auto f = [&](double x) { return sign * trace_at(cfg, std::exp(x)); };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
  double f1 = f(m1), f2 = f(m2);
  for (int it = 0; it < 80 && hi - lo > 1e-11; ++it) {
    if (f1 > f2) {
      hi = m2; m2 = m1; f2 = f1; m1 = hi - g * (hi - lo); f1 = f(m1);
    } else {
      lo = m1; m1 = m2; f1 = f2; m2 = lo + g * (hi - lo); f2 = f(m2);
    }
  }
  const double x = f1 > f2 ? m1 : m2;
  return {std::exp(x), std::max(f1, f2)};
}

}  // namespace

void check_config(const RunConfig& cfg) {
  if (!(cfg.e_min > 0.0 && cfg.e_max > cfg.e_min))
    throw InputError("energy range must satisfy 0 < emin < emax");
  if (cfg.points < 2) throw InputError("scan needs at least 2 points");
  if (cfg.workers < 1) throw InputError("workers must be >= 1");
  if (!(cfg.tol > 0.0)) throw InputError("tolerance must be positive");
  system_params(cfg.potential, cfg.kappa);
}

std::vector<double> energy_grid(const RunConfig& cfg) {
  check_config(cfg);
  std::vector<double> E(static_cast<std::size_t>(cfg.points));
  const double n = cfg.points - 1;
  if (cfg.grid == GridKind::log) {
    const double a = std::log(cfg.e_min), b = std::log(cfg.e_max);
    for (int i = 0; i < cfg.points; ++i) E[i] = std::exp(a + (b - a) * i / n);
  } else {
    for (int i = 0; i < cfg.points; ++i) E[i] = cfg.e_min + (cfg.e_max - cfg.e_min) * i / n;
  }
  E.front() = cfg.e_min;
  E.back() = cfg.e_max;
  return E;
}

TraceSample evaluate_sample(const RunConfig& cfg, double E) {
  TraceSample s;
  s.E = E;
  s.ln_E = std::log(E);
  try {
    const auto m = monodromy_w(cfg.potential, cfg.kappa, E, cfg.tol);
    s.trace = m.trace();
    s.det_residual = m.det_residual;
    s.kind = classify(m, cfg.tol_class).kind;
  } catch (const NumericalError&) {
    s.failed = true;
    s.trace = kNaN;
    s.det_residual = kNaN;
  }
  return s;
}

std::vector<TraceSample> scan_trace(const RunConfig& cfg) {
  const auto grid = energy_grid(cfg);
  std::vector<TraceSample> out(grid.size());
  const auto workers = static_cast<std::size_t>(std::min<int>(cfg.workers, cfg.points));
  auto run = [&](std::size_t w) {
    for (std::size_t i = w; i < grid.size(); i += workers) out[i] = evaluate_sample(cfg, grid[i]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return out;
}

std::vector<InstabilityInterval> find_intervals(const std::vector<TraceSample>& samples,
                                                const RunConfig& cfg) {
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].E > samples[i - 1].E))
      throw InputError("find_intervals: samples must be strictly increasing in E");

  const std::size_t n = samples.size();
  auto usable = [&](std::size_t i) { return !samples[i].failed; };
  auto hyperbolic = [&](std::size_t i) {
    return usable(i) && samples[i].kind == StabilityKind::hyperbolic;
  };
  auto sgn = [](double tr) { return tr < 0.0 ? -1 : 1; };

  std::vector<InstabilityInterval> found;
  for (std::size_t i = 0; i < n;) {
    if (!hyperbolic(i)) {
      ++i;
      continue;
    }
    const int sign = sgn(samples[i].trace);
    std::size_t j = i;
    while (j + 1 < n && hyperbolic(j + 1) && sgn(samples[j + 1].trace) == sign) ++j;

    InstabilityInterval iv;
    iv.sign = sign;
    auto below_two = [&](std::size_t k) { return usable(k) && sign * samples[k].trace < 2.0; };
    iv.E_lo = (i > 0 && below_two(i - 1)) ? bisect_edge(cfg, sign, samples[i - 1].E, samples[i].E)
                                          : (i > 0 ? samples[i - 1].E : samples[i].E);
    iv.E_hi = (j + 1 < n && below_two(j + 1))
                  ? bisect_edge(cfg, sign, samples[j + 1].E, samples[j].E)
                  : (j + 1 < n ? samples[j + 1].E : samples[j].E);
    std::size_t peak = i;
    for (std::size_t k = i; k <= j; ++k)
      if (sign * samples[k].trace > sign * samples[peak].trace) peak = k;
    iv.peak_E = samples[peak].E;
    iv.peak_trace = samples[peak].trace;
    iv.collapsed = iv.E_hi - iv.E_lo < cfg.collapse_tol;
    found.push_back(iv);
    i = j + 1;
  }

  // Tangencies: local maxima of |tr| that stay within the non-hyperbolic band.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!usable(i - 1) || !usable(i) || !usable(i + 1)) continue;
    if (hyperbolic(i - 1) || hyperbolic(i) || hyperbolic(i + 1)) continue;
    const double here = std::abs(samples[i].trace);
    if (here < 2.0 - kTouchWindow) continue;
    if (here < std::abs(samples[i - 1].trace) || here < std::abs(samples[i + 1].trace)) continue;
    const int sign = sgn(samples[i].trace);
    if (sgn(samples[i - 1].trace) != sign || sgn(samples[i + 1].trace) != sign) continue;

    const Peak pk = refine_peak(cfg, sign, samples[i - 1].E, samples[i + 1].E);
    if (pk.value < 2.0 - cfg.tol_class) continue;
    InstabilityInterval iv;
    iv.sign = sign;
    iv.peak_E = pk.E;
    iv.peak_trace = sign * pk.value;
    if (pk.value <= 2.0 + cfg.tol_class) {
      iv.E_lo = iv.E_hi = pk.E;
    } else {
      iv.E_lo = bisect_edge(cfg, sign, samples[i - 1].E, pk.E);
      iv.E_hi = bisect_edge(cfg, sign, samples[i + 1].E, pk.E);
    }
    iv.collapsed = iv.E_hi - iv.E_lo < cfg.collapse_tol;
    found.push_back(iv);
  }

  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.E_lo < b.E_lo; });
  return found;
}

}  // namespace syncstab
