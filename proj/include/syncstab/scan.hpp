#pragma once

#include <string>
#include <vector>

#include "syncstab/floquet.hpp"
#include "syncstab/potential.hpp"
#include "syncstab/trace_sample.hpp"

namespace syncstab {

enum class GridKind { log, linear };

struct RunConfig {
  Potential potential = Potential::pendulum();
  double kappa = 1.0;
  double e_min = 1e-6;
  double e_max = 100.0;
  GridKind grid = GridKind::log;
  int points = 500;
  double tol = kDefaultTol;
  double tol_class = kDefaultClassTol;
  double collapse_tol = 1e-4;  // interval width in E below which it counts as collapsed
  double endpoint_tol = 1e-6;  // bisection width in E (relative below E = 1)
  int workers = 1;
};

/// Throws InputError for a non-positive range or fewer than 2 points.
void check_config(const RunConfig& cfg);

std::vector<double> energy_grid(const RunConfig& cfg);

TraceSample evaluate_sample(const RunConfig& cfg, double E);

/// One sample per grid point, in grid order, independent of cfg.workers.
/// A point whose integration fails is flagged and the scan continues.
std::vector<TraceSample> scan_trace(const RunConfig& cfg);

struct InstabilityInterval {
  double E_lo = 0.0;
  double E_hi = 0.0;
  int sign = 1;
  bool collapsed = false;
  /// Energy where |tr F_E| peaks inside the interval (the tangency point of a
  /// collapsed gap).
  double peak_E = 0.0;
  double peak_trace = 0.0;
};

/// Maximal runs of hyperbolic samples, with endpoints re-integrated and
/// bisected to cfg.endpoint_tol, plus grid-local maxima of |tr| that touch 2
/// without crossing (reported with E_lo == E_hi and collapsed = true).
std::vector<InstabilityInterval> find_intervals(const std::vector<TraceSample>& samples,
                                                const RunConfig& cfg);

}  // namespace syncstab
