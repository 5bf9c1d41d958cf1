#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace syncstab {

/// Value and first two derivatives of a potential at one point.
struct PotentialValue {
  double v = 0.0;
  double dv = 0.0;
  double d2v = 0.0;
};

/// A 2*pi-periodic even potential V(x) = sum_m c_m cos(m x) + offset.
///
/// Every built-in family is a finite cosine series, which makes V even and
/// lets the quantities near the maximum at x = pi be evaluated without
/// cancellation: the `*_from_top` accessors take the distance s = pi - x
/// and return differences relative to the top exactly, so they stay
/// accurate when s is far below machine epsilon relative to pi.
class Potential {
 public:
  /// `normalize` shifts the series so that V(pi) = 0.
  Potential(std::string name, std::vector<double> params, std::vector<double> cosine_coeffs,
            bool normalize = true);

  static Potential pendulum();
  static Potential cos3();
  static Potential fourier(std::vector<double> coeffs);

  const std::string& name() const { return name_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<double>& cosine_coeffs() const { return coeffs_; }

  /// CLI spec string that reconstructs this potential.
  std::string spec() const;

  PotentialValue eval(double x) const;
  double value(double x) const { return eval(x).v; }
  double slope(double x) const { return eval(x).dv; }
  double curvature(double x) const { return eval(x).d2v; }

  /// V''(pi).
  double top_curvature() const { return top_curvature_; }

  /// V(pi) - V(pi - s); nonnegative for an admissible potential.
  double depth_from_top(double s) const;
  /// -V''(pi) s^2 / 2 - depth_from_top(s): the departure from the osculating
  /// parabola, O(s^4).
  double parabola_defect(double s) const;
  /// V''(pi - s) - V''(pi), O(s^2).
  double curvature_excess(double s) const;

 private:
  std::string name_;
  std::vector<double> params_;
  std::vector<double> coeffs_;
  double offset_ = 0.0;
  double top_curvature_ = 0.0;
};

/// Builds one of the named families: "pendulum", "cos3" or "fourier"
/// (params are the cosine coefficients c0, c1, ...).
Potential make_potential(std::string_view name, const std::vector<double>& params = {});

/// Parses `pendulum`, `cos3` or `fourier:c0,c1,...`.
Potential parse_potential(std::string_view spec);

struct AssumptionCheck {
  std::string name;
  bool passed = true;
  double witness = 0.0;  // offending x when !passed
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;
  bool all_passed() const;
  const AssumptionCheck* find(std::string_view name) const;
};

/// Checks periodicity, V(pi) = 0, strict negativity away from the maximum,
/// V''(pi) < 0 and derivative consistency on a uniform grid.
ValidationReport validate(const Potential& p, int grid_points = 256);

struct SystemParams {
  double kappa = 0.0;
  double lambda_saddle = 0.0;  // sqrt(-V''(pi))
  double omega = 0.0;          // sqrt(2 kappa + V''(pi))
};

/// Throws InputError unless 2 kappa + V''(pi) > 0.
SystemParams system_params(const Potential& p, double kappa);

}  // namespace syncstab
