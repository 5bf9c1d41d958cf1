#include "syncstab/potential.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "syncstab/error.hpp"

namespace syncstab {

namespace {

constexpr double kPi = std::numbers::pi;

double alternating(std::size_t m) { return (m % 2 == 0) ? 1.0 : -1.0; }

// x^2/2 - (1 - cos x), evaluated without cancellation for small |x|.
double cosine_defect(double x) {
  const double ax = std::abs(x);
  if (ax < 0.5) {
    const double x2 = x * x;
    double term = x2 * x2 / 24.0;
    double sum = 0.0;
    for (int j = 2; j < 14; ++j) {
      sum += term;
      term *= -x2 / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
    }
    return sum;
  }
  const double h = std::sin(0.5 * x);
  return 0.5 * x * x - 2.0 * h * h;
}

double half_versine(double x) {
  const double h = std::sin(0.5 * x);
  return 2.0 * h * h;  // 1 - cos x
}

}  // namespace

Potential::Potential(std::string name, std::vector<double> params,
                     std::vector<double> cosine_coeffs, bool normalize)
    : name_(std::move(name)), params_(std::move(params)), coeffs_(std::move(cosine_coeffs)) {
  if (coeffs_.empty()) throw InputError("potential needs at least one cosine coefficient");
  if (normalize) {
    double top = 0.0;
    for (std::size_t m = 0; m < coeffs_.size(); ++m) top += coeffs_[m] * alternating(m);
    offset_ = -top;
  }
  double exact = 0.0;
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    const double md = static_cast<double>(m);
    exact -= coeffs_[m] * md * md * alternating(m);
  }
  top_curvature_ = exact;
}

Potential Potential::pendulum() { return Potential("pendulum", {}, {0.0, -1.0}); }

// cos^3 x = (3 cos x + cos 3x) / 4; V = -1 - cos^3 x after normalization.
Potential Potential::cos3() { return Potential("cos3", {}, {0.0, -0.75, 0.0, -0.25}); }

Potential Potential::fourier(std::vector<double> coeffs) {
  if (coeffs.empty()) throw InputError("fourier potential needs a non-empty coefficient list");
  auto copy = coeffs;
  return Potential("fourier", std::move(copy), std::move(coeffs));
}

std::string Potential::spec() const {
  if (name_ != "fourier") return name_;
  std::ostringstream out;
  out.precision(17);
  out << "fourier:";
  for (std::size_t i = 0; i < params_.size(); ++i) out << (i ? "," : "") << params_[i];
  return out.str();
}

PotentialValue Potential::eval(double x) const {
  PotentialValue r{offset_, 0.0, 0.0};
  for (std::size_t m = 0; m < coeffs_.size(); ++m) {
    const double md = static_cast<double>(m);
    const double c = std::cos(md * x);
    const double s = std::sin(md * x);
    r.v += coeffs_[m] * c;
    r.dv -= coeffs_[m] * md * s;
    r.d2v -= coeffs_[m] * md * md * c;
  }
  return r;
}

double Potential::depth_from_top(double s) const {
  double d = 0.0;
  for (std::size_t m = 1; m < coeffs_.size(); ++m)
    d += coeffs_[m] * alternating(m) * half_versine(static_cast<double>(m) * s);
  return d;
}

double Potential::parabola_defect(double s) const {
  double d = 0.0;
  for (std::size_t m = 1; m < coeffs_.size(); ++m)
    d += coeffs_[m] * alternating(m) * cosine_defect(static_cast<double>(m) * s);
  return d;
}

double Potential::curvature_excess(double s) const {
  double d = 0.0;
  for (std::size_t m = 1; m < coeffs_.size(); ++m) {
    const double md = static_cast<double>(m);
    d += coeffs_[m] * md * md * alternating(m) * half_versine(md * s);
  }
  return d;
}

Potential make_potential(std::string_view name, const std::vector<double>& params) {
  if (name == "pendulum") return Potential::pendulum();
  if (name == "cos3") return Potential::cos3();
  if (name == "fourier") return Potential::fourier(params);
  throw InputError("unknown potential '" + std::string(name) +
                   "' (expected pendulum, cos3 or fourier)");
}

Potential parse_potential(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string_view tok = rest.substr(0, comma);
      while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
      while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw InputError("bad coefficient '" + std::string(tok) + "' in potential spec");
      params.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  } else if (name == "fourier") {
    throw InputError("fourier potential spec needs coefficients: fourier:c0,c1,...");
  }
  if (name != "fourier" && !params.empty())
    throw InputError("potential '" + std::string(name) + "' takes no coefficients");
  return make_potential(name, params);
}

bool ValidationReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const AssumptionCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate(const Potential& p, int grid_points) {
  if (grid_points < 64) throw InputError("validate needs at least 64 grid points");
  ValidationReport report;
  const int n = grid_points;
  auto grid = [n](int j) { return -kPi + 2.0 * kPi * (j + 0.5) / n; };

  AssumptionCheck periodic{"periodic", true, 0.0, "|V(x+2pi) - V(x)| <= 1e-12"};
  for (int j = 0; j < n; ++j) {
    const double x = grid(j);
    if (std::abs(p.value(x + 2.0 * kPi) - p.value(x)) > 1e-12) {
      periodic.passed = false;
      periodic.witness = x;
      break;
    }
  }
  report.checks.push_back(periodic);

  AssumptionCheck top{"normalized", true, kPi, "V(pi) = 0 within 1e-12"};
  top.passed = std::abs(p.value(kPi)) <= 1e-12;
  report.checks.push_back(top);

  // Negativity on (-pi, pi) is what makes pi the unique global maximum.
  AssumptionCheck unique{"unique_maximum", true, 0.0, "V(x) < 0 for x in (-pi, pi)"};
  for (int j = 0; j < n; ++j) {
    const double x = grid(j);
    if (!(p.value(x) < 0.0)) {
      unique.passed = false;
      unique.witness = x;
      break;
    }
  }
  report.checks.push_back(unique);

  AssumptionCheck nondeg{"nondegenerate", true, kPi, "V''(pi) < 0"};
  nondeg.passed = p.top_curvature() < -1e-9;
  report.checks.push_back(nondeg);

  AssumptionCheck derivs{"derivatives", true, 0.0, "V', V'' match centered differences"};
  const double h = 1e-4;
  for (int j = 0; j < n; ++j) {
    const double x = grid(j);
    const auto c = p.eval(x);
    const double vp = p.value(x + h), vm = p.value(x - h);
    const double fd1 = (vp - vm) / (2.0 * h);
    const double fd2 = (p.slope(x + h) - p.slope(x - h)) / (2.0 * h);
    if (std::abs(c.dv - fd1) > 1e-6 || std::abs(c.d2v - fd2) > 1e-6) {
      derivs.passed = false;
      derivs.witness = x;
      break;
    }
  }
  report.checks.push_back(derivs);
  return report;
}

SystemParams system_params(const Potential& p, double kappa) {
  const double curv = p.top_curvature();
  const double omega2 = 2.0 * kappa + curv;
  if (!(omega2 > 0.0)) {
    std::ostringstream msg;
    msg << "coupling too weak: need kappa > -V''(pi)/2 = " << -curv / 2.0 << " (got " << kappa
        << ")";
    throw InputError(msg.str());
  }
  if (!(curv < 0.0)) throw InputError("V''(pi) must be negative");
  return {kappa, std::sqrt(-curv), std::sqrt(omega2)};
}

}  // namespace syncstab
