#include "syncstab/lame.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "syncstab/elliptic.hpp"
#include "syncstab/error.hpp"
#include "syncstab/ode.hpp"

namespace syncstab {

namespace {

constexpr int kTruncationPadding = 30;

void require_lame(int n, double k2) {
  if (n < 1) throw InputError("Lame index n must be >= 1");
  if (!(k2 >= 0.0 && k2 < 1.0)) throw InputError("Lame modulus needs 0 <= k^2 < 1");
}

// c as a function of lam for fixed n, k^2.
double ince_c(int n, double k2, double lam) {
  return (2.0 * lam - n * (n + 1.0) * k2) / (2.0 - k2);
}

std::vector<double> lowest_roots(int n, double k2, AntiperiodicFamily family, int order) {
  LameParams p{n, k2, 0.0};
  auto det_at = [&](double lam) {
    p.lam = lam;
    return antiperiodic_determinant(ince_coeffs(p), family, order);
  };
  double hi = 4.0 * n * n + n * (n + 1.0) * k2 + 1.0;
  std::vector<double> roots;
  for (int attempt = 0; attempt < 8; ++attempt) {
    roots.clear();
    constexpr int kScan = 4000;
    double prev_lam = 0.0, prev = det_at(0.0);
    for (int i = 1; i <= kScan && static_cast<int>(roots.size()) < n; ++i) {
      const double lam = hi * i / kScan;
      const double cur = det_at(lam);
      if (cur == 0.0) {
        roots.push_back(lam);
      } else if (prev != 0.0 && std::signbit(cur) != std::signbit(prev)) {
        double lo = prev_lam, up = lam, flo = prev;
        for (int it = 0; it < 200 && up - lo > 1e-15 * std::max(1.0, up); ++it) {
          const double mid = 0.5 * (lo + up);
          const double fm = det_at(mid);
          if (fm == 0.0) { lo = up = mid; break; }
          if (std::signbit(fm) == std::signbit(flo)) { lo = mid; flo = fm; } else { up = mid; }
        }
        roots.push_back(0.5 * (lo + up));
      }
      prev_lam = lam;
      prev = cur;
    }
    if (static_cast<int>(roots.size()) >= n) break;
    hi *= 2.0;
  }
  if (static_cast<int>(roots.size()) < n)
    throw NumericalError("band-edge root finder did not bracket enough eigenvalues");
  roots.resize(static_cast<std::size_t>(n));
  return roots;
}

}  // namespace

LameParams map_energy(double kappa, double E) {
  if (!(E > 0.0)) throw InputError("map_energy needs E > 0");
  const double k2 = 2.0 / (2.0 + E);
  return {1, k2, (2.0 * kappa + 1.0) * k2};
}

InceCoeffs ince_coeffs(const LameParams& p) {
  require_lame(p.n, p.k2);
  const double denom = 2.0 - p.k2;
  const double a = p.k2 / denom;
  return {a, -a, ince_c(p.n, p.k2, p.lam), p.n * (p.n + 1.0) * p.k2 / denom};
}

QLambda q_lambda(const InceCoeffs& c, double m) {
  return {2.0 * c.a * m * m - c.b * m - 0.5 * c.d, 4.0 * m * m - c.c};
}

double antiperiodic_determinant(const InceCoeffs& c, AntiperiodicFamily family, int order) {
  if (order < 1) throw InputError("determinant order must be >= 1");
  const double fold = family == AntiperiodicFamily::cosine ? 1.0 : -1.0;
  // Continuant recurrence; rescaling keeps the sign and avoids overflow.
  double prev = 1.0;
  double cur = fold * q_lambda(c, -0.5).Q + q_lambda(c, 0.5).Lambda;
  for (int m = 1; m < order; ++m) {
    const double diag = q_lambda(c, m + 0.5).Lambda;
    const double coupling = q_lambda(c, m - 0.5).Q * q_lambda(c, -(m + 0.5)).Q;
    const double next = diag * cur - coupling * prev;
    prev = cur;
    cur = next;
    const double scale = std::max(std::abs(cur), std::abs(prev));
    if (scale > 1e150) {
      cur /= scale;
      prev /= scale;
    }
  }
  return cur;
}

BandEdges antiperiodic_eigenvalues(int n, double k2, int order) {
  require_lame(n, k2);
  if (order <= 0) order = n + kTruncationPadding;
  if (order < n) throw InputError("truncation order must be at least n");
  return {lowest_roots(n, k2, AntiperiodicFamily::cosine, order),
          lowest_roots(n, k2, AntiperiodicFamily::sine, order)};
}

Monodromy lame_monodromy(const LameParams& p, double tol) {
  require_lame(p.n, p.k2);
  const auto k = EllipticModulus::from_k2(p.k2);
  const double span = 2.0 * complete_K(k);
  const double weight = p.n * (p.n + 1.0) * p.k2;
  auto rhs = [&](double tau, const ode::State<4>& y) {
    const double sn = jacobi(tau, k).sn;
    const double q = p.lam - weight * sn * sn;
    return ode::State<4>{y[2], y[3], -q * y[0], -q * y[1]};
  };
  const auto y = ode::integrate<4>(rhs, ode::State<4>{1.0, 0.0, 0.0, 1.0}, 0.0, span, tol);
  Monodromy out;
  out.m = {y[0], y[1], y[2], y[3]};
  out.T = span;
  out.det_residual = std::abs(out.m.det() - 1.0);
  return out;
}

InstabilityWindow instability_interval(double kappa) {
  InstabilityWindow w{4.0 * kappa - 2.0, 4.0 * kappa, false, {}};
  if (kappa <= 0.5) {
    w.truncated = true;
    w.E_lo = std::max(0.0, w.E_lo);
    w.E_hi = std::max(0.0, w.E_hi);
    std::ostringstream msg;
    msg << "kappa = " << kappa << " <= 1/2: interval truncated at E = 0";
    w.warning = msg.str();
  }
  return w;
}

bool is_unstable(double kappa, double E) {
  if (!(E > 0.0)) throw InputError("is_unstable needs E > 0");
  return E > 4.0 * kappa - 2.0 && E < 4.0 * kappa;
}

}  // namespace syncstab
