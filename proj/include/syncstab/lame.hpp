#pragma once

#include <string>
#include <vector>

#include "syncstab/floquet.hpp"

namespace syncstab {

/// W'' + [lam - n(n+1) k^2 sn^2(tau, k)] W = 0.
struct LameParams {
  int n = 1;
  double k2 = 0.0;
  double lam = 0.0;
};

/// Coefficients of (1 + a cos 2u) psi'' + b sin(2u) psi' + (c + d cos 2u) psi = 0,
/// the form the Lame equation takes under u = am(tau, k).
struct InceCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

/// Synchronous energy -> Lame parameters for the pendulum potential:
/// n = 1, k^2 = 2/(2+E), lam = (2 kappa + 1) k^2.
LameParams map_energy(double kappa, double E);

InceCoeffs ince_coeffs(const LameParams& p);

struct QLambda {
  double Q = 0.0;       // 2 a m^2 - b m - d/2
  double Lambda = 0.0;  // 4 m^2 - c
};
QLambda q_lambda(const InceCoeffs& c, double m);

/// pi-antiperiodic Fourier families: cos((2m+1)u) (A) and sin((2m+1)u) (B).
enum class AntiperiodicFamily { cosine, sine };

/// Determinant of the order x order leading block of the three-term system for
/// the A (cosine) or B (sine) coefficients. Row 0 carries +-Q(-1/2) + Lambda(1/2),
/// row m >= 1 has Q(m-1/2), Lambda(m+1/2), Q(-(m+3/2)).
double antiperiodic_determinant(const InceCoeffs& c, AntiperiodicFamily family, int order);

struct BandEdges {
  std::vector<double> antiperiodic_plus;   // cosine family, ascending
  std::vector<double> antiperiodic_minus;  // sine family, ascending
};

/// Lowest n antiperiodic eigenvalues of each family. The three-term system is
/// truncated at `order` rows (0 selects n + 30); for n = 1 the leading 1x1
/// block decouples exactly, so the edges are 1 and 1 + k^2 for any order.
BandEdges antiperiodic_eigenvalues(int n, double k2, int order = 0);

/// Floquet matrix of the Lame equation over one period 2K(k) of sn^2.
Monodromy lame_monodromy(const LameParams& p, double tol = kDefaultTol);

struct InstabilityWindow {
  double E_lo = 0.0;
  double E_hi = 0.0;
  bool truncated = false;  // kappa <= 1/2 pushed the lower end to 0
  std::string warning;
};

/// (4 kappa - 2, 4 kappa): the only energies where the pendulum's synchronous orbit is unstable.
InstabilityWindow instability_interval(double kappa);

bool is_unstable(double kappa, double E);

}  // namespace syncstab
