#pragma once

#include <functional>
#include <span>
#include <vector>

#include "syncstab/error.hpp"
#include "syncstab/floquet.hpp"
#include "syncstab/mat2.hpp"
#include "syncstab/potential.hpp"
#include "syncstab/trace_sample.hpp"

namespace syncstab {

// ---------------------------------------------------------------------------
// Regularized period constant: T(E) = (1/lambda) ln(1/E) + K + o(1).

enum class KMethod { limit, integral };

struct PeriodResidual {
  double E = 0.0;
  double residual = 0.0;  // T(E) - (1/lambda) ln(1/E) - K
};

struct RegularizedPeriod {
  double K = 0.0;              // value selected by the requested method
  double lambda_saddle = 0.0;
  double K_limit = 0.0;        // extrapolated T(E) - (1/lambda) ln(1/E)
  double K_integral = 0.0;     // (2/lambda) ln(sqrt2 pi lambda) + 2 G
  double K_literal = 0.0;      // (2 sqrt2/lambda) ln(2 pi lambda) + int f, as printed; diagnostic
  std::vector<PeriodResidual> diagnostics;
};

/// Thrown when the limit and the integral evaluations of K differ by more than 1e-2.
class KDisagreement : public NumericalError {
 public:
  KDisagreement(double k_limit, double k_integral);
  double k_limit;
  double k_integral;
};

/// Energies 10^-3 ... 10^-8 with `points_per_decade` samples per decade.
RegularizedPeriod regularized_K(const Potential& pot, KMethod method = KMethod::limit,
                                double tol = kDefaultTol, int points_per_decade = 1);

// ---------------------------------------------------------------------------
// Heteroclinic transition matrix N = lim C(t) C^{-1}(-t), where X = e^{At} C
// solves z' = (A + B(t)) z along the separatrix orbit.

struct TransitionMatrix {
  Mat2 n;
  double convergence_rate = 0.0;  // fitted exponential rate of ||C(t)C^{-1}(-t) - N||
  double prefactor = 0.0;         // max_t ||C(t)C^{-1}(-t) - N|| e^{lambda t}
  double det_residual = 0.0;
  double horizon = 0.0;
};

/// (2,1) entry of B as a function of time t and the separatrix offset
/// s = pi - |p0(t)| at that time.
using DecayingCoefficient = std::function<double(double t, double offset)>;

/// Integrates C' = e^{-At} B(t) e^{At} C from C(0) = c0 over [-horizon, horizon].
TransitionMatrix transition_matrix(const Potential& pot, double omega, const DecayingCoefficient& b,
                                   double horizon, double tol = kDefaultTol,
                                   const Mat2& c0 = Mat2::identity());

/// B(t) = -lambda^2 - V''(p0(t)). Default horizon 40 / lambda.
TransitionMatrix transition_N(const Potential& pot, double kappa, double horizon = 0.0,
                              double tol = kDefaultTol, const Mat2& c0 = Mat2::identity());

/// tau-advance of w'' + (2 kappa + V''(p0(t))) w = 0 from -tau to tau, integrated directly.
Monodromy heteroclinic_floquet(const Potential& pot, double kappa, double tau,
                               double tol = kDefaultTol);

/// tr(e^{A tau} N e^{A tau}) = (n11 + n22) cos 2 omega tau + (n21/omega - omega n12) sin 2 omega tau.
double predicted_trace_at(const TransitionMatrix& n, const SystemParams& params, double tau);

/// Same, with tau = ((1/lambda) ln(1/E) + K) / 2.
double predicted_trace(const TransitionMatrix& n, const SystemParams& params, double E,
                       const RegularizedPeriod& K);

/// sqrt((n11 + n22)^2 + (n21/omega - omega n12)^2).
double trace_amplitude(const TransitionMatrix& n, const SystemParams& params);

// ---------------------------------------------------------------------------
// Log-periodic model tr F_E ~ a cos((omega/lambda) ln E - phi).

struct FitResult {
  // frequency fixed to omega/lambda
  double a = 0.0;
  double phi = 0.0;
  double rms_residual = 0.0;
  // frequency free
  double period_lnE = 0.0;
  double free_frequency = 0.0;
  double free_a = 0.0;
  double free_phi = 0.0;
  double free_rms_residual = 0.0;
  std::size_t n_samples = 0;
};

struct FitOptions {
  double e_max = 1e-2;            // every sample must lie below this energy
  std::size_t min_samples = 30;
  double min_periods = 1.25;      // ln-E span in units of 2 pi lambda / omega
};

FitResult fit_log_model(std::span<const TraceSample> samples, const SystemParams& params,
                        const FitOptions& opts = {});

}  // namespace syncstab
