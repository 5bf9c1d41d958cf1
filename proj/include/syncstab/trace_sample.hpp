#pragma once

#include "syncstab/floquet.hpp"

namespace syncstab {

/// One point of an energy sweep of tr F_E.
struct TraceSample {
  double E = 0.0;
  double ln_E = 0.0;
  double trace = 0.0;
  double det_residual = 0.0;
  StabilityKind kind = StabilityKind::elliptic;
  bool failed = false;  // integrator failure; the other fields are NaN
};

}  // namespace syncstab
