#pragma once

namespace syncstab {

/// Real elliptic modulus, 0 <= k^2 < 1.
class EllipticModulus {
 public:
  /// Throws InputError unless 0 <= k2 < 1.
  static EllipticModulus from_k2(double k2);
  static EllipticModulus from_k(double k);

  double k() const { return k_; }
  double k2() const { return k2_; }
  /// Complementary modulus sqrt(1 - k^2).
  double kp() const { return kp_; }

 private:
  EllipticModulus(double k, double k2, double kp) : k_(k), k2_(k2), kp_(kp) {}
  double k_, k2_, kp_;
};

/// K(k) = int_0^{pi/2} dt / sqrt(1 - k^2 sin^2 t), by arithmetic-geometric mean.
double complete_K(EllipticModulus k);

struct JacobiValues {
  double am = 0.0;
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

/// Jacobi amplitude and sn, cn, dn by the descending Landen (AGM) scheme.
JacobiValues jacobi(double u, EllipticModulus k);

}  // namespace syncstab
