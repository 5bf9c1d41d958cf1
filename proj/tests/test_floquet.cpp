#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "syncstab/error.hpp"
#include "syncstab/floquet.hpp"
#include "syncstab/orbit.hpp"

using namespace syncstab;
constexpr double pi = std::numbers::pi;

TEST_CASE("relative channel at kappa = 1") {
  const auto pend = Potential::pendulum();
  const auto m3 = monodromy_w(pend, 1.0, 3.0);
  CHECK(classify(m3).kind == StabilityKind::hyperbolic);
  CHECK(std::abs(m3.trace()) > 2.0);
  const auto m5 = monodromy_w(pend, 1.0, 5.0);
  CHECK(classify(m5).kind == StabilityKind::elliptic);

  for (double E : {1e-3, 0.5, 3.0, 5.0, 100.0}) {
    const auto m = monodromy_w(pend, 1.0, E);
    CHECK(std::abs(m.m.det() - 1.0) <= 1e-9);
    CHECK(m.det_residual == doctest::Approx(std::abs(m.m.det() - 1.0)).epsilon(1e-6).scale(1e-15));
    CHECK(m.T == doctest::Approx(period(pend, E).T).epsilon(1e-12));
  }
}

TEST_CASE("tangent channel has a double unit multiplier") {
  const auto pend = Potential::pendulum();
  for (double E : {0.5, 2.0, 10.0}) {
    const auto m = monodromy_u(pend, E);
    CHECK(std::abs(m.trace() - 2.0) <= 1e-6);
    CHECK(std::abs(m.m.det() - 1.0) <= 1e-9);
  }
  // p_dot is a periodic solution: (p_dot, p_ddot) at t = -tau is mapped to itself.
  const double E = 2.0;
  const double tau = period(pend, E).tau;
  const auto s = orbit_state(pend, E, -tau);
  const std::array<double, 2> z{s.p_dot, -pend.slope(s.p)};
  const auto fz = monodromy_u(pend, E).m.apply(z);
  CHECK(std::abs(fz[0] - z[0]) <= 1e-8);
  CHECK(std::abs(fz[1] - z[1]) <= 1e-8);
}

TEST_CASE("classify") {
  const Monodromy id{Mat2::identity(), 1.0, 0.0};
  CHECK(classify(id).kind == StabilityKind::parabolic);
  CHECK(classify(id).sign == 1);

  const Monodromy hyp{{2.0, 0.0, 0.0, 0.5}, 1.0, 0.0};
  CHECK(classify(hyp).kind == StabilityKind::hyperbolic);
  CHECK(classify(hyp).sign == 1);

  const double c = std::cos(pi / 3), s = std::sin(pi / 3);
  const Monodromy rot{{c, -s, s, c}, 1.0, 0.0};
  CHECK(classify(rot).kind == StabilityKind::elliptic);
  CHECK(classify(rot).trace == doctest::Approx(1.0));

  const Monodromy neg{{-1.0, 0.3, 0.0, -1.0}, 1.0, 0.0};
  CHECK(classify(neg).kind == StabilityKind::parabolic);
  CHECK(classify(neg).sign == -1);

  CHECK(classify_trace(2.0 + 5e-7).kind == StabilityKind::parabolic);
  CHECK(classify_trace(2.0 + 5e-6).kind == StabilityKind::hyperbolic);
  CHECK(classify_trace(-2.0 + 5e-6).kind == StabilityKind::elliptic);

  const Monodromy bad{{2.0, 0.0, 0.0, 1.0}, 1.0, 1.0};
  CHECK_THROWS_AS(classify(bad), NumericalError);

  for (auto k : {StabilityKind::elliptic, StabilityKind::hyperbolic, StabilityKind::parabolic})
    CHECK(stability_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(stability_kind_from_string("spiral"), InputError);
}

TEST_CASE("two periods compose to the square") {
  const auto pend = Potential::pendulum();
  const double E = 2.0, kappa = 1.0;
  const double tau = period(pend, E).tau;
  const Mat2 f = monodromy_w(pend, kappa, E).m;
  const Mat2 two = orbit_transfer(pend, 2.0 * kappa, E, -tau, 3.0 * tau);
  CHECK((two - f * f).frobenius() <= 1e-7);
}

TEST_CASE("classification is stable under a tighter integrator") {
  const auto pend = Potential::pendulum();
  for (double E : {0.7, 1.5, 3.0, 5.0, 20.0}) {
    const auto coarse = classify(monodromy_w(pend, 1.0, E, 1e-10));
    const auto fine = classify(monodromy_w(pend, 1.0, E, 1e-10 / 256));
    CHECK(coarse.kind == fine.kind);
    CHECK(coarse.sign == fine.sign);
  }
}

TEST_CASE("theta winding") {
  const auto pend = Potential::pendulum();
  double prev = 0.0;
  for (double E : {1.0, 0.1, 1e-2, 1e-3, 1e-4}) {
    const double w = theta_winding(pend, 1.0, E, 0.0);
    CHECK(w < 0.0);
    CHECK(w < prev);
    prev = w;
  }
  CHECK(prev < -3.0 * pi);

  const double E = 1e-2;
  const double w0 = theta_winding(pend, 1.0, E, 0.0);
  for (double th : {pi / 4, pi / 2}) CHECK(std::abs(theta_winding(pend, 1.0, E, th) - w0) < pi);

  CHECK(std::abs(theta_winding(pend, 1.0, 1e4, 0.0)) < pi);
}

TEST_CASE("large-energy ellipticity certificate") {
  const auto pend = Potential::pendulum();
  for (double kappa : {1.0, 0.8}) {
    const double E = 1e4;
    const auto cert = large_E_certificate(pend, kappa, E, 360);
    CHECK(cert.positive);
    const double T = period(pend, E).T;
    CHECK(cert.min_value == doctest::Approx(T * std::min(1.0, 2.0 * kappa)).epsilon(0.2));

    // same quantity straight from F_E
    const Mat2 F = monodromy_w(pend, kappa, E).m;
    double direct = 1e300;
    for (int j = 0; j < 360; ++j) {
      const double a = 2 * pi * j / 360;
      const auto fu = F.apply({std::cos(a), std::sin(a)});
      direct = std::min(direct, fu[0] * std::sin(a) - fu[1] * std::cos(a));
    }
    CHECK(cert.min_value == doctest::Approx(direct).epsilon(1e-12));
  }

  CHECK_FALSE(large_E_certificate(pend, 1.0, 3.0).positive);
  CHECK_THROWS_AS(large_E_certificate(pend, 1.0, 0.5), InputError);

  // u and -u give the same value: an even sample count visits both.
  const Mat2 F{0.3, 1.7, -2.2, 0.9};
  for (int j = 0; j < 16; ++j) {
    const double a = 2 * pi * j / 16;
    auto form = [&](double b) {
      const auto fu = F.apply({std::cos(b), std::sin(b)});
      return fu[0] * std::sin(b) - fu[1] * std::cos(b);
    };
    CHECK(form(a) == doctest::Approx(form(a + pi)).epsilon(1e-12));
  }
}
