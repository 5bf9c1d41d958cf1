#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "syncstab/error.hpp"
#include "syncstab/potential.hpp"

using namespace syncstab;
constexpr double pi = std::numbers::pi;

namespace {

// Closed forms of V = -1 - cos^3 x and its derivatives.
struct Cos3Oracle {
  static double v(double x) { return -1.0 - std::pow(std::cos(x), 3); }
  static double dv(double x) { return 3.0 * std::pow(std::cos(x), 2) * std::sin(x); }
  static double d2v(double x) {
    const double c = std::cos(x), s = std::sin(x);
    return -6.0 * c * s * s + 3.0 * c * c * c;
  }
};

}  // namespace

TEST_CASE("built-in families at the maximum") {
  const auto pend = make_potential("pendulum");
  CHECK(pend.value(pi) == 0.0);
  CHECK(std::abs(pend.value(pi)) <= 1e-12);
  CHECK(std::abs(pend.curvature(pi) + 1.0) <= 1e-12);

  const auto c3 = make_potential("cos3");
  CHECK(std::abs(c3.value(pi)) <= 1e-12);
  CHECK(std::abs(c3.curvature(pi) - Cos3Oracle::d2v(pi)) <= 1e-12);
  CHECK(std::abs(c3.top_curvature() + 3.0) <= 1e-12);
}

TEST_CASE("cos3 matches its closed form everywhere") {
  const auto c3 = Potential::cos3();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> X(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = X(rng);
    const auto v = c3.eval(x);
    CHECK(std::abs(v.v - Cos3Oracle::v(x)) <= 1e-13);
    CHECK(std::abs(v.dv - Cos3Oracle::dv(x)) <= 1e-13);
    CHECK(std::abs(v.d2v - Cos3Oracle::d2v(x)) <= 1e-13);
  }
}

TEST_CASE("fourier [0,-1] reproduces the pendulum") {
  const auto f = make_potential("fourier", {0.0, -1.0});
  const auto p = Potential::pendulum();
  for (double x : {0.0, pi / 2, pi}) CHECK(std::abs(f.value(x) - p.value(x)) <= 1e-12);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> X(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = X(rng);
    CHECK(std::abs(f.value(x) - p.value(x)) <= 1e-12);
  }
}

TEST_CASE("periodicity and finite-difference consistency for every family") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> X(-pi, pi);
  const double h = 1e-4;
  for (const auto& pot : {Potential::pendulum(), Potential::cos3(),
                          Potential::fourier({0.3, -1.0, 0.1, -0.05})}) {
    for (int i = 0; i < 1000; ++i) {
      const double x = X(rng);
      CHECK(std::abs(pot.value(x + 2 * pi) - pot.value(x)) <= 1e-12);
      const double fd = (pot.value(x + h) - pot.value(x - h)) / (2 * h);
      CHECK(std::abs(pot.slope(x) - fd) <= 1e-6);
    }
  }
}

TEST_CASE("near-top accessors agree with direct evaluation and keep relative accuracy") {
  for (const auto& pot : {Potential::pendulum(), Potential::cos3()}) {
    const double lam2 = -pot.top_curvature();
    for (double s : {0.3, 0.9, 2.0}) {
      CHECK(std::abs(pot.depth_from_top(s) + pot.value(pi - s)) <= 1e-14);
      CHECK(std::abs(pot.curvature_excess(s) - (pot.curvature(pi - s) - pot.top_curvature())) <=
            1e-13);
      CHECK(std::abs(pot.parabola_defect(s) - (0.5 * lam2 * s * s - pot.depth_from_top(s))) <=
            1e-13);
    }
  }
  // Pendulum: defect = s^2/2 - (1 - cos s) = s^4/24 - s^6/720 + ...
  const auto p = Potential::pendulum();
  const double s = 1e-6;
  CHECK(p.parabola_defect(s) == doctest::Approx(std::pow(s, 4) / 24.0).epsilon(1e-12));
  CHECK(p.depth_from_top(1e-20) == doctest::Approx(0.5e-40).epsilon(1e-14));
  CHECK(p.curvature_excess(1e-20) == doctest::Approx(0.5e-40).epsilon(1e-14));
}

TEST_CASE("validate") {
  SUBCASE("pendulum passes everything") {
    const auto r = validate(Potential::pendulum(), 256);
    CHECK(r.all_passed());
    CHECK(r.checks.size() == 5);
  }
  SUBCASE("unshifted cos x fails normalization") {
    const Potential raw("raw", {}, {0.0, 1.0}, /*normalize=*/false);
    const auto r = validate(raw, 128);
    CHECK_FALSE(r.all_passed());
    CHECK_FALSE(r.find("normalized")->passed);
    CHECK(r.find("normalized")->witness == doctest::Approx(pi));
  }
  SUBCASE("-(1+cos x)^2 has a degenerate maximum") {
    // (1 + cos x)^2 = 3/2 + 2 cos x + cos(2x)/2
    const auto sq = Potential::fourier({-1.5, -2.0, -0.5});
    // Finite-difference oracle on the closed form: V''(pi) vanishes.
    auto v = [](double x) { return -std::pow(1.0 + std::cos(x), 2); };
    const double h = 1e-3;
    const double fd2 = (v(pi + h) - 2 * v(pi) + v(pi - h)) / (h * h);
    CHECK(std::abs(fd2) < 1e-5);
    const auto r = validate(sq, 256);
    CHECK_FALSE(r.find("nondegenerate")->passed);
    CHECK(r.find("normalized")->passed);
  }
  SUBCASE("a second maximum is caught") {
    // -1 - cos x + 0.6 (1 - cos 2x) lifts V above 0 near x = pi/2.
    const auto bumpy = Potential::fourier({0.6, -1.0, -0.6});
    const auto r = validate(bumpy, 256);
    CHECK_FALSE(r.find("unique_maximum")->passed);
  }
  CHECK_THROWS_AS(validate(Potential::pendulum(), 32), InputError);
}

TEST_CASE("system_params") {
  const auto a = system_params(Potential::pendulum(), 1.0);
  CHECK(a.lambda_saddle == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.omega == doctest::Approx(1.0).epsilon(1e-15));

  const auto c = system_params(Potential::cos3(), 2.0);
  CHECK(c.lambda_saddle == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(c.omega == doctest::Approx(1.0).epsilon(1e-14));

  try {
    system_params(Potential::pendulum(), 0.4);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }

  // Doubling kappa raises omega^2 by exactly 2 kappa.
  for (double k : {0.6, 1.0, 3.7}) {
    const auto p1 = system_params(Potential::pendulum(), k);
    const auto p2 = system_params(Potential::pendulum(), 2 * k);
    CHECK(p2.omega * p2.omega - p1.omega * p1.omega == doctest::Approx(2 * k).epsilon(1e-13));
  }
}

TEST_CASE("potential specs") {
  CHECK(parse_potential("pendulum").name() == "pendulum");
  CHECK(parse_potential("cos3").name() == "cos3");
  const auto f = parse_potential("fourier:0,-1");
  CHECK(f.params() == std::vector<double>{0.0, -1.0});
  CHECK(parse_potential(f.spec()).params() == f.params());
  CHECK_THROWS_AS(parse_potential("mathieu"), InputError);
  CHECK_THROWS_AS(parse_potential("fourier"), InputError);
  CHECK_THROWS_AS(parse_potential("fourier:1,x"), InputError);
  CHECK_THROWS_AS(make_potential("fourier", {}), InputError);
  CHECK_THROWS_AS(make_potential("unknown"), InputError);
}
