#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "syncstab/elliptic.hpp"
#include "syncstab/error.hpp"

using namespace syncstab;
constexpr double pi = std::numbers::pi;

namespace {

// Adaptive quadrature of the defining integral.
double K_by_quadrature(double k2) {
  auto f = [k2](double t) { return 1.0 / std::sqrt(1.0 - k2 * std::sin(t) * std::sin(t)); };
  double err = 0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi / 2, 12, 1e-14,
                                                                        &err);
}

}  // namespace

TEST_CASE("complete_K") {
  CHECK(complete_K(EllipticModulus::from_k2(0.0)) == doctest::Approx(pi / 2).epsilon(1e-15));

  const double oracle = K_by_quadrature(0.5);
  CHECK(oracle == doctest::Approx(1.854074677).epsilon(1e-9));
  CHECK(complete_K(EllipticModulus::from_k2(0.5)) == doctest::Approx(oracle).epsilon(1e-13));

  for (double k2 : {0.1, 0.3, 0.7, 0.9, 0.99}) {
    CHECK(complete_K(EllipticModulus::from_k2(k2)) ==
          doctest::Approx(K_by_quadrature(k2)).epsilon(1e-12));
  }
}

TEST_CASE("complete_K logarithmic limit") {
  const double k2 = 1.0 - 1e-8;
  const auto k = EllipticModulus::from_k2(k2);
  // Quadrature oracle in the peaked regime; the quadrature itself is checked
  // against the library value before the asymptotic comparison.
  auto f = [k2](double t) { return 1.0 / std::sqrt(1.0 - k2 * std::sin(t) * std::sin(t)); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double oracle = ts.integrate(f, 0.0, pi / 2);
  CHECK(complete_K(k) == doctest::Approx(oracle).epsilon(1e-10));
  const double asym = std::log(4.0 / std::sqrt(1.0 - k2));
  CHECK(std::abs(complete_K(k) - asym) < 1e-6);
  // and the gap shrinks as k -> 1
  const auto k1 = EllipticModulus::from_k2(1.0 - 1e-4);
  CHECK(std::abs(complete_K(k) - asym) < std::abs(complete_K(k1) - std::log(4.0 / 1e-2)));
}

TEST_CASE("modulus validation") {
  CHECK_THROWS_AS(EllipticModulus::from_k2(1.0), InputError);
  CHECK_THROWS_AS(EllipticModulus::from_k2(-0.1), InputError);
  CHECK_THROWS_AS(EllipticModulus::from_k(1.0), InputError);
}

TEST_CASE("jacobi special values") {
  const auto z = jacobi(0.0, EllipticModulus::from_k2(0.64));
  CHECK(z.am == 0.0);
  CHECK(z.sn == 0.0);
  CHECK(z.cn == 1.0);
  CHECK(z.dn == 1.0);

  for (double u : {-3.0, 0.4, 2.2, 17.0}) {
    const auto c = jacobi(u, EllipticModulus::from_k2(0.0));
    CHECK(c.am == doctest::Approx(u));
    CHECK(c.sn == doctest::Approx(std::sin(u)));
    CHECK(c.cn == doctest::Approx(std::cos(u)));
    CHECK(c.dn == 1.0);
  }

  // Quarter period: the defining integral from 0 to 1 is K, so sn(K) = 1.
  const double k2 = 0.5;
  auto f = [k2](double x) { return 1.0 / std::sqrt((1 - x * x) * (1 - k2 * x * x)); };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double quarter = ts.integrate(f, 0.0, 1.0);
  CHECK(std::abs(jacobi(quarter, EllipticModulus::from_k2(k2)).sn - 1.0) <= 1e-10);
}

TEST_CASE("jacobi against an independent implementation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-20.0, 20.0), K2(0.0, 0.999);
  for (int i = 0; i < 500; ++i) {
    const double u = U(rng), k2 = K2(rng);
    double cn = 0, dn = 0;
    const double sn = boost::math::jacobi_elliptic(std::sqrt(k2), u, &cn, &dn);
    const auto j = jacobi(u, EllipticModulus::from_k2(k2));
    CHECK(std::abs(j.sn - sn) <= 1e-10);
    CHECK(std::abs(j.cn - cn) <= 1e-10);
    CHECK(std::abs(j.dn - dn) <= 1e-10);
  }
}

TEST_CASE("jacobi identities, periodicity and derivative") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-30.0, 30.0), K2(0.0, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const double u = U(rng);
    const auto k = EllipticModulus::from_k2(K2(rng));
    const auto j = jacobi(u, k);
    CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1.0) <= 1e-10);
    CHECK(std::abs(j.dn * j.dn + k.k2() * j.sn * j.sn - 1.0) <= 1e-10);
    CHECK(std::abs(j.dn - std::sqrt(1.0 - k.k2() * j.sn * j.sn)) <= 1e-10);

    const double K4 = 4.0 * complete_K(k);
    CHECK(std::abs(jacobi(u + K4, k).sn - j.sn) <= 1e-9);

    const double h = 1e-5;
    const double fd = (jacobi(u + h, k).sn - jacobi(u - h, k).sn) / (2 * h);
    CHECK(std::abs(fd - j.cn * j.dn) <= 1e-6);
  }
}
