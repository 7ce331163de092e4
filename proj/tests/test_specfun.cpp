#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pqnorm/krivine.hpp"
#include "pqnorm/specfun.hpp"

using namespace pqnorm;

TEST_CASE("gamma_fn at integers and one half") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  // Defining integral int_0^inf t^{-1/2} e^{-t} dt.
  boost::math::quadrature::tanh_sinh<double> ts;
  const double ref = ts.integrate([](double t) { return std::exp(-t) / std::sqrt(t); }, 0.0,
                                  std::numeric_limits<double>::infinity());
  CHECK(std::abs(gamma_fn(0.5) - ref) < 1e-10);
  CHECK(std::abs(gamma_fn(0.5) - 1.7724539) < 1e-7);
  CHECK_THROWS_AS(gamma_fn(0.0), DomainError);
  CHECK_THROWS_AS(gamma_fn(-2.5), DomainError);
}

TEST_CASE("gaussian_moment values") {
  CHECK(gaussian_moment(2.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gaussian_moment(0.0) == 1.0);
  // E g^4 = 3 by the moment recursion E g^{2k} = (2k-1) E g^{2k-2}.
  double m = 1.0;
  for (int k = 1; k <= 2; ++k) m *= 2 * k - 1;
  CHECK(std::abs(gaussian_moment(4.0) - std::pow(m, 0.25)) < 1e-12);
  CHECK_THROWS_AS(gaussian_moment(-1.0), DomainError);
}

TEST_CASE("gaussian_moment(1) against Monte Carlo E|g|") {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  const long N = 10000000;
  double s = 0.0, s2 = 0.0;
  for (long i = 0; i < N; ++i) {
    const double v = std::abs(g(rng));
    s += v;
    s2 += v * v;
  }
  const double mean = s / N;
  const double se = std::sqrt((s2 / N - mean * mean) / N);
  CHECK(std::abs(gaussian_moment(1.0) - mean) <= 4.0 * se);
  CHECK(std::abs(gaussian_moment(1.0) - 0.7978846) < 1e-7);
}

TEST_CASE("gaussian_moment is nondecreasing for r > 0") {
  double prev = gaussian_moment(0.01);
  for (double r = 0.05; r <= 12.0; r += 0.05) {
    const double v = gaussian_moment(r);
    CHECK(v > 0.0);
    CHECK(v >= prev - 1e-15);
    prev = v;
  }
}

TEST_CASE("hyp_coeffs examples") {
  auto s = hyp_coeffs<double>(HypKind::F21, {0.5, 0.5, 1.5}, 2);
  REQUIRE(s.order() == 2);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] == doctest::Approx(1.0 / 6.0));
  CHECK(s[2] == doctest::Approx(3.0 / 40.0));

  auto z = hyp_coeffs<double>(HypKind::F21, {0.0, 0.3, 1.5}, 8);
  CHECK(z[0] == 1.0);
  for (int k = 1; k <= 8; ++k) CHECK(z[k] == 0.0);

  auto e = hyp_coeffs<double>(HypKind::F11, {1.0, 1.0}, 3);
  CHECK(e[0] == doctest::Approx(1.0));
  CHECK(e[1] == doctest::Approx(1.0));
  CHECK(e[2] == doctest::Approx(0.5));
  CHECK(e[3] == doctest::Approx(1.0 / 6.0));

  CHECK_THROWS_AS(hyp_coeffs<double>(HypKind::F21, {0.5, 0.5, -2.0}, 4), DomainError);
  CHECK_THROWS_AS(hyp_coeffs<double>(HypKind::F11, {0.5, 0.0}, 4), DomainError);
}

TEST_CASE("hyp_coeffs are nonnegative for positive parameters") {
  for (double w : {0.1, 0.5, 1.3})
    for (double al : {0.2, 0.9})
      for (double be : {0.5, 1.5, 3.0}) {
        auto s = hyp_coeffs<double>(HypKind::F21, {w, al, be}, 40);
        for (int k = 0; k <= 40; ++k) CHECK(s[k] >= 0.0);
      }
}

TEST_CASE("euler_continuation examples") {
  CHECK(std::abs(euler_continuation({0.5, 0.0}, 0.0, 0.0) - std::asin(0.5)) < 1e-9);
  CHECK(euler_continuation({0.0, 0.0}, 0.3, 0.4) == std::complex<double>(0.0, 0.0));
  CHECK(std::abs(euler_continuation({0.0, 6.0}, 0.0, 0.0)) > 1.0);
  CHECK_THROWS_AS(euler_continuation({1.5, 0.0}, 0.2, 0.2), DomainError);
  CHECK_THROWS_AS(euler_continuation({-3.0, 0.0}, 0.2, 0.2), DomainError);
}

TEST_CASE("euler_continuation agrees with the series on (-1,1)") {
  for (double a : {0.0, 0.25, 0.6, 0.9})
    for (double b : {0.0, 0.3, 0.75}) {
      const Series f = f_bar_series(NormPair::from_ab(a, b), 401);
      for (double x : {-0.8, -0.4, 0.1, 0.5, 0.85}) {
        const double ref = f.horner(x);
        CHECK(std::abs(euler_continuation({x, 0.0}, a, b).real() - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
      }
    }
}

TEST_CASE("euler_continuation conjugate symmetry and imaginary axis") {
  for (double a : {0.0, 0.5})
    for (double b : {0.0, 0.5}) {
      for (std::complex<double> z : {std::complex<double>(0.3, 2.0), std::complex<double>(-4.0, 1.5),
                                     std::complex<double>(2.0, -0.7)}) {
        const auto w1 = euler_continuation(std::conj(z), a, b);
        const auto w2 = std::conj(euler_continuation(z, a, b));
        CHECK(std::abs(w1 - w2) < 1e-10 * std::max(1.0, std::abs(w1)));
      }
      for (double y : {0.5, 3.0, 6.0}) {
        const auto w = euler_continuation({0.0, y}, a, b);
        CHECK(std::abs(w.real()) < 1e-12 * std::max(1.0, std::abs(w)));
      }
    }
}
