#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pqnorm/krivine.hpp"

using namespace pqnorm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solves f(x) = y on [0, 1] by bisection; f increasing.
double invert_increasing(const Series& f, double y) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f.horner(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("NormPair construction") {
  const NormPair g = NormPair::from_pq(kInf, 1.0);
  CHECK(g.a == 0.0);
  CHECK(g.b == 0.0);
  CHECK(g.p_dual() == 1.0);
  const NormPair h = NormPair::from_pq(4.0, 4.0 / 3.0);
  CHECK(h.a == doctest::Approx(1.0 / 3.0));
  CHECK(h.b == doctest::Approx(1.0 / 3.0));
  CHECK(h.q_dual() == doctest::Approx(4.0));
  CHECK_THROWS_AS(NormPair::from_pq(1.5, 1.0), DomainError);
  CHECK_THROWS_AS(NormPair::from_pq(4.0, 2.5), DomainError);
  CHECK_THROWS_AS(NormPair::from_ab(-0.1, 0.5), DomainError);
}

TEST_CASE("f_bar_series examples") {
  const Series s = f_bar_series(NormPair::from_ab(0, 0), 9);
  CHECK(s.is_odd());
  CHECK(s[1] == 1.0);
  CHECK(s[3] == doctest::Approx(1.0 / 6.0));
  CHECK(s[5] == doctest::Approx(3.0 / 40.0));
  for (double x : {-0.7, 0.2, 0.6}) {
    const Series big = f_bar_series(NormPair::from_ab(0, 0), 301);
    CHECK(std::abs(big.horner(x) - std::asin(x)) < 1e-12);
  }

  const Series id = f_bar_series(NormPair::from_ab(1.0, 0.37), 15);
  for (int k = 0; k <= 15; ++k) CHECK(id[k] == (k == 1 ? 1.0 : 0.0));

  CHECK(f_bar_series(NormPair::from_ab(0.5, 0.5), 5)[3] == doctest::Approx(1.0 / 24.0));
  for (double a : {0.0, 0.2, 0.9})
    for (double b : {0.1, 0.6})
      CHECK(f_bar_series(NormPair::from_ab(a, b), 3)[3] == doctest::Approx((1 - a) * (1 - b) / 6));
}

TEST_CASE("f_bar_series monotonicity in a and b") {
  const double vals[] = {0.0, 0.2, 0.5, 0.8, 1.0};
  for (double a : vals)
    for (double b : vals) {
      const Series s = f_bar_series(NormPair::from_ab(a, b), 41);
      for (int k = 0; k <= 41; ++k) CHECK(s[k] >= 0.0);
      if (a < 1.0) {
        const Series sa = f_bar_series(NormPair::from_ab(std::min(1.0, a + 0.2), b), 41);
        const Series sb = f_bar_series(NormPair::from_ab(b, std::min(1.0, a + 0.2)), 41);
        const Series s2 = f_bar_series(NormPair::from_ab(b, a), 41);
        for (int k = 0; k <= 41; ++k) {
          CHECK(sa[k] <= s[k] + 1e-16);
          CHECK(sb[k] <= s2[k] + 1e-16);
        }
      }
    }
}

TEST_CASE("compute_c_ab examples") {
  const CabResult r0 = compute_c_ab(NormPair::from_ab(0, 0), 60, 1e-4);
  CHECK(std::abs(r0.c_ab - std::log(1 + std::sqrt(2.0))) < 1e-8);
  CHECK(r0.h_value + r0.h_tail <= 1.0 + 1e-12);
  CHECK(r0.h_value + r0.h_tail >= 1.0 - 1e-4);

  CHECK(compute_c_ab(NormPair::from_ab(1.0, 0.3), 60).c_ab == doctest::Approx(1.0));

  const NormPair half = NormPair::from_ab(0.5, 0.5);
  const double c = compute_c_ab(half, 60).c_ab;
  CHECK(c > 0.8813);
  CHECK(c < 1.0);
  // Direct inversion: h(c) = 1 with h the absolute inverse, computed from a
  // long truncation independent of the tail estimate.
  const Series h = abs_map(f_bar_inverse(half, 121));
  CHECK(std::abs(h.horner(c) - 1.0) < 1e-4);

  CHECK_THROWS_AS(compute_c_ab(NormPair::from_ab(0, 0), 10), DomainError);
}

TEST_CASE("compute_c_ab nondecreasing in a and b") {
  const double vals[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (double a : vals) {
    double prev = 0.0;
    for (double b : vals) {
      const double c = compute_c_ab(NormPair::from_ab(a, b), 60).c_ab;
      CHECK(c >= prev - 1e-9);
      CHECK(c >= std::asinh(1.0) / (1.0 + kEpsilon0) - 1e-4);
      CHECK(c <= 1.0 + 1e-12);
      prev = c;
    }
  }
}

TEST_CASE("approx_ratio examples") {
  const BoundReport g = approx_ratio(NormPair::from_pq(kInf, 1.0));
  CHECK(std::abs(g.ratio - M_PI / (2 * std::log(1 + std::sqrt(2.0)))) < 1e-6);
  CHECK(g.krivine_ratio == doctest::Approx(M_PI / 2 / std::asinh(1.0)));

  const BoundReport e = approx_ratio(NormPair::from_pq(2.0, 2.0));
  CHECK(e.ratio == doctest::Approx(1.0).epsilon(1e-12));

  const BoundReport m = approx_ratio(NormPair::from_pq(4.0, 4.0 / 3.0));
  CHECK(m.ratio < m.krivine_ratio);
  // Brute-force cross-check: the same ratio from a direct bisection on a
  // longer truncation.
  const NormPair pair = NormPair::from_pq(4.0, 4.0 / 3.0);
  const Series h = abs_map(f_bar_inverse(pair, 121));
  const double c = invert_increasing(h, 1.0);
  const double ratio = 1.0 / (gaussian_moment(pair.p_dual()) * gaussian_moment(pair.q) * c);
  CHECK(std::abs(m.ratio - ratio) < 1e-3 * ratio);
}

TEST_CASE("approx_ratio invariants") {
  for (double a : {0.0, 0.3, 0.7, 1.0})
    for (double b : {0.0, 0.4, 1.0}) {
      const NormPair pair = NormPair::from_ab(a, b);
      const BoundReport r = approx_ratio(pair);
      CHECK(r.ratio >= 1.0 - 1e-12);
      CHECK(r.c_ab > 0.0);
      CHECK(r.c_ab <= 1.0 + 1e-12);
      if (a == 1.0 || b == 1.0)
        CHECK(r.ratio == doctest::Approx(1.0 / (gaussian_moment(pair.p_dual()) * gaussian_moment(pair.q))));
    }
}

TEST_CASE("steinberg_ratio at the endpoints") {
  CHECK(steinberg_ratio(NormPair::from_pq(2.0, 2.0)) == doctest::Approx(1.0));
  CHECK(std::isinf(steinberg_ratio(NormPair::from_pq(kInf, 1.0))));
  const NormPair g = NormPair::from_pq(kInf, 1.5);
  CHECK(steinberg_ratio(g) == doctest::Approx(gaussian_moment(3.0) / gaussian_moment(1.0)));
  const NormPair h = NormPair::from_pq(4.0, 1.5);
  CHECK(steinberg_ratio(h) == doctest::Approx(std::min(gaussian_moment(4.0) / gaussian_moment(1.5),
                                                       gaussian_moment(3.0) / gaussian_moment(4.0 / 3.0))));
}

TEST_CASE("check_conditions examples") {
  const ConditionReport r = check_conditions(29, ab_grid(21), 29);
  CHECK(r.all_passed);
  CHECK(r.points == 441);

  const auto m = condition_margins(0.0, 0.0, 7);
  // k = 3: f^{-1}_3 = -1/6, margin 0 - (-1/6).
  CHECK(m[1] == doctest::Approx(1.0 / 6.0));
  // k = 5: f^{-1}_5 = 1/120 = 1/5!, margin 0.
  CHECK(std::abs(m[2]) < 1e-15);
}

TEST_CASE("certify_defect examples") {
  const double delta = std::asinh(0.974203);
  const DefectCertificate c = certify_defect(NormPair::from_ab(0.0, 0.0), 31, delta, 60);
  CHECK(c.h_err <= 0.0128991);
  CHECK(c.conditions_hold);
  CHECK(c.certified);
  CHECK(c.rho_certified >= std::asinh(0.974202));
  CHECK(c.h_at_rho <= 1.0);

  const DefectCertificate t = certify_defect(NormPair::from_ab(1.0, 0.5), 31, delta, 60);
  CHECK(t.h_err == 0.0);
  CHECK(t.certified);
  CHECK(t.h_at_rho <= 1.0);
}

TEST_CASE("cotype2_constant examples") {
  CHECK(cotype2_constant(2.0) == doctest::Approx(1.0));
  CHECK(cotype2_constant(1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(1.0 / gaussian_moment(1.0) < std::sqrt(2.0));
  CHECK_THROWS_AS(cotype2_constant(3.0), DomainError);
  const NormPair g = NormPair::from_pq(kInf, 1.0);
  CHECK(cotype_factorization_bound(g) == doctest::Approx((1 + kEpsilon0) / std::asinh(1.0) * 2.0));
  CHECK(factorization_bound(g) == doctest::Approx(certified_ratio(g)));
}

TEST_CASE("high-order inverse stays accurate") {
  const Series inv = f_bar_inverse(NormPair::from_ab(0.0, 0.0), 201);
  double fact = 1.0;
  for (int k = 1; k <= 201; ++k) {
    fact /= k;
    if (k % 2 == 0) continue;
    CHECK(std::abs(inv[k] - ((k / 2) % 2 ? -fact : fact)) <= 1e-15 * fact + 1e-24);
  }
  for (int K : {100, 200}) {
    const CabResult r = compute_c_ab(NormPair::from_ab(0.0, 0.0), K);
    CHECK(std::abs(r.c_ab - std::asinh(1.0)) < 1e-8);
  }
}
