#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pqnorm/relaxation.hpp"

using namespace pqnorm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double power_iteration(const Eigen::MatrixXd& A) {
  Eigen::VectorXd x = Eigen::VectorXd::Ones(A.cols());
  double s = 0.0;
  for (int i = 0; i < 20000; ++i) {
    Eigen::VectorXd y = A.transpose() * (A * x);
    const double ns = std::sqrt(y.norm());
    x = y.normalized();
    if (std::abs(ns - s) < 1e-15 * ns) break;
    s = ns;
  }
  return (A * x).norm();
}

// max over x in {-1,1}^n of ||Ax||_1 (p = inf, q = 1).
double sign_enumeration(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.cols());
  double best = 0.0;
  for (long mask = 0; mask < (1L << n); ++mask) {
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) x[j] = (mask >> j) & 1 ? 1.0 : -1.0;
    best = std::max(best, (A * x).lpNorm<1>());
  }
  return best;
}

ProblemInstance instance(Eigen::MatrixXd A, double p, double q) { return {std::move(A), NormPair::from_pq(p, q)}; }

}  // namespace

TEST_CASE("solve_cp examples") {
  const auto r = solve_cp(instance(Eigen::MatrixXd::Identity(2, 2), 2, 2));
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));

  Eigen::MatrixXd S(2, 2);
  S << 1, 1, 1, -1;
  const auto g = solve_cp(instance(S, kInf, 1));
  CHECK(g.value >= 2.0 - 1e-9);
  // Grothendieck relaxation of the 2x2 sign matrix equals 2 sqrt 2.
  CHECK(g.value == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-8));

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXd A = gaussian_matrix(5, 4, seed);
    CHECK(std::abs(solve_cp(instance(A, 2, 2)).value - power_iteration(A)) < 1e-8);
  }
}

TEST_CASE("solve_cp feasibility and reproducibility") {
  const Eigen::MatrixXd A = gaussian_matrix(6, 5, 7);
  for (auto [p, q] : {std::pair{kInf, 1.0}, std::pair{4.0, 4.0 / 3.0}, std::pair{3.0, 1.5}}) {
    const ProblemInstance inst = instance(A, p, q);
    const auto r = solve_cp(inst);
    CHECK(row_constraint(r.U, inst.pair.q_dual()) <= 1 + 1e-9);
    CHECK(row_constraint(r.V, p) <= 1 + 1e-9);
    const double v = (A.array() * (r.U * r.V.transpose()).array()).sum();
    CHECK(std::abs(v - r.value) <= 1e-12 * std::abs(r.value));
    CHECK(r.monotone);
    CHECK(solve_cp(inst).value == r.value);
  }
}

TEST_CASE("solve_cp invariant under permutations and sign flips") {
  const Eigen::MatrixXd A = gaussian_matrix(5, 4, 11);
  Eigen::MatrixXd B = A;
  B.row(0).swap(B.row(3));
  B.col(1).swap(B.col(2));
  B.row(2) *= -1.0;
  B.col(0) *= -1.0;
  for (auto [p, q] : {std::pair{kInf, 1.0}, std::pair{4.0, 4.0 / 3.0}}) {
    const double va = solve_cp(instance(A, p, q)).value;
    const double vb = solve_cp(instance(B, p, q)).value;
    CHECK(std::abs(va - vb) <= 1e-6 * va);
  }
}

TEST_CASE("solve_cp dominates brute force") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd A = gaussian_matrix(4, 5, 100, seed);
    CHECK(solve_cp(instance(A, kInf, 1)).value >= sign_enumeration(A) - 1e-6);
    for (auto [p, q] : {std::pair{4.0, 4.0 / 3.0}, std::pair{3.0, 1.2}}) {
      const ProblemInstance inst = instance(A, p, q);
      CHECK(solve_cp(inst).value >= brute_force_norm(inst) - 1e-6);
    }
  }
}

TEST_CASE("brute_force_norm examples") {
  for (int n : {2, 3, 4})
    for (auto [p, q] : {std::pair{kInf, 1.0}, std::pair{4.0, 4.0 / 3.0}, std::pair{2.0, 2.0}}) {
      const double ref = std::pow(n, 1.0 / q - (std::isinf(p) ? 0.0 : 1.0 / p));
      CHECK(brute_force_norm(instance(Eigen::MatrixXd::Identity(n, n), p, q)) == doctest::Approx(ref).epsilon(1e-8));
    }

  Eigen::MatrixXd S(2, 2);
  S << 1, 1, 1, -1;
  CHECK(brute_force_norm(instance(S, kInf, 1)) == doctest::Approx(2.0).epsilon(1e-10));
  BruteForceOptions grid;
  grid.sampling = true;
  grid.samples = 200000;
  CHECK(brute_force_norm(instance(S, kInf, 1), grid) == doctest::Approx(2.0).epsilon(1e-6));

  Eigen::VectorXd u(3), v(4);
  u << 1.0, -2.0, 0.5;
  v << 0.3, 1.0, -0.7, 2.0;
  const double p = 4.0, q = 4.0 / 3.0;
  const double ref = lp_norm(u, q) * lp_norm(v, dual_exponent(p));
  CHECK(brute_force_norm(instance(u * v.transpose(), p, q)) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("brute_force_norm matches sign enumeration at p = inf, q = 1") {
  for (std::uint64_t i = 0; i < 5; ++i) {
    const Eigen::MatrixXd A = gaussian_matrix(4, 5, 200, i);
    CHECK(brute_force_norm(instance(A, kInf, 1)) == doctest::Approx(sign_enumeration(A)).epsilon(1e-9));
  }
}

TEST_CASE("invalid instances are rejected") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Ones(2, 2);
  A(0, 1) = std::nan("");
  CHECK_THROWS_AS(solve_cp(instance(A, 2, 2)), DomainError);
  CHECK_THROWS_AS(solve_cp(instance(Eigen::MatrixXd(0, 3), 2, 2)), DomainError);
}
