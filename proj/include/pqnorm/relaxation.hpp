#ifndef PQNORM_RELAXATION_HPP
#define PQNORM_RELAXATION_HPP

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "pqnorm/krivine.hpp"

namespace pqnorm {

struct ProblemInstance {
  Eigen::MatrixXd A;
  NormPair pair;
};

struct RelaxationSolution {
  Eigen::MatrixXd U;  // m x d, rows u^i
  Eigen::MatrixXd V;  // n x d, rows v^j
  double value = 0.0;
  bool converged = false;
  bool monotone = true;
  int iterations = 0;
};

struct CpOptions {
  int d = 0;  // 0 selects m + n
  int restarts = 16;
  int max_iters = 10000;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

// Deterministic engine for stream `index` of a run seeded by `seed`.
std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index);

// Matrix of independent standard Gaussians drawn from stream `index` of `seed`.
Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, std::uint64_t index = 0);

// ||z||_r for r in [1, inf].
double lp_norm(const Eigen::VectorXd& z, double r);

void validate(const ProblemInstance& inst);

// sum_i ||u^i||_2^{q*} and sum_j ||v^j||_2^p (max for an infinite exponent).
double row_constraint(const Eigen::MatrixXd& X, double r);

RelaxationSolution solve_cp(const ProblemInstance& inst, const CpOptions& opts = {});

struct BruteForceOptions {
  int restarts = 64;
  bool sampling = false;         // dense sampling of the l_p sphere, n <= 6
  long samples = 1000000;
  std::uint64_t seed = 0;
};

// Lower bound on ||A||_{p->q}; exact by sign enumeration when p = inf or q = 1.
double brute_force_norm(const ProblemInstance& inst, const BruteForceOptions& opts = {});

}  // namespace pqnorm

#endif  // PQNORM_RELAXATION_HPP
