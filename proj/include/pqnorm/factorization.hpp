#ifndef PQNORM_FACTORIZATION_HPP
#define PQNORM_FACTORIZATION_HPP

#include <Eigen/Dense>

#include "pqnorm/relaxation.hpp"

namespace pqnorm {

struct DualOptions {
  int max_iters = 500;
  double tol = 1e-12;
  CpOptions cp;
};

struct DualSolution {
  Eigen::VectorXd s;  // m weights
  Eigen::VectorXd t;  // n weights
  double dual_value = 0.0;
  double primal_value = 0.0;
  double psd_min_eigenvalue = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Outer exponents (q*/2)* and (p/2)* of the dual objective.
double dual_s_exponent(const NormPair& pair);
double dual_t_exponent(const NormPair& pair);

// (||s||_{(q*/2)*} + ||t||_{(p/2)*}) / 2.
double dual_objective(const Eigen::VectorXd& s, const Eigen::VectorXd& t, const NormPair& pair);
// Smallest eigenvalue of [[D_s, -A], [-A^T, D_t]].
double block_min_eigenvalue(const Eigen::MatrixXd& A, const Eigen::VectorXd& s, const Eigen::VectorXd& t);

DualSolution solve_dual(const ProblemInstance& inst, const DualOptions& opts = {});
DualSolution solve_dual(const ProblemInstance& inst, const RelaxationSolution& primal, const DualOptions& opts = {});

struct FactorizationCertificate {
  Eigen::VectorXd s;
  Eigen::VectorXd t;
  Eigen::MatrixXd B;
  double dual_value = 0.0;
  double spectral_norm_B = 0.0;
  double norm_product = 0.0;
  double reconstruction_error = 0.0;
  double psd_min_eigenvalue = 0.0;
};

// A = D_s^{1/2} B D_t^{1/2}; rejects (s,t) violating the PSD constraint.
FactorizationCertificate build_certificate(const ProblemInstance& inst, const Eigen::VectorXd& s,
                                           const Eigen::VectorXd& t, double psd_tol = 1e-8);

}  // namespace pqnorm

#endif  // PQNORM_FACTORIZATION_HPP
