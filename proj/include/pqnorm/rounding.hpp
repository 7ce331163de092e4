#ifndef PQNORM_ROUNDING_HPP
#define PQNORM_ROUNDING_HPP

#include <cstdint>

#include <Eigen/Dense>

#include "pqnorm/krivine.hpp"
#include "pqnorm/relaxation.hpp"

namespace pqnorm {

// sgn(z) |z|^{r-1}; r = 1 gives sgn(z).
Eigen::VectorXd holder_dual(const Eigen::VectorXd& z, double r);

struct TransformedGram {
  Eigen::MatrixXd M;  // (m+n) x (m+n)
  Eigen::Index m = 0;
  Eigen::Index n = 0;
  // Row i is scaled by scale_base[i]^{1/scale_den[i]}; the exponent is kept
  // symbolic so that a zero denominator only appears after folding.
  Eigen::VectorXd scale_base;
  Eigen::VectorXd scale_den;
  double psd_repair_shift = 0.0;
  double c_ab = 0.0;
  double a = 0.0;
  double b = 0.0;
};

// scale_base[i]^{power/scale_den[i]}, with power == scale_den[i] folding to scale_base[i].
double folded_scale(const TransformedGram& tg, Eigen::Index i, double power);

TransformedGram build_transformed_gram(const RelaxationSolution& sol, const NormPair& pair, double c_ab, int K = 60);

struct RoundedSolution {
  Eigen::VectorXd y;  // ||y||_{q*} = 1
  Eigen::VectorXd x;  // ||x||_p = 1
  double value = 0.0;
  long sample_count = 0;
  long resamples = 0;
  double empirical_mean_value = 0.0;
};

RoundedSolution sample_round(const ProblemInstance& inst, const TransformedGram& tg, const RelaxationSolution& sol,
                             long num_samples, std::uint64_t seed);

struct MomentEstimate {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd std_error;
};

// Monte Carlo mean of the unnormalized rounding numerators n_y n_x^T, where
// n_y = psi_q(phi(U) g) and n_x = psi_{p*}(psi(V) g).
MomentEstimate numerator_moments(const TransformedGram& tg, long num_samples, std::uint64_t seed);
// gamma_q^q gamma_{p*}^{p*} c_ab U V^T.
Eigen::MatrixXd numerator_reference(const RelaxationSolution& sol, const NormPair& pair, double c_ab);

struct ScalarEstimate {
  double mean;
  double std_error;
};

// E[||phi(U) g||_q^b ||psi(V) g||_{p*}^a].
ScalarEstimate denominator_moment(const TransformedGram& tg, const NormPair& pair, long num_samples,
                                  std::uint64_t seed);
// gamma_{p*}^a gamma_q^b.
double denominator_bound(const NormPair& pair);

}  // namespace pqnorm

#endif  // PQNORM_ROUNDING_HPP
