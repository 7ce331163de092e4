#ifndef PQNORM_ORACLES_HPP
#define PQNORM_ORACLES_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace pqnorm {

struct IdentityCheckResult {
  std::string target;
  double estimate = 0.0;
  double reference = 0.0;
  double std_error = 0.0;  // 0 for deterministic checks
  double sigmas = 0.0;     // |estimate - reference| / std_error, or 0 when std_error = 0
  double tolerance = 0.0;  // sigma bound for Monte Carlo checks, absolute error bound otherwise
  bool passed = false;
};

// f_bar continued to the complex plane: series inside |z| <= 0.9, Euler integral outside.
std::complex<double> f_bar_complex(std::complex<double> z, double a, double b);
// Real f_bar on [-1, 1].
double f_bar_value(double a, double b, double rho);
// E[sgn(g1)|g1|^b sgn(g2)|g2|^a] for rho-correlated standard Gaussians.
double f_ab_reference(double a, double b, double rho);

IdentityCheckResult mc_f_ab(double a, double b, double rho, long N, std::uint64_t seed, double max_sigmas = 4.0);

// Generalized Gauss-Laguerre rule for weight u^alpha e^{-u}.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_laguerre(int n, double alpha);

// E[sgn(g)|g|^c H_k(g)] for k = 0..k_max, H_k orthonormal Hermite polynomials.
std::vector<double> hermite_coefficients(double c, int k_max, int nodes = 64);
// Closed form of the odd coefficients; zero for even k.
double hermite_coefficient_closed_form(double c, int k);
std::vector<IdentityCheckResult> hermite_coeff_check(double c, int k_max);

// sum over odd k <= k_max of hf^(b)_k hf^(a)_k rho^k from quadrature coefficients.
double noise_correlation_series(double a, double b, double rho, int k_max);

struct ContourReport {
  double min_abs = 0.0;
  std::complex<double> argmin;
  double arc_min = 0.0;
  double segment_min = 0.0;
  int evaluated = 0;
  int skipped = 0;
  bool passed = false;
};

// Samples the segment from 1 - eps to the arc start and the arc |z| = alpha
// up to i alpha; passes when every sampled |f_bar| exceeds 1.
ContourReport contour_magnitude_check(double a, double b, double alpha, double eps, int samples);

// Beta-function lower-bound expression at radius r.
double beta_expression(double b, double r = 6.0);

struct BetaReport {
  double min_value = 0.0;
  double argmin_b = 0.0;
  bool passed = false;
};
BetaReport beta_expression_check(const std::vector<double>& bs, double r = 6.0, double threshold = 1.003);

// (2/(pi k)) Im of the integral of f_bar(z)^{-k} over the quarter arc |z| = delta.
double contour_inverse_coeff(double a, double b, int k, double delta = 0.3, int nodes = 10000);

}  // namespace pqnorm

#endif  // PQNORM_ORACLES_HPP
