#ifndef PQNORM_SPECFUN_HPP
#define PQNORM_SPECFUN_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "pqnorm/errors.hpp"
#include "pqnorm/series.hpp"

namespace pqnorm {

double gamma_fn(double x);
double beta_fn(double x, double y);

// gamma_r = (E|g|^r)^{1/r} for a standard Gaussian g; gamma_0 = 1.
double gaussian_moment(double r);
// E|g|^r = gamma_r^r.
double gaussian_absolute_moment(double r);

enum class HypKind { F11, F21 };

// Taylor coefficients of 1F1(alpha; beta; z) (params = {alpha, beta}) or
// 2F1(w, alpha; beta; z) (params = {w, alpha, beta}) up to z^K.
template <typename Scalar>
TruncatedSeries<Scalar> hyp_coeffs(HypKind kind, const std::vector<Scalar>& params, int K) {
  const std::size_t need = kind == HypKind::F11 ? 2 : 3;
  if (params.size() != need) throw DomainError("hyp_coeffs: wrong number of parameters");
  if (K < 0) throw DomainError("hyp_coeffs: negative order");
  const Scalar beta = params.back();
  using std::floor;
  if (beta <= Scalar(0) && beta == floor(beta))
    throw DomainError("hyp_coeffs: denominator parameter is a nonpositive integer");

  TruncatedSeries<Scalar> s(K);
  Scalar c(1);
  s.set(0, c);
  for (int k = 0; k < K; ++k) {
    Scalar num = params[0] + Scalar(k);
    if (kind == HypKind::F21) num *= params[1] + Scalar(k);
    c = c * num / ((beta + Scalar(k)) * Scalar(k + 1));
    s.set(k + 1, c);
  }
  return s;
}

// Analytic continuation of rho * 2F1((1-a)/2, (1-b)/2; 3/2; rho^2) through
// its Euler integral, for a in [0,1], b in [0,1).
std::complex<double> euler_continuation(std::complex<double> z, double a, double b);

}  // namespace pqnorm

#endif  // PQNORM_SPECFUN_HPP
