#include "pqnorm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "pqnorm/errors.hpp"
#include "pqnorm/krivine.hpp"
#include "pqnorm/relaxation.hpp"
#include "pqnorm/specfun.hpp"

namespace pqnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSeriesOrder = 401;

void check_ab(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) throw DomainError("a and b must lie in [0,1]");
}

double signed_power(double x, double e) {
  const double s = (x > 0.0) - (x < 0.0);
  return e == 0.0 ? s : s * std::pow(std::abs(x), e);
}

// L_n and L_{n-1} of the generalized Laguerre family at x.
std::pair<double, double> laguerre_pair(int n, double alpha, double x) {
  double prev = 1.0, cur = 1.0 + alpha - x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

// Orthonormal Hermite values H_0..H_kmax at x.
Eigen::VectorXd hermite_values(int k_max, double x) {
  Eigen::VectorXd h(k_max + 1);
  h[0] = 1.0;
  if (k_max >= 1) h[1] = x;
  for (int n = 1; n < k_max; ++n) h[n + 1] = (x * h[n] - std::sqrt(double(n)) * h[n - 1]) / std::sqrt(n + 1.0);
  return h;
}

std::vector<double> hermite_coefficients_raw(double c, int k_max, int nodes) {
  // Half-line integrals in u = x^2/2; odd k absorb one factor of x into the weight.
  const QuadratureRule odd = gauss_laguerre(nodes, 0.5 * c);
  const QuadratureRule even = gauss_laguerre(nodes, 0.5 * (c - 1.0));
  const double scale = std::pow(2.0, 0.5 * (c - 1.0)) / std::sqrt(2.0 * M_PI);
  Eigen::VectorXd plus = Eigen::VectorXd::Zero(k_max + 1), minus = plus;
  for (int i = 0; i < nodes; ++i) {
    const double uo = odd.nodes[i], xo = std::sqrt(2.0 * uo);
    const Eigen::VectorXd hp = hermite_values(k_max, xo), hm = hermite_values(k_max, -xo);
    const double ue = even.nodes[i], xe = std::sqrt(2.0 * ue);
    const Eigen::VectorXd ep = hermite_values(k_max, xe), em = hermite_values(k_max, -xe);
    for (int k = 0; k <= k_max; ++k) {
      if (k % 2) {
        plus[k] += odd.weights[i] * hp[k] / std::sqrt(uo);
        minus[k] += odd.weights[i] * hm[k] / std::sqrt(uo);
      } else {
        plus[k] += even.weights[i] * ep[k];
        minus[k] += even.weights[i] * em[k];
      }
    }
  }
  std::vector<double> out(k_max + 1);
  for (int k = 0; k <= k_max; ++k) out[k] = scale * (plus[k] - minus[k]);
  return out;
}

}  // namespace

std::complex<double> f_bar_complex(std::complex<double> z, double a, double b) {
  check_ab(a, b);
  if (a == 1.0 || b == 1.0) return z;
  if (std::abs(z) <= 0.9) return f_bar_series<double>(a, b, kSeriesOrder).horner(z);
  if (z.imag() == 0.0 && std::abs(z.real()) >= 1.0) {
    if (std::abs(z.real()) == 1.0) return f_bar_value(a, b, z.real());
    throw DomainError("f_bar_complex: point lies on the branch cut");
  }
  return euler_continuation(z, a, b);
}

double f_bar_value(double a, double b, double rho) {
  check_ab(a, b);
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("f_bar_value: rho must lie in [-1,1]");
  if (a == 1.0 || b == 1.0) return rho;
  if (std::abs(rho) == 1.0)
    return rho * gaussian_absolute_moment(a + b) /
           (gaussian_absolute_moment(1.0 + a) * gaussian_absolute_moment(1.0 + b));
  return f_bar_complex(std::complex<double>(rho, 0.0), a, b).real();
}

double f_ab_reference(double a, double b, double rho) {
  return gaussian_absolute_moment(1.0 + a) * gaussian_absolute_moment(1.0 + b) * f_bar_value(a, b, rho);
}

IdentityCheckResult mc_f_ab(double a, double b, double rho, long N, std::uint64_t seed, double max_sigmas) {
  check_ab(a, b);
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("mc_f_ab: rho must lie in [-1,1]");
  if (N < 10000) throw DomainError("mc_f_ab: need at least 10^4 samples");
  auto eng = stream_engine(seed, 0);
  std::normal_distribution<double> normal;
  const double s = std::sqrt(1.0 - rho * rho);
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < N; ++i) {
    const double g2 = normal(eng), g3 = normal(eng);
    const double g1 = rho * g2 + s * g3;
    const double v = signed_power(g1, b) * signed_power(g2, a);
    sum += v;
    sum2 += v * v;
  }
  IdentityCheckResult r;
  r.target = "f_ab(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ",rho=" + std::to_string(rho) + ")";
  r.estimate = sum / N;
  r.reference = f_ab_reference(a, b, rho);
  const double var = std::max(0.0, (sum2 / N - r.estimate * r.estimate) * N / (N - 1.0));
  r.std_error = std::sqrt(var / N);
  const double diff = std::abs(r.estimate - r.reference);
  r.sigmas = r.std_error > 0.0 ? diff / r.std_error : (diff == 0.0 ? 0.0 : kInf);
  r.tolerance = max_sigmas;
  r.passed = r.sigmas <= max_sigmas;
  return r;
}

QuadratureRule gauss_laguerre(int n, double alpha) {
  if (n < 1) throw DomainError("gauss_laguerre: need at least one node");
  if (!(alpha > -1.0)) throw DomainError("gauss_laguerre: alpha must exceed -1");
  Eigen::VectorXd diag(n), off(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag[i] = 2.0 * i + alpha + 1.0;
  for (int i = 1; i < n; ++i) off[i - 1] = std::sqrt(i * (i + alpha));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);

  QuadratureRule rule;
  const double log_ratio = std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0);
  for (int i = 0; i < n; ++i) {
    double x = es.eigenvalues()[i];
    for (int it = 0; it < 8; ++it) {
      const auto [ln, lm] = laguerre_pair(n, alpha, x);
      const double d = (n * ln - (n + alpha) * lm) / x;
      if (d == 0.0) break;
      const double step = ln / d;
      x -= step;
      if (std::abs(step) <= 1e-16 * x) break;
    }
    const double l_next = laguerre_pair(n + 1, alpha, x).first;
    rule.nodes.push_back(x);
    rule.weights.push_back(std::exp(log_ratio) * x / ((n + 1.0) * (n + 1.0) * l_next * l_next));
  }
  return rule;
}

std::vector<double> hermite_coefficients(double c, int k_max, int nodes) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("hermite_coefficients: c must lie in [0,1]");
  if (k_max < 0) throw DomainError("hermite_coefficients: negative degree");
  if (nodes < 16 || 2 * nodes - 1 < k_max) throw DomainError("hermite_coefficients: too few nodes");
  const auto fine = hermite_coefficients_raw(c, k_max, nodes);
  const auto coarse = hermite_coefficients_raw(c, k_max, nodes - 8);
  for (int k = 0; k <= k_max; ++k) {
    const double err = std::abs(fine[k] - coarse[k]);
    if (err > 1e-11)
      throw AccuracyError("hermite_coefficients: quadrature did not converge at k=" + std::to_string(k), fine[k],
                          err);
  }
  return fine;
}

double hermite_coefficient_closed_form(double c, int k) {
  if (!(c >= 0.0 && c <= 1.0)) throw DomainError("hermite_coefficient_closed_form: c must lie in [0,1]");
  if (k < 0) throw DomainError("hermite_coefficient_closed_form: negative degree");
  if (k % 2 == 0) return 0.0;
  double t = 1.0;
  for (int j = 0; 2 * j + 1 < k; ++j)
    t *= std::sqrt((2.0 * j + 2.0) * (2.0 * j + 3.0)) * (0.5 * (1.0 - c) + j) * -0.5 / ((1.5 + j) * (j + 1.0));
  return gaussian_absolute_moment(c + 1.0) * t;
}

std::vector<IdentityCheckResult> hermite_coeff_check(double c, int k_max) {
  if (k_max < 1 || k_max > 25) throw DomainError("hermite_coeff_check: k_max must lie in [1,25]");
  const auto num = hermite_coefficients(c, k_max);
  std::vector<IdentityCheckResult> out;
  for (int k = 1; k <= k_max; ++k) {
    IdentityCheckResult r;
    r.target = "hermite(c=" + std::to_string(c) + ",k=" + std::to_string(k) + ")";
    r.estimate = num[k];
    r.reference = hermite_coefficient_closed_form(c, k);
    r.tolerance = k % 2 ? 1e-6 : 1e-8;
    r.passed = std::abs(r.estimate - r.reference) <= r.tolerance;
    out.push_back(r);
  }
  return out;
}

double noise_correlation_series(double a, double b, double rho, int k_max) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("noise_correlation_series: rho must lie in [-1,1]");
  const int nodes = std::max(64, k_max / 2 + 16);
  const auto ha = hermite_coefficients(a, k_max, nodes);
  const auto hb = hermite_coefficients(b, k_max, nodes);
  double sum = 0.0;
  for (int k = k_max; k >= 1; --k)
    if (k % 2) sum += ha[k] * hb[k] * std::pow(rho, k);
  return sum;
}

ContourReport contour_magnitude_check(double a, double b, double alpha, double eps, int samples) {
  check_ab(a, b);
  if (!(alpha >= 1.0)) throw DomainError("contour_magnitude_check: alpha must be >= 1");
  if (!(eps > 0.0 && eps < 1.0 && eps < alpha * alpha)) throw DomainError("contour_magnitude_check: bad eps");
  if (samples < 2) throw DomainError("contour_magnitude_check: need at least two samples");
  ContourReport rep;
  rep.min_abs = rep.arc_min = rep.segment_min = kInf;
  const std::complex<double> start(std::sqrt(alpha * alpha - eps), std::sqrt(eps));
  const std::complex<double> seg0(1.0 - eps, 0.0);
  const double theta0 = std::arg(start);

  auto visit = [&](std::complex<double> z, double& part_min) {
    if (z.imag() == 0.0 && std::abs(z.real()) >= 1.0) {
      ++rep.skipped;
      return;
    }
    const double v = std::abs(f_bar_complex(z, a, b));
    ++rep.evaluated;
    part_min = std::min(part_min, v);
    if (v < rep.min_abs) {
      rep.min_abs = v;
      rep.argmin = z;
    }
  };
  for (int i = 0; i < samples; ++i) {
    const double s = double(i) / (samples - 1);
    visit(seg0 + s * (start - seg0), rep.segment_min);
    visit(std::polar(alpha, theta0 + s * (0.5 * M_PI - theta0)), rep.arc_min);
  }
  rep.passed = rep.evaluated > 0 && rep.min_abs > 1.0;
  return rep;
}

double beta_expression(double b, double r) {
  if (!(b >= 0.0 && b < 1.0)) throw DomainError("beta_expression: b must lie in [0,1)");
  if (!(r > 1.0)) throw DomainError("beta_expression: radius must exceed 1");
  const double inner = std::log(r / std::sqrt(2.0)) / std::sqrt(2.0) + std::pow(r, b) * std::sqrt(1.0 - 1.0 / (r * r)) / (1.0 - b);
  return inner / beta_fn(0.5 * (1.0 - b), 1.0 + 0.5 * b);
}

BetaReport beta_expression_check(const std::vector<double>& bs, double r, double threshold) {
  if (bs.empty()) throw DomainError("beta_expression_check: empty grid");
  BetaReport rep{kInf, 0.0, false};
  for (double b : bs) {
    const double v = beta_expression(b, r);
    if (v < rep.min_value) rep = BetaReport{v, b, false};
  }
  rep.passed = rep.min_value >= threshold;
  return rep;
}

double contour_inverse_coeff(double a, double b, int k, double delta, int nodes) {
  check_ab(a, b);
  if (k < 1 || k % 2 == 0) throw DomainError("contour_inverse_coeff: k must be a positive odd integer");
  if (!(delta > 0.0 && delta <= 0.5)) throw DomainError("contour_inverse_coeff: delta must lie in (0, 0.5]");
  if (nodes < 16 || nodes % 2) throw DomainError("contour_inverse_coeff: nodes must be even and >= 16");
  const auto f = f_bar_series<double>(a, b, 101);

  // Trapezoid in theta on [0, pi/2]; the coarse rule reuses every other node.
  const double h = 0.5 * M_PI / nodes;
  double fine = 0.0, coarse = 0.0, scale = 0.0;
  for (int i = 0; i <= nodes; ++i) {
    const std::complex<double> e = std::polar(1.0, i * h);
    const std::complex<double> z = delta * e;
    const std::complex<double> v = std::pow(f.horner(z), -k) * std::complex<double>(0.0, delta) * e;
    const double w = (i == 0 || i == nodes) ? 0.5 : 1.0;
    fine += w * v.imag();
    if (i % 2 == 0) coarse += w * v.imag();
    scale = std::max(scale, std::abs(v));
  }
  fine *= h;
  coarse *= 2.0 * h;
  const double value = 2.0 / (M_PI * k) * fine;
  const double err = 2.0 / (M_PI * k) * std::abs(fine - coarse);
  if (err > 1e-9 * std::max(1.0, scale))
    throw AccuracyError("contour_inverse_coeff: trapezoid rule did not converge", value, err);
  return value;
}

}  // namespace pqnorm
