#include "pqnorm/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace pqnorm {

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive, got " + std::to_string(x));
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) throw NumericalError("gamma_fn: overflow at " + std::to_string(x));
  return g;
}

double beta_fn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) throw DomainError("beta_fn: arguments must be positive");
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double gaussian_absolute_moment(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("gaussian moment: exponent must be finite and >= 0");
  return std::pow(2.0, r / 2.0) / std::sqrt(M_PI) * gamma_fn((1.0 + r) / 2.0);
}

double gaussian_moment(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("gaussian moment: exponent must be finite and >= 0");
  if (r == 0.0) return 1.0;
  const double log_moment = 0.5 * r * std::log(2.0) - 0.5 * std::log(M_PI) + std::lgamma((1.0 + r) / 2.0);
  return std::exp(log_moment / r);
}

std::complex<double> euler_continuation(std::complex<double> z, double a, double b) {
  if (!(a >= 0.0 && a <= 1.0)) throw DomainError("euler_continuation: a must lie in [0,1]");
  if (!(b >= 0.0 && b < 1.0)) throw DomainError("euler_continuation: b must lie in [0,1)");
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("euler_continuation: z is not finite");
  const double scale = std::max(1.0, std::abs(z));
  if (std::abs(z.imag()) <= 1e-12 * scale && std::abs(z.real()) >= 1.0)
    throw DomainError("euler_continuation: z lies on a branch cut");
  if (z == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};

  // Split at t = 1/2. On [0, 1/2], t = s^e with e = 2/(1-b) absorbs
  // t^{-(1+b)/2} and Gauss-Kronrod handles the smooth result. On [1/2, 1]
  // tanh-sinh handles (1-t)^{b/2} and receives 1 - t without cancellation.
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
  thread_local boost::math::quadrature::tanh_sinh<double> tanh_sinh;
  const double e = 2.0 / (1.0 - b);
  const double ex = -(1.0 - a) / 2.0;
  const std::complex<double> z2 = z * z;
  // 1 - z^2 t = z^2 (w - t) with w = 1/z^2 rounded once, so the integrand
  // stays smooth next to the singular point.
  const std::complex<double> w = 1.0 / z2;
  const std::complex<double> w_minus_1 = (1.0 - z) * (1.0 + z) / z2;
  auto near_zero = [&](double s) -> std::complex<double> {
    const double t = std::pow(s, e);
    return e * std::pow(1.0 - t, b / 2.0) * std::pow(z2 * (w - t), ex);
  };
  // Integrand on [1/2, 1] given t and 1 - t.
  auto upper = [&](double t, double one_t) -> std::complex<double> {
    const std::complex<double> d = t > 0.5 ? w_minus_1 + one_t : w - t;
    return std::pow(t, -(1.0 + b) / 2.0) * std::pow(one_t, b / 2.0) * std::pow(z2 * d, ex);
  };

  // Graded breakpoints in t accumulating at the singular point w = 1/z^2
  // when it comes close to [0, 1].
  std::vector<double> tb;
  auto grade = [&](double centre, double dist, double dir) {
    for (double d = std::max(dist, 1e-14); d < 1.0; d *= 4.0) {
      const double t = centre + dir * d;
      if (t > 0.0 && t < 1.0) tb.push_back(t);
    }
  };
  if (w.real() > 0.0 && w.real() < 1.0) {
    tb.push_back(w.real());
    grade(w.real(), std::abs(w.imag()), 1.0);
    grade(w.real(), std::abs(w.imag()), -1.0);
  } else if (w.real() >= 1.0) {
    grade(1.0, std::abs(w - 1.0), -1.0);
  }
  // Gauss-Kronrod in s covers [0, t_a]; tanh-sinh in t covers the graded
  // pieces above it, where t^{-(1+b)/2} is smooth.
  std::sort(tb.begin(), tb.end());
  const double t_min = w.real() > 0.0 && w.real() < 1.0 ? 0.25 * w.real() : 0.05;
  double t_a = 0.5;
  for (double t : tb)
    if (t >= t_min) {
      t_a = std::min(t_a, t);
      break;
    }
  std::vector<double> lower_brk, upper_brk{t_a, 1.0};
  for (double t : tb) {
    if (t < t_a) lower_brk.push_back(std::pow(t, 1.0 / e));
    else if (t > t_a) upper_brk.push_back(t);
  }
  lower_brk.push_back(std::pow(t_a, 1.0 / e));
  std::sort(upper_brk.begin(), upper_brk.end());

  double err = 0.0, l1 = 0.0;
  std::complex<double> integral(0.0, 0.0);
  double lo = 0.0;
  for (double hi : lower_brk) {
    if (!(hi > lo)) continue;
    double e1 = 0.0, l = 0.0;
    integral += Kronrod::integrate(near_zero, lo, hi, 15, 1e-10, &e1, &l);
    err += e1;
    l1 += l;
    lo = hi;
  }
  for (std::size_t i = 0; i + 1 < upper_brk.size(); ++i) {
    const double x0 = upper_brk[i], x1 = upper_brk[i + 1];
    if (!(x1 > x0)) continue;
    // xc is the distance to the nearer endpoint of [x0, x1].
    auto value_at = [&](double t, double xc) {
      return upper(t, (x1 == 1.0 && t > 0.5 * (x0 + x1)) ? xc : 1.0 - t);
    };
    auto re_part = [&](double t, double xc) -> double { return value_at(t, xc).real(); };
    auto im_part = [&](double t, double xc) -> double { return value_at(t, xc).imag(); };
    double er = 0.0, ei = 0.0, lr = 0.0, li = 0.0;
    std::size_t levels = 0;
    const double re = tanh_sinh.integrate(re_part, x0, x1, 1e-12, &er, &lr, &levels);
    const double im = tanh_sinh.integrate(im_part, x0, x1, 1e-12, &ei, &li, &levels);
    integral += std::complex<double>(re, im);
    err += 0.5 * (x1 - x0) * (er + ei);
    l1 += lr + li;
  }
  const std::complex<double> value = z / beta_fn((1.0 - b) / 2.0, 1.0 + b / 2.0) * integral;
  if (!(err <= 1e-9 * std::abs(integral) + 1e-12 * l1)) {
    throw AccuracyError("euler_continuation: quadrature did not converge", std::abs(value), err * std::abs(z));
  }
  return value;
}

}  // namespace pqnorm
