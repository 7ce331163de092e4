#include "pqnorm/krivine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/multiprecision/float128.hpp>

namespace pqnorm {

namespace {

using Quad = boost::multiprecision::float128;

constexpr double kInf = std::numeric_limits<double>::infinity();

double h_upper(const Series& h, double x) {
  const auto r = eval(h, x);
  return r.bounded ? r.value + r.tail : kInf;
}

}  // namespace

double dual_exponent(double r) {
  if (!(r >= 1.0)) throw DomainError("dual_exponent: exponent must be >= 1");
  if (std::isinf(r)) return 1.0;
  if (r == 1.0) return kInf;
  return r / (r - 1.0);
}

NormPair NormPair::from_pq(double p, double q) {
  if (std::isnan(p) || std::isnan(q)) throw DomainError("norm pair: NaN exponent");
  if (!(p >= 2.0)) throw DomainError("norm pair: p must lie in [2,inf], got " + std::to_string(p));
  if (!(q >= 1.0 && q <= 2.0)) throw DomainError("norm pair: q must lie in [1,2], got " + std::to_string(q));
  NormPair pair{p, q, dual_exponent(p) - 1.0, q - 1.0};
  pair.a = std::clamp(pair.a, 0.0, 1.0);
  return pair;
}

NormPair NormPair::from_ab(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0))
    throw DomainError("norm pair: a and b must lie in [0,1]");
  return NormPair{dual_exponent(1.0 + a), 1.0 + b, a, b};
}

Series f_bar_series(const NormPair& pair, int K) { return f_bar_series<double>(pair.a, pair.b, K); }

// Reversion noise grows with the order; past degree 64 it swamps the true
// coefficients in double precision.
Series f_bar_inverse(const NormPair& pair, int K) {
  if (K <= 64) return revert(f_bar_series(pair, K));
  return revert(f_bar_series<Quad>(Quad(pair.a), Quad(pair.b), K)).cast<double>();
}

CabResult compute_c_ab(const NormPair& pair, int K, double tol) {
  if (K < 30) throw DomainError("compute_c_ab: order must be at least 30");
  if (!(tol > 0.0)) throw DomainError("compute_c_ab: tolerance must be positive");
  Series h = abs_map(f_bar_inverse(pair, K));

  double lo = 0.0, hi = 1.0;
  if (h_upper(h, hi) <= 1.0) {
    lo = hi;
  } else {
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (h_upper(h, mid) <= 1.0)
        lo = mid;
      else
        hi = mid;
    }
  }
  const auto at = eval(h, lo);
  if (!(at.value >= 1.0 - tol)) {
    throw CertificationError("compute_c_ab: tail estimate " + std::to_string(at.tail) + " exceeds tolerance at a=" +
                                 std::to_string(pair.a) + ", b=" + std::to_string(pair.b),
                             lo);
  }
  return CabResult{lo, std::move(h), at.value, at.tail};
}

double krivine_ratio() { return M_PI / (2.0 * std::asinh(1.0)); }

double steinberg_ratio(const NormPair& pair) {
  const double first = std::isinf(pair.p) ? kInf : gaussian_moment(pair.p) / gaussian_moment(pair.q);
  const double qd = pair.q_dual();
  const double second = std::isinf(qd) ? kInf : gaussian_moment(qd) / gaussian_moment(pair.p_dual());
  return std::min(first, second);
}

double certified_ratio(const NormPair& pair, double eps0) {
  return (1.0 + eps0) / (std::asinh(1.0) * gaussian_moment(pair.p_dual()) * gaussian_moment(pair.q));
}

BoundReport approx_ratio(const NormPair& pair, int K, double tol) {
  const CabResult cab = compute_c_ab(pair, K, tol);
  const double ratio = 1.0 / (gaussian_moment(pair.p_dual()) * gaussian_moment(pair.q) * cab.c_ab);
  return BoundReport{pair,
                     cab.c_ab,
                     ratio,
                     certified_ratio(pair),
                     krivine_ratio(),
                     steinberg_ratio(pair),
                     K,
                     cab.h_tail,
                     std::nullopt};
}

AbGrid ab_grid(int n) {
  if (n < 1) throw DomainError("ab_grid: size must be positive");
  AbGrid g;
  g.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.emplace_back(n == 1 ? 0.0 : double(i) / (n - 1), n == 1 ? 0.0 : double(j) / (n - 1));
  return g;
}

namespace {

std::vector<Quad> quad_margins(double a, double b, int k_max) {
  const auto g = revert(f_bar_series<Quad>(Quad(a), Quad(b), k_max));
  std::vector<Quad> out;
  Quad inv_fact(1);
  for (int k = 1; k <= k_max; ++k) {
    inv_fact /= k;
    if (k % 2 == 0) continue;
    out.push_back((k % 4 == 1 ? inv_fact : Quad(0)) - g[k]);
  }
  return out;
}

void check_odd_kmax(int k_max) {
  if (k_max < 1 || k_max % 2 == 0) throw DomainError("k_max must be a positive odd integer");
}

}  // namespace

std::vector<double> condition_margins(double a, double b, int k_max) {
  check_odd_kmax(k_max);
  std::vector<double> out;
  for (const Quad& m : quad_margins(a, b, k_max)) out.push_back(static_cast<double>(m));
  return out;
}

ConditionReport check_conditions(int k_max, const AbGrid& grid, int K) {
  check_odd_kmax(k_max);
  if (k_max > K) throw DomainError("check_conditions: k_max exceeds the truncation order");
  if (grid.empty()) throw DomainError("check_conditions: empty grid");

  ConditionReport rep{k_max, grid.size(), {}, true};
  for (int k = 1; k <= k_max; k += 2)
    rep.entries.push_back(ConditionEntry{k, k % 4 == 1 ? 1 : 2, kInf, 0.0, 0.0, true});

  // Coefficient k of the inverse only depends on f_bar up to degree k.
  for (const auto& [a, b] : grid) {
    const auto margins = quad_margins(a, b, k_max);
    for (std::size_t i = 0; i < margins.size(); ++i) {
      const double m = static_cast<double>(margins[i]);
      auto& e = rep.entries[i];
      if (m < e.worst_margin) {
        e.worst_margin = m;
        e.worst_a = a;
        e.worst_b = b;
      }
    }
  }
  for (auto& e : rep.entries) {
    e.passed = e.worst_margin >= kConditionTolerance;
    rep.all_passed = rep.all_passed && e.passed;
  }
  return rep;
}

double analytic_h_err_bound(int t_odd, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("analytic_h_err_bound: delta must lie in (0,1)");
  return 6.1831 / t_odd * std::pow(delta, t_odd) / (1.0 - delta * delta);
}

DefectCertificate certify_defect(const AbGrid& grid, int t_odd, double delta, int K) {
  if (t_odd < 3 || t_odd % 2 == 0) throw DomainError("certify_defect: t must be an odd integer >= 3");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("certify_defect: delta must lie in (0,1)");
  if (K < t_odd) throw DomainError("certify_defect: order must be at least t");
  if (grid.empty()) throw DomainError("certify_defect: empty grid");

  DefectCertificate cert;
  cert.t_odd = t_odd;
  cert.delta = delta;
  cert.h_err_analytic = analytic_h_err_bound(t_odd, delta);
  cert.conditions_hold = check_conditions(t_odd - 2, grid, t_odd - 2).all_passed;

  std::vector<Series> hs;
  hs.reserve(grid.size());
  for (const auto& [a, b] : grid) {
    hs.push_back(abs_map(f_bar_inverse(NormPair::from_ab(a, b), K)));
    const auto r = eval(hs.back(), delta, t_odd);
    const double err = r.bounded ? r.value + r.tail : kInf;
    if (err > cert.h_err || hs.size() == 1) {
      cert.h_err = err;
      cert.worst_a = a;
      cert.worst_b = b;
    }
  }

  if (!(1.0 - 2.0 * cert.h_err > 0.0)) return cert;
  cert.rho_certified = std::min(delta, std::asinh(1.0 - 2.0 * cert.h_err));
  cert.defect_bound = std::sinh(cert.rho_certified) + 2.0 * cert.h_err;
  for (const auto& h : hs) cert.h_at_rho = std::max(cert.h_at_rho, h_upper(h, cert.rho_certified));
  cert.certified = cert.conditions_hold && cert.h_at_rho <= 1.0 && cert.defect_bound <= 1.0;
  return cert;
}

DefectCertificate certify_defect(const NormPair& pair, int t_odd, double delta, int K) {
  return certify_defect(AbGrid{{pair.a, pair.b}}, t_odd, delta, K);
}

GridMax max_h_on_grid(const AbGrid& grid, double rho, int K) {
  GridMax best{-kInf, 0.0, 0.0};
  for (const auto& [a, b] : grid) {
    const double v = h_upper(abs_map(f_bar_inverse(NormPair::from_ab(a, b), K)), rho);
    if (v > best.value) best = GridMax{v, a, b};
  }
  return best;
}

double cotype2_constant(double q) {
  if (!(q >= 1.0)) throw DomainError("cotype2_constant: exponent must be >= 1");
  if (q > 2.0) throw DomainError("cotype2_constant: exponent above 2 has a dimension-dependent constant");
  return std::max(std::pow(2.0, 1.0 / q - 0.5), 1.0 / gaussian_moment(q));
}

double factorization_bound(const NormPair& pair) { return certified_ratio(pair); }

double cotype_factorization_bound(const NormPair& pair) {
  return (1.0 + kEpsilon0) / std::asinh(1.0) * cotype2_constant(pair.p_dual()) * cotype2_constant(pair.q);
}

std::vector<SweepRow> dual_slice_sweep(const std::vector<double>& ps, int K) {
  std::vector<SweepRow> rows;
  rows.reserve(ps.size());
  for (double p : ps) {
    const NormPair pair = NormPair::from_pq(p, dual_exponent(p));
    const BoundReport r = approx_ratio(pair, K);
    rows.push_back(SweepRow{p, pair.p_dual(), r.ratio, r.ratio_certified, r.krivine_ratio, r.steinberg_ratio});
  }
  return rows;
}

}  // namespace pqnorm
