#ifndef PQNORM_KRIVINE_HPP
#define PQNORM_KRIVINE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "pqnorm/series.hpp"
#include "pqnorm/specfun.hpp"

namespace pqnorm {

constexpr double kEpsilon0 = 0.00863;
// Signed margins of C1/C2 above this (negative) threshold count as passing.
constexpr double kConditionTolerance = -1e-32;

// r* = r/(r-1), with 1 <-> infinity.
double dual_exponent(double r);

// 1 <= q <= 2 <= p <= inf, a = p* - 1, b = q - 1.
struct NormPair {
  double p;
  double q;
  double a;
  double b;

  static NormPair from_pq(double p, double q);
  static NormPair from_ab(double a, double b);
  double p_dual() const { return 1.0 + a; }
  double q_dual() const { return dual_exponent(q); }
};

template <typename Scalar>
TruncatedSeries<Scalar> f_bar_series(Scalar a, Scalar b, int K) {
  if (K < 1) throw DomainError("f_bar_series: order must be at least 1");
  const Scalar half(0.5);
  const auto h = hyp_coeffs<Scalar>(HypKind::F21, {(Scalar(1) - a) * half, (Scalar(1) - b) * half, Scalar(3) * half},
                                    (K - 1) / 2);
  TruncatedSeries<Scalar> s(K, true);
  for (int j = 0; 2 * j + 1 <= K; ++j) s.set(2 * j + 1, h[j]);
  return s;
}

Series f_bar_series(const NormPair& pair, int K);
Series f_bar_inverse(const NormPair& pair, int K);

struct CabResult {
  double c_ab;
  Series h_series;
  double h_value;  // retained terms of h at c_ab
  double h_tail;   // tail estimate at c_ab
};

// Largest c with h(c) + tail(c) <= 1, where h = |f_bar^{-1}|.
CabResult compute_c_ab(const NormPair& pair, int K = 60, double tol = 1e-4);

struct DefectCertificate {
  int t_odd = 0;
  double delta = 0.0;
  double h_err = 0.0;            // max over inputs of sum_{k>=t} |f^{-1}_k| delta^k
  double h_err_analytic = 0.0;   // 6.1831/t * delta^t / (1 - delta^2)
  double rho_certified = 0.0;    // min(delta, asinh(1 - 2 h_err))
  double h_at_rho = 0.0;         // max over inputs of h(rho) + tail
  double defect_bound = 0.0;     // sinh(rho) + 2 h_err
  bool conditions_hold = false;
  bool certified = false;
  double worst_a = 0.0;
  double worst_b = 0.0;
};

struct BoundReport {
  NormPair pair;
  double c_ab;
  double ratio;
  double ratio_certified;
  double krivine_ratio;
  double steinberg_ratio;
  int K;
  double tail_bound;
  std::optional<DefectCertificate> defect;
};

double krivine_ratio();
double steinberg_ratio(const NormPair& pair);
// (1 + eps0) / (asinh(1) gamma_{p*} gamma_q)
double certified_ratio(const NormPair& pair, double eps0 = kEpsilon0);

BoundReport approx_ratio(const NormPair& pair, int K = 60, double tol = 1e-4);

using AbGrid = std::vector<std::pair<double, double>>;

// n x n lattice on [0,1]^2.
AbGrid ab_grid(int n);

struct ConditionEntry {
  int k;
  int condition;        // 1 or 2
  double worst_margin;  // min over grid of (1/k! or 0) - f^{-1}_k
  double worst_a;
  double worst_b;
  bool passed;
};

struct ConditionReport {
  int k_max;
  std::size_t points;
  std::vector<ConditionEntry> entries;
  bool all_passed;
};

// Inverse coefficients are computed in quadruple precision.
ConditionReport check_conditions(int k_max, const AbGrid& grid, int K);
// Signed margin for every odd k <= k_max at a single point, index (k-1)/2.
std::vector<double> condition_margins(double a, double b, int k_max);

double analytic_h_err_bound(int t_odd, double delta);
DefectCertificate certify_defect(const AbGrid& grid, int t_odd, double delta, int K);
DefectCertificate certify_defect(const NormPair& pair, int t_odd, double delta, int K);

struct GridMax {
  double value;
  double a;
  double b;
};
// max over the grid of h(rho) + tail.
GridMax max_h_on_grid(const AbGrid& grid, double rho, int K);

// max{2^{1/q - 1/2}, 1/gamma_q} for 1 <= q <= 2.
double cotype2_constant(double q);
double factorization_bound(const NormPair& pair);
double cotype_factorization_bound(const NormPair& pair);

struct SweepRow {
  double p;
  double p_dual;
  double ratio_ours;
  double ratio_certified;
  double ratio_krivine;
  double ratio_steinberg;
};

// q = p* slice.
std::vector<SweepRow> dual_slice_sweep(const std::vector<double>& ps, int K);

}  // namespace pqnorm

#endif  // PQNORM_KRIVINE_HPP
