#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pqnorm/errors.hpp"
#include "pqnorm/factorization.hpp"
#include "pqnorm/krivine.hpp"
#include "pqnorm/matrix_io.hpp"
#include "pqnorm/oracles.hpp"
#include "pqnorm/relaxation.hpp"
#include "pqnorm/rounding.hpp"

using json = nlohmann::json;
using namespace pqnorm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum Exit { kOk = 0, kCheckFailed = 1, kInputError = 2, kNumericalError = 3 };

struct RunConfig {
  std::string p = "";
  std::string q = "";
  int order = 60;
  int grid = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  std::string in;
  std::string out;
  double tol = 1e-4;
  double delta = std::asinh(0.974203);
  int t_odd = 31;
  int restarts = 16;
  double p_max = 100.0;
  std::string q_rule = "dual";
  std::string suite = "all";
};

double parse_exponent(const std::string& s, const char* name) {
  if (s == "inf" || s == "infinity" || s == "Inf" || s == "INF") return kInf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw InputError(std::string("--") + name + ": not a number: '" + s + "'");
  return v;
}

NormPair pair_from(const RunConfig& cfg) {
  if (cfg.p.empty()) throw InputError("--p is required");
  const double p = parse_exponent(cfg.p, "p");
  const double q = cfg.q.empty() ? dual_exponent(p) : parse_exponent(cfg.q, "q");
  return NormPair::from_pq(p, q);
}

json jnum(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json jvec(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(jnum(v[i]));
  return a;
}

json jmat(const Eigen::MatrixXd& A) {
  json data = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) data.push_back(jnum(A(i, j)));
  return json{{"rows", A.rows()}, {"cols", A.cols()}, {"data", data}};
}

std::string csv_num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_number(v);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw InputError("cannot open '" + cfg.out + "' for writing");
  f << text;
  if (!f) throw InputError("write failed for '" + cfg.out + "'");
}

// ---------------------------------------------------------------- bounds

std::string bounds_row(const NormPair& pair, int K, double tol) {
  const BoundReport r = approx_ratio(pair, K, tol);
  std::ostringstream os;
  os << csv_num(pair.p) << ',' << csv_num(pair.q) << ',' << csv_num(pair.p_dual()) << ',' << csv_num(pair.a) << ','
     << csv_num(pair.b) << ',' << csv_num(r.c_ab) << ',' << csv_num(r.ratio) << ',' << csv_num(r.ratio_certified)
     << ',' << csv_num(r.krivine_ratio) << ',' << csv_num(r.steinberg_ratio) << ',' << r.K << ','
     << csv_num(r.tail_bound) << '\n';
  return os.str();
}

int cmd_bounds(const RunConfig& cfg) {
  std::ostringstream os;
  os << "p,q,p_dual,a,b,c_ab,ratio_ours,ratio_certified,ratio_krivine,ratio_steinberg,K,tail_bound\n";
  if (!cfg.p.empty()) {
    os << bounds_row(pair_from(cfg), cfg.order, cfg.tol);
    emit(cfg, os.str());
    return kOk;
  }
  if (cfg.q_rule != "dual" && cfg.q_rule != "grid") throw InputError("--q-rule must be dual or grid");
  if (!(cfg.p_max > 2.0)) throw InputError("--p-max must exceed 2");
  const int n = cfg.grid > 0 ? cfg.grid : 50;
  if (n < 2) throw InputError("--grid must be at least 2");
  std::vector<double> ps;
  for (int i = 0; i < n; ++i) ps.push_back(2.0 * std::pow(cfg.p_max / 2.0, double(i) / (n - 1)));
  ps.push_back(kInf);
  for (double p : ps) {
    if (cfg.q_rule == "dual") {
      os << bounds_row(NormPair::from_pq(p, dual_exponent(p)), cfg.order, cfg.tol);
    } else {
      for (int j = 0; j < n; ++j) os << bounds_row(NormPair::from_pq(p, 1.0 + double(j) / (n - 1)), cfg.order, cfg.tol);
    }
  }
  emit(cfg, os.str());
  return kOk;
}

// ---------------------------------------------------------------- round

int cmd_round(const RunConfig& cfg) {
  if (cfg.in.empty()) throw InputError("--in is required");
  const NormPair pair = pair_from(cfg);
  const ProblemInstance inst{read_matrix(cfg.in), pair};
  CpOptions cp;
  cp.seed = cfg.seed;
  cp.restarts = cfg.restarts;
  const RelaxationSolution sol = solve_cp(inst, cp);
  const BoundReport bound = approx_ratio(pair, cfg.order, cfg.tol);
  const TransformedGram tg = build_transformed_gram(sol, pair, bound.c_ab, cfg.order);
  const long samples = cfg.samples > 0 ? cfg.samples : 10000;
  const RoundedSolution r = sample_round(inst, tg, sol, samples, cfg.seed);
  json j{{"p", jnum(pair.p)},
         {"q", jnum(pair.q)},
         {"cp_value", jnum(sol.value)},
         {"cp_converged", sol.converged},
         {"c_ab", jnum(bound.c_ab)},
         {"best_value", jnum(r.value)},
         {"empirical_mean", jnum(r.empirical_mean_value)},
         {"empirical_ratio", jnum(sol.value / r.value)},
         {"ratio_bound", jnum(bound.ratio)},
         {"samples", r.sample_count},
         {"resamples", r.resamples},
         {"seed", cfg.seed},
         {"psd_repair_shift", jnum(tg.psd_repair_shift)},
         {"y", jvec(r.y)},
         {"x", jvec(r.x)}};
  emit(cfg, j.dump() + "\n");
  return kOk;
}

// ---------------------------------------------------------------- factorize

int cmd_factorize(const RunConfig& cfg) {
  if (cfg.in.empty()) throw InputError("--in is required");
  const ProblemInstance inst{read_matrix(cfg.in), pair_from(cfg)};
  DualOptions opts;
  opts.cp.seed = cfg.seed;
  opts.cp.restarts = cfg.restarts;
  const DualSolution d = solve_dual(inst, opts);
  const FactorizationCertificate c = build_certificate(inst, d.s, d.t);
  json j{{"s", jvec(c.s)},
         {"t", jvec(c.t)},
         {"B", jmat(c.B)},
         {"dual_value", jnum(c.dual_value)},
         {"primal_value", jnum(d.primal_value)},
         {"duality_gap", jnum(c.dual_value - d.primal_value)},
         {"spectral_norm_B", jnum(c.spectral_norm_B)},
         {"norm_product", jnum(c.norm_product)},
         {"reconstruction_error", jnum(c.reconstruction_error)},
         {"psd_min_eigenvalue", jnum(c.psd_min_eigenvalue)},
         {"iterations", d.iterations},
         {"converged", d.converged}};
  emit(cfg, j.dump() + "\n");
  return kOk;
}

// ---------------------------------------------------------------- verify

struct Suite {
  std::ostringstream lines;
  bool all_passed = true;

  void add(const std::string& suite, const IdentityCheckResult& r) {
    json j{{"suite", suite},           {"target", r.target},       {"estimate", jnum(r.estimate)},
           {"reference", jnum(r.reference)}, {"std_error", jnum(r.std_error)}, {"sigmas", jnum(r.sigmas)},
           {"tolerance", jnum(r.tolerance)}, {"passed", r.passed}};
    lines << j.dump() << '\n';
    all_passed = all_passed && r.passed;
  }
  void add(const std::string& suite, const std::string& target, double estimate, double reference, double tolerance,
           bool passed) {
    IdentityCheckResult r;
    r.target = target;
    r.estimate = estimate;
    r.reference = reference;
    r.tolerance = tolerance;
    r.passed = passed;
    add(suite, r);
  }
};

std::string fmt(double v) { return csv_num(v); }

void suite_identities(Suite& s, const RunConfig& cfg) {
  const long N = cfg.samples > 0 ? cfg.samples : 1000000;
  const double lattice[] = {0.0, 0.3, 0.7, 1.0};
  std::uint64_t idx = 0;
  for (double a : lattice)
    for (double b : lattice)
      for (double rho : {0.2, 0.5, 0.8}) s.add("identities", mc_f_ab(a, b, rho, N, cfg.seed * 1000003ULL + idx++));
  for (double c : lattice)
    for (const auto& r : hermite_coeff_check(c, 15)) s.add("identities", r);
  for (auto [a, b] : {std::pair{0.0, 0.0}, {0.3, 0.7}, {0.7, 0.3}, {1.0, 0.3}})
    for (double rho : {0.2, 0.5, 0.8}) {
      const double est = noise_correlation_series(a, b, rho, 101), ref = f_ab_reference(a, b, rho);
      s.add("identities", "noise_correlation(a=" + fmt(a) + ",b=" + fmt(b) + ",rho=" + fmt(rho) + ")", est, ref,
            1e-5, std::abs(est - ref) <= 1e-5);
    }
  for (double a : {0.0, 0.5, 1.0})
    for (double b : {0.0, 0.5, 1.0}) {
      const Series inv = revert(f_bar_series<double>(a, b, 15));
      for (int k = 1; k <= 9; k += 2) {
        const double est = contour_inverse_coeff(a, b, k);
        s.add("identities", "contour_inverse(a=" + fmt(a) + ",b=" + fmt(b) + ",k=" + std::to_string(k) + ")", est,
              inv[k], 1e-6, std::abs(est - inv[k]) <= 1e-6);
      }
    }
}

void suite_conditions(Suite& s, const RunConfig& cfg) {
  const int n = cfg.grid > 0 ? cfg.grid : 101;
  const ConditionReport rep = check_conditions(29, ab_grid(n), 29);
  for (const auto& e : rep.entries)
    s.add("conditions",
          "C" + std::to_string(e.condition) + "(k=" + std::to_string(e.k) + ",worst a=" + fmt(e.worst_a) +
              ",b=" + fmt(e.worst_b) + ")",
          e.worst_margin, 0.0, kConditionTolerance, e.passed);
}

void suite_contours(Suite& s, const RunConfig&) {
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double b : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const ContourReport r = contour_magnitude_check(a, b, 6.0, 1e-4, 200);
      s.add("contours", "arc(|z|=6,a=" + fmt(a) + ",b=" + fmt(b) + ")", r.arc_min, 1.0, 0.0, r.arc_min > 1.0);
      if (a < 1.0 && b < 1.0)
        s.add("contours", "segment(eps=1e-4,a=" + fmt(a) + ",b=" + fmt(b) + ")", r.segment_min, 1.0, 0.0,
              r.segment_min > 1.0);
    }
  std::vector<double> bs;
  for (int i = 0; i < 1000; ++i) bs.push_back(i / 1000.0);
  const BetaReport br = beta_expression_check(bs);
  s.add("contours", "beta_expression(min at b=" + fmt(br.argmin_b) + ")", br.min_value, 1.003, 0.0, br.passed);
  double worst = 0.0;
  for (double a : {0.0, 0.5})
    for (double b : {0.0, 0.5, 0.9})
      for (double y : {0.5, 2.0, 6.0})
        worst = std::max(worst, std::abs(f_bar_complex({0.0, y}, a, b).real()));
  s.add("contours", "imaginary_axis_real_part", worst, 0.0, 1e-12, worst <= 1e-12);
}

void suite_factorization(Suite& s, const RunConfig& cfg) {
  const NormPair pair = NormPair::from_pq(4.0, 4.0 / 3.0);
  for (std::uint64_t i = 0; i < 10; ++i) {
    const ProblemInstance inst{gaussian_matrix(6, 5, cfg.seed, i), pair};
    DualOptions opts;
    opts.cp.seed = cfg.seed + i;
    const DualSolution d = solve_dual(inst, opts);
    const FactorizationCertificate c = build_certificate(inst, d.s, d.t);
    const double bf = brute_force_norm(inst);
    const std::string id = "(instance=" + std::to_string(i) + ")";
    s.add("factorization", "reconstruction" + id, c.reconstruction_error, 0.0, 1e-8, c.reconstruction_error < 1e-8);
    s.add("factorization", "spectral_norm_B" + id, c.spectral_norm_B, 1.0, 1e-6, c.spectral_norm_B <= 1.0 + 1e-6);
    s.add("factorization", "norm_product<=dual" + id, c.norm_product, c.dual_value, 1e-6,
          c.norm_product <= c.dual_value + 1e-6);
    s.add("factorization", "duality_gap" + id, c.dual_value - d.primal_value, 0.0, 1e-4 * c.dual_value,
          c.dual_value - d.primal_value <= 1e-4 * c.dual_value);
    s.add("factorization", "norm<=norm_product" + id, bf, c.norm_product, 1e-6, bf <= c.norm_product + 1e-6);
  }
}

int cmd_verify(const RunConfig& cfg) {
  const std::string& name = cfg.suite;
  if (name != "all" && name != "identities" && name != "conditions" && name != "contours" && name != "factorization")
    throw InputError("unknown suite '" + name + "'");
  Suite s;
  if (name == "all" || name == "identities") suite_identities(s, cfg);
  if (name == "all" || name == "conditions") suite_conditions(s, cfg);
  if (name == "all" || name == "contours") suite_contours(s, cfg);
  if (name == "all" || name == "factorization") suite_factorization(s, cfg);
  emit(cfg, s.lines.str());
  return s.all_passed ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- krivine checks

int cmd_check_conditions(const RunConfig& cfg) {
  const int n = cfg.grid > 0 ? cfg.grid : 101;
  const int k_max = cfg.order;
  const ConditionReport rep = check_conditions(k_max, ab_grid(n), k_max);
  json entries = json::array();
  for (const auto& e : rep.entries)
    entries.push_back(json{{"k", e.k},
                           {"condition", e.condition},
                           {"worst_margin", jnum(e.worst_margin)},
                           {"worst_a", e.worst_a},
                           {"worst_b", e.worst_b},
                           {"passed", e.passed}});
  json j{{"k_max", rep.k_max}, {"points", rep.points}, {"all_passed", rep.all_passed}, {"entries", entries}};
  emit(cfg, j.dump() + "\n");
  return rep.all_passed ? kOk : kCheckFailed;
}

int cmd_certify_defect(const RunConfig& cfg) {
  const int n = cfg.grid > 0 ? cfg.grid : 101;
  const AbGrid grid = ab_grid(n);
  const DefectCertificate c = certify_defect(grid, cfg.t_odd, cfg.delta, cfg.order);
  const double rho0 = std::asinh(1.0) / (1.0 + kEpsilon0);
  const GridMax gm = max_h_on_grid(grid, rho0, cfg.order);
  const bool h_ok = gm.value <= 1.0 + 1e-9;
  json j{{"t", c.t_odd},
         {"delta", jnum(c.delta)},
         {"K", cfg.order},
         {"grid", n},
         {"h_err", jnum(c.h_err)},
         {"h_err_analytic", jnum(c.h_err_analytic)},
         {"worst_a", c.worst_a},
         {"worst_b", c.worst_b},
         {"rho_certified", jnum(c.rho_certified)},
         {"h_at_rho", jnum(c.h_at_rho)},
         {"defect_bound", jnum(c.defect_bound)},
         {"conditions_hold", c.conditions_hold},
         {"certified", c.certified},
         {"epsilon0", kEpsilon0},
         {"rho_epsilon0", jnum(rho0)},
         {"max_h_at_rho_epsilon0", jnum(gm.value)},
         {"max_h_a", gm.a},
         {"max_h_b", gm.b},
         {"epsilon0_holds", h_ok}};
  emit(cfg, j.dump() + "\n");
  return c.certified && h_ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximation of p->q operator norms by generalized Krivine rounding"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_pair = [&](CLI::App* c, bool required) {
    auto* p = c->add_option("--p", cfg.p, "domain exponent p in [2, inf]");
    if (required) p->required();
    c->add_option("--q", cfg.q, "range exponent q in [1, 2] (default p*)");
  };
  auto add_out = [&](CLI::App* c) { c->add_option("--out", cfg.out, "output path (default stdout)"); };

  auto* bounds = app.add_subcommand("bounds", "approximation ratios as CSV");
  add_pair(bounds, false);
  bounds->add_option("--order", cfg.order, "series truncation order K");
  bounds->add_option("--grid", cfg.grid, "sweep resolution");
  bounds->add_option("--p-max", cfg.p_max, "largest finite p of the sweep");
  bounds->add_option("--q-rule", cfg.q_rule, "dual (q = p*) or grid (q in [1,2])");
  bounds->add_option("--tol", cfg.tol, "tail tolerance for c_ab");
  add_out(bounds);

  auto* round = app.add_subcommand("round", "relaxation plus rounding on a matrix");
  add_pair(round, true);
  round->add_option("--in", cfg.in, "matrix file (.csv or .json)")->required();
  round->add_option("--samples", cfg.samples, "number of rounding samples");
  round->add_option("--seed", cfg.seed, "random seed");
  round->add_option("--order", cfg.order, "series truncation order K");
  round->add_option("--restarts", cfg.restarts, "relaxation restarts");
  round->add_option("--tol", cfg.tol, "tail tolerance for c_ab");
  add_out(round);

  auto* factorize = app.add_subcommand("factorize", "dual program and Hilbert-space factorization");
  add_pair(factorize, true);
  factorize->add_option("--in", cfg.in, "matrix file (.csv or .json)")->required();
  factorize->add_option("--seed", cfg.seed, "random seed");
  factorize->add_option("--restarts", cfg.restarts, "relaxation restarts");
  add_out(factorize);

  auto* verify = app.add_subcommand("verify", "numeric verification suites as JSON lines");
  verify->add_option("suite", cfg.suite, "identities, conditions, contours, factorization or all");
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--samples", cfg.samples, "Monte Carlo sample count");
  verify->add_option("--grid", cfg.grid, "(a,b) grid resolution for conditions");
  add_out(verify);

  auto* conditions = app.add_subcommand("check-conditions", "sign conditions on inverse coefficients");
  cfg.order = 60;
  int k_max = 29;
  conditions->add_option("--order", k_max, "largest odd k");
  conditions->add_option("--grid", cfg.grid, "(a,b) grid resolution");
  add_out(conditions);

  auto* defect = app.add_subcommand("certify-defect", "certify the defect bound over an (a,b) grid");
  defect->add_option("--order", cfg.order, "series truncation order K");
  defect->add_option("--grid", cfg.grid, "(a,b) grid resolution");
  defect->add_option("--t", cfg.t_odd, "odd truncation index t");
  defect->add_option("--delta", cfg.delta, "radius delta");
  add_out(defect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*bounds) return cmd_bounds(cfg);
    if (*round) return cmd_round(cfg);
    if (*factorize) return cmd_factorize(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*conditions) {
      cfg.order = k_max;
      return cmd_check_conditions(cfg);
    }
    if (*defect) return cmd_certify_defect(cfg);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kInputError;
}
