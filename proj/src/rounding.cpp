#include "pqnorm/rounding.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace pqnorm {

Eigen::VectorXd holder_dual(const Eigen::VectorXd& z, double r) {
  if (!(r >= 1.0) || std::isinf(r)) throw DomainError("holder_dual: exponent must lie in [1, inf)");
  if (!z.allFinite()) throw DomainError("holder_dual: vector has non-finite entries");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double s = (z[i] > 0.0) - (z[i] < 0.0);
    out[i] = r == 1.0 ? s : (r == 2.0 ? z[i] : s * std::pow(std::abs(z[i]), r - 1.0));
  }
  return out;
}

double folded_scale(const TransformedGram& tg, Eigen::Index i, double power) {
  const double den = tg.scale_den[i];
  if (power == den) return tg.scale_base[i];
  if (den == 0.0) throw DomainError("folded_scale: exponent 1/0 does not fold");
  return std::pow(tg.scale_base[i], power / den);
}

namespace {

Eigen::MatrixXd unit_rows(const Eigen::MatrixXd& X, Eigen::VectorXd& norms) {
  norms = X.rowwise().norm();
  Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(X.rows(), X.cols());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    if (norms[i] > 0.0) Y.row(i) = X.row(i) / norms[i];
  return Y;
}

Eigen::MatrixXd apply_entrywise(const Series& s, const Eigen::MatrixXd& G) {
  return G.unaryExpr([&](double v) { return s.horner(v); });
}

Eigen::MatrixXd gram_factor(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal();
}

struct Draw {
  Eigen::VectorXd ny;
  Eigen::VectorXd nx;
};

Draw draw_numerators(const TransformedGram& tg, const Eigen::MatrixXd& L, std::mt19937_64& eng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd g(L.cols());
  for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = normal(eng);
  const Eigen::VectorXd zeta = L * g;
  const double q = 1.0 + tg.b, p_dual = 1.0 + tg.a;
  Draw d{holder_dual(zeta.head(tg.m), q), holder_dual(zeta.tail(tg.n), p_dual)};
  for (Eigen::Index i = 0; i < tg.m; ++i) d.ny[i] *= folded_scale(tg, i, tg.b);
  for (Eigen::Index j = 0; j < tg.n; ++j) d.nx[j] *= folded_scale(tg, tg.m + j, tg.a);
  return d;
}

}  // namespace

TransformedGram build_transformed_gram(const RelaxationSolution& sol, const NormPair& pair, double c_ab, int K) {
  if (sol.U.cols() != sol.V.cols()) throw DomainError("build_transformed_gram: U and V dimensions differ");
  if (!(c_ab > 0.0 && c_ab <= 1.0)) throw DomainError("build_transformed_gram: c_ab must lie in (0,1]");
  TransformedGram tg;
  tg.m = sol.U.rows();
  tg.n = sol.V.rows();
  tg.c_ab = c_ab;
  tg.a = pair.a;
  tg.b = pair.b;

  Eigen::VectorXd nu, nv;
  const Eigen::MatrixXd Uh = unit_rows(sol.U, nu);
  const Eigen::MatrixXd Vh = unit_rows(sol.V, nv);
  const Series inv = f_bar_inverse(pair, K);
  const Series h = abs_map(inv);

  const Eigen::Index N = tg.m + tg.n;
  tg.M.resize(N, N);
  tg.M.topLeftCorner(tg.m, tg.m) = apply_entrywise(h, c_ab * Uh * Uh.transpose());
  tg.M.bottomRightCorner(tg.n, tg.n) = apply_entrywise(h, c_ab * Vh * Vh.transpose());
  tg.M.topRightCorner(tg.m, tg.n) = apply_entrywise(inv, c_ab * Uh * Vh.transpose());
  tg.M.bottomLeftCorner(tg.n, tg.m) = tg.M.topRightCorner(tg.m, tg.n).transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tg.M);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < 0.0) {
    tg.psd_repair_shift = -lmin;
    if (tg.psd_repair_shift > 1e-6)
      throw NumericalError("build_transformed_gram: PSD repair shift " + std::to_string(tg.psd_repair_shift) +
                           " exceeds 1e-6; increase the truncation order");
    const Eigen::VectorXd target = tg.M.diagonal();
    Eigen::MatrixXd R = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() *
                        es.eigenvectors().transpose();
    Eigen::VectorXd s(N);
    for (Eigen::Index i = 0; i < N; ++i) s[i] = R(i, i) > 0.0 ? std::sqrt(target[i] / R(i, i)) : 0.0;
    tg.M = s.asDiagonal() * R * s.asDiagonal();
    tg.M = 0.5 * (tg.M + tg.M.transpose()).eval();
  }

  tg.scale_base.resize(N);
  tg.scale_den.resize(N);
  tg.scale_base << nu, nv;
  tg.scale_den << Eigen::VectorXd::Constant(tg.m, pair.b), Eigen::VectorXd::Constant(tg.n, pair.a);
  return tg;
}

RoundedSolution sample_round(const ProblemInstance& inst, const TransformedGram& tg, const RelaxationSolution& sol,
                             long num_samples, std::uint64_t seed) {
  validate(inst);
  if (num_samples < 1) throw DomainError("sample_round: need at least one sample");
  if (inst.A.rows() != tg.m || inst.A.cols() != tg.n || sol.U.rows() != tg.m || sol.V.rows() != tg.n)
    throw DomainError("sample_round: dimensions of matrix, solution and Gram matrix disagree");
  const Eigen::MatrixXd L = gram_factor(tg.M);
  const double q_dual = inst.pair.q_dual(), p = inst.pair.p;

  RoundedSolution out;
  out.value = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  std::uint64_t stream = 0;
  const long max_draws = 100 * num_samples + 100;
  while (out.sample_count < num_samples) {
    if (static_cast<long>(stream) >= max_draws) throw NumericalError("sample_round: projections keep vanishing");
    auto eng = stream_engine(seed, stream++);
    const Draw d = draw_numerators(tg, L, eng);
    const double ny = lp_norm(d.ny, q_dual), nx = lp_norm(d.nx, p);
    if (ny == 0.0 || nx == 0.0) {
      ++out.resamples;
      continue;
    }
    const Eigen::VectorXd y = d.ny / ny, x = d.nx / nx;
    const double v = y.dot(inst.A * x);
    sum += v;
    ++out.sample_count;
    if (v > out.value) {
      out.value = v;
      out.y = y;
      out.x = x;
    }
  }
  out.empirical_mean_value = sum / static_cast<double>(out.sample_count);
  return out;
}

MomentEstimate numerator_moments(const TransformedGram& tg, long num_samples, std::uint64_t seed) {
  if (num_samples < 2) throw DomainError("numerator_moments: need at least two samples");
  const Eigen::MatrixXd L = gram_factor(tg.M);
  Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(tg.m, tg.n), s2 = s1;
  for (long k = 0; k < num_samples; ++k) {
    auto eng = stream_engine(seed, static_cast<std::uint64_t>(k));
    const Draw d = draw_numerators(tg, L, eng);
    const Eigen::MatrixXd outer = d.ny * d.nx.transpose();
    s1 += outer;
    s2 += outer.cwiseProduct(outer);
  }
  const double N = static_cast<double>(num_samples);
  MomentEstimate est;
  est.mean = s1 / N;
  const Eigen::MatrixXd var = ((s2 / N - est.mean.cwiseProduct(est.mean)) * (N / (N - 1.0))).cwiseMax(0.0);
  est.std_error = (var / N).cwiseSqrt();
  return est;
}

Eigen::MatrixXd numerator_reference(const RelaxationSolution& sol, const NormPair& pair, double c_ab) {
  const double k = gaussian_absolute_moment(pair.q) * gaussian_absolute_moment(pair.p_dual());
  return k * c_ab * sol.U * sol.V.transpose();
}

ScalarEstimate denominator_moment(const TransformedGram& tg, const NormPair& pair, long num_samples,
                                  std::uint64_t seed) {
  if (num_samples < 2) throw DomainError("denominator_moment: need at least two samples");
  const Eigen::MatrixXd L = gram_factor(tg.M);
  const double q_dual = pair.q_dual(), p = pair.p;
  double s1 = 0.0, s2 = 0.0;
  for (long k = 0; k < num_samples; ++k) {
    auto eng = stream_engine(seed, static_cast<std::uint64_t>(k));
    const Draw d = draw_numerators(tg, L, eng);
    const double v = lp_norm(d.ny, q_dual) * lp_norm(d.nx, p);
    s1 += v;
    s2 += v * v;
  }
  const double N = static_cast<double>(num_samples);
  const double mean = s1 / N;
  const double var = std::max(0.0, (s2 / N - mean * mean) * N / (N - 1.0));
  return ScalarEstimate{mean, std::sqrt(var / N)};
}

double denominator_bound(const NormPair& pair) {
  const double ga = pair.a == 0.0 ? 1.0 : std::pow(gaussian_moment(pair.p_dual()), pair.a);
  const double gb = pair.b == 0.0 ? 1.0 : std::pow(gaussian_moment(pair.q), pair.b);
  return ga * gb;
}

}  // namespace pqnorm
