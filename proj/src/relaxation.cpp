#include "pqnorm/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "pqnorm/rounding.hpp"

namespace pqnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& eng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) X(i, j) = normal(eng);
  return X;
}

// argmax of sum_i <x^i, w^i> subject to sum_i ||x^i||^s <= 1, where r = s*.
Eigen::MatrixXd block_update(const Eigen::MatrixXd& W, double r) {
  const Eigen::VectorXd omega = W.rowwise().norm();
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(W.rows(), W.cols());
  if (r == 1.0) {
    for (Eigen::Index i = 0; i < W.rows(); ++i)
      if (omega[i] > 0.0) X.row(i) = W.row(i) / omega[i];
    return X;
  }
  const double norm = lp_norm(omega, r);
  if (norm == 0.0) return X;
  for (Eigen::Index i = 0; i < W.rows(); ++i)
    if (omega[i] > 0.0) X.row(i) = W.row(i) / omega[i] * std::pow(omega[i] / norm, r - 1.0);
  return X;
}

// Rescale rows of X onto the boundary of sum ||x^i||^s <= 1.
Eigen::MatrixXd project_scale(Eigen::MatrixXd X, double s) {
  const double c = row_constraint(X, s);
  if (c == 0.0) return X;
  return std::isinf(s) ? Eigen::MatrixXd(X / c) : Eigen::MatrixXd(X / std::pow(c, 1.0 / s));
}

double objective(const Eigen::MatrixXd& A, const Eigen::MatrixXd& U, const Eigen::MatrixXd& V) {
  return (U.transpose() * A * V).trace();
}

}  // namespace

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, std::uint64_t index) {
  if (rows < 0 || cols < 0) throw DomainError("gaussian_matrix: negative dimension");
  auto eng = stream_engine(seed, index);
  return gaussian_matrix(rows, cols, eng);
}

double lp_norm(const Eigen::VectorXd& z, double r) {
  if (!(r >= 1.0)) throw DomainError("lp_norm: exponent must be >= 1");
  if (z.size() == 0) return 0.0;
  const double mx = z.cwiseAbs().maxCoeff();
  if (std::isinf(r) || mx == 0.0) return mx;
  if (r == 1.0) return z.cwiseAbs().sum();
  if (r == 2.0) return z.norm();
  return mx * std::pow((z.cwiseAbs() / mx).array().pow(r).sum(), 1.0 / r);
}

double row_constraint(const Eigen::MatrixXd& X, double r) {
  const Eigen::VectorXd norms = X.rowwise().norm();
  if (norms.size() == 0) return 0.0;
  if (std::isinf(r)) return norms.maxCoeff();
  return norms.array().pow(r).sum();
}

void validate(const ProblemInstance& inst) {
  if (inst.A.rows() < 1 || inst.A.cols() < 1) throw DomainError("matrix must have at least one row and column");
  if (!inst.A.allFinite()) throw DomainError("matrix has non-finite entries");
  NormPair::from_pq(inst.pair.p, inst.pair.q);
}

RelaxationSolution solve_cp(const ProblemInstance& inst, const CpOptions& opts) {
  validate(inst);
  if (opts.restarts < 1 || opts.max_iters < 1) throw DomainError("solve_cp: restarts and max_iters must be positive");
  const Eigen::MatrixXd& A = inst.A;
  const Eigen::Index m = A.rows(), n = A.cols();
  const int d = opts.d > 0 ? opts.d : static_cast<int>(m + n);
  const double p = inst.pair.p, q = inst.pair.q;
  const double p_dual = inst.pair.p_dual();

  RelaxationSolution best;
  best.value = -kInf;
  for (int r = 0; r < opts.restarts; ++r) {
    auto eng = stream_engine(opts.seed, static_cast<std::uint64_t>(r));
    RelaxationSolution cur;
    cur.V = project_scale(gaussian_matrix(n, d, eng), p);
    cur.U = Eigen::MatrixXd::Zero(m, d);
    double prev = -kInf;
    for (int it = 1; it <= opts.max_iters; ++it) {
      cur.U = block_update(A * cur.V, q);
      cur.V = block_update(A.transpose() * cur.U, p_dual);
      const double val = objective(A, cur.U, cur.V);
      cur.iterations = it;
      if (!std::isfinite(val) || !cur.U.allFinite() || !cur.V.allFinite()) {
        std::ostringstream msg;
        msg << "solve_cp: non-finite iterate at restart " << r << ", iteration " << it << ", objective " << val
            << ", U(0,0..) = " << cur.U.row(0) << ", V(0,0..) = " << cur.V.row(0);
        throw NumericalError(msg.str());
      }
      if (val < prev - 1e-12 * std::abs(prev)) cur.monotone = false;
      const double gain = val - prev;
      prev = val;
      cur.value = val;
      if (it > 1 && gain <= opts.tol * std::abs(val)) {
        cur.converged = true;
        break;
      }
    }
    if (cur.value > best.value) best = cur;
    best.monotone = best.monotone && cur.monotone;
  }
  return best;
}

namespace {

double enumerate_signs(const Eigen::MatrixXd& M, double r) {
  // max over s in {+-1}^k of ||M s||_r, first sign fixed by symmetry.
  const Eigen::Index k = M.cols();
  Eigen::VectorXd s = Eigen::VectorXd::Ones(k);
  Eigen::VectorXd w = M * s;
  double best = lp_norm(w, r);
  const std::uint64_t count = std::uint64_t(1) << (k - 1);
  for (std::uint64_t g = 1; g < count; ++g) {
    // Gray code: flip the lowest set bit position of g, offset by one.
    const int bit = __builtin_ctzll(g) + 1;
    s[bit] = -s[bit];
    w += 2.0 * s[bit] * M.col(bit);
    best = std::max(best, lp_norm(w, r));
  }
  return best;
}

double ascend(const Eigen::MatrixXd& A, Eigen::VectorXd x, double p_dual, double q) {
  double prev = -kInf;
  double val = 0.0;
  for (int it = 0; it < 5000; ++it) {
    const Eigen::VectorXd w = A * x;
    val = lp_norm(w, q);
    if (val == 0.0 || val <= prev * (1.0 + 1e-15)) break;
    prev = val;
    const Eigen::VectorXd y = holder_dual(w, q);
    const Eigen::VectorXd z = A.transpose() * y;
    const Eigen::VectorXd xn = holder_dual(z, p_dual);
    const double nx = lp_norm(xn, dual_exponent(p_dual));
    if (nx == 0.0) break;
    x = xn / nx;
  }
  return std::max(val, prev);
}

}  // namespace

double brute_force_norm(const ProblemInstance& inst, const BruteForceOptions& opts) {
  validate(inst);
  const Eigen::MatrixXd& A = inst.A;
  const double p = inst.pair.p, q = inst.pair.q;
  if (std::isinf(p) && A.cols() <= 24) return enumerate_signs(A, q);
  if (q == 1.0 && A.rows() <= 24) return enumerate_signs(A.transpose(), inst.pair.p_dual());

  const double p_dual = inst.pair.p_dual();
  const Eigen::Index n = A.cols();
  double best = 0.0;
  std::vector<Eigen::VectorXd> starts;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  starts.push_back(svd.matrixV().col(0));

  auto eng = stream_engine(opts.seed, 0);
  std::normal_distribution<double> normal;
  auto random_point = [&]() {
    Eigen::VectorXd x(n);
    for (Eigen::Index j = 0; j < n; ++j) x[j] = normal(eng);
    return Eigen::VectorXd(x / lp_norm(x, p));
  };

  if (opts.sampling && n <= 6) {
    std::vector<std::pair<double, Eigen::VectorXd>> top;
    for (long s = 0; s < opts.samples; ++s) {
      Eigen::VectorXd x = random_point();
      const double v = lp_norm(A * x, q);
      best = std::max(best, v);
      if (top.size() < 16 || v > top.back().first) {
        top.emplace_back(v, x);
        std::sort(top.begin(), top.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
        if (top.size() > 16) top.pop_back();
      }
    }
    for (auto& t : top) starts.push_back(t.second);
  }
  for (int r = 0; r < opts.restarts; ++r) starts.push_back(random_point());
  for (const auto& x : starts) {
    const double nx = lp_norm(x, p);
    if (nx > 0.0) best = std::max(best, ascend(A, x / nx, p_dual, q));
  }
  return best;
}

}  // namespace pqnorm
