#include "pqnorm/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pqnorm/errors.hpp"

namespace pqnorm {

namespace {

Eigen::VectorXd pinv_sqrt(const Eigen::VectorXd& d) {
  return d.unaryExpr([](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0; });
}

double top_singular_value(const Eigen::MatrixXd& B) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

// sigma * sqrt(N_s(s) N_t(t)): the dual value after the best rescaling of (s, t).
struct Scaled {
  double value;
  double sigma;
  Eigen::VectorXd y;  // top left singular vector of the scaled matrix
  Eigen::VectorXd x;  // top right singular vector
};

Scaled scaled_value(const Eigen::MatrixXd& A, const Eigen::VectorXd& s, const Eigen::VectorXd& t, double rs,
                    double rt) {
  const Eigen::MatrixXd B = pinv_sqrt(s).asDiagonal() * A * pinv_sqrt(t).asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma = svd.singularValues()[0];
  return Scaled{sigma * std::sqrt(lp_norm(s, rs) * lp_norm(t, rt)), sigma, svd.matrixU().col(0),
                svd.matrixV().col(0)};
}

// d log ||z||_r / d log z_i on the support of z.
Eigen::VectorXd log_norm_gradient(const Eigen::VectorXd& z, double r) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
  if (std::isinf(r)) {
    const double mx = z.maxCoeff();
    int ties = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) ties += z[i] == mx;
    for (Eigen::Index i = 0; i < z.size(); ++i)
      if (z[i] == mx) g[i] = 1.0 / ties;
    return g;
  }
  const double mx = z.maxCoeff();
  if (mx <= 0.0) return g;
  const Eigen::VectorXd w = (z / mx).array().pow(r).matrix();
  return w / w.sum();
}

// Positive weight on every nonzero row so that the PSD constraint can hold.
Eigen::VectorXd fill_support(Eigen::VectorXd w, const Eigen::VectorXd& row_norms) {
  const double ref = w.maxCoeff() > 0.0 ? w.maxCoeff() : 1.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (row_norms[i] > 0.0 && !(w[i] > 0.0)) w[i] = ref;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (row_norms[i] == 0.0) w[i] = 0.0;
  return w;
}

}  // namespace

double dual_s_exponent(const NormPair& pair) {
  const double half = pair.q_dual() / 2.0;
  return dual_exponent(half);
}

double dual_t_exponent(const NormPair& pair) { return dual_exponent(pair.p / 2.0); }

double dual_objective(const Eigen::VectorXd& s, const Eigen::VectorXd& t, const NormPair& pair) {
  return 0.5 * (lp_norm(s, dual_s_exponent(pair)) + lp_norm(t, dual_t_exponent(pair)));
}

double block_min_eigenvalue(const Eigen::MatrixXd& A, const Eigen::VectorXd& s, const Eigen::VectorXd& t) {
  const Eigen::Index m = A.rows(), n = A.cols();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(m + n, m + n);
  M.topLeftCorner(m, m) = s.asDiagonal();
  M.bottomRightCorner(n, n) = t.asDiagonal();
  M.topRightCorner(m, n) = -A;
  M.bottomLeftCorner(n, m) = -A.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DualSolution solve_dual(const ProblemInstance& inst, const DualOptions& opts) {
  return solve_dual(inst, solve_cp(inst, opts.cp), opts);
}

DualSolution solve_dual(const ProblemInstance& inst, const RelaxationSolution& primal, const DualOptions& opts) {
  validate(inst);
  const Eigen::MatrixXd& A = inst.A;
  const Eigen::Index m = A.rows(), n = A.cols();
  if (m > 200 || n > 200) throw DomainError("solve_dual: dimensions above 200 are not supported");
  if (primal.U.rows() != m || primal.V.rows() != n) throw DomainError("solve_dual: primal solution has wrong shape");
  if (opts.max_iters < 0) throw DomainError("solve_dual: negative iteration count");
  const double rs = dual_s_exponent(inst.pair), rt = dual_t_exponent(inst.pair);

  DualSolution out;
  out.primal_value = primal.value;
  const Eigen::VectorXd rows = A.rowwise().norm(), cols = A.colwise().norm().transpose();
  if (rows.maxCoeff() == 0.0) {
    out.s = Eigen::VectorXd::Zero(m);
    out.t = Eigen::VectorXd::Zero(n);
    out.converged = true;
    return out;
  }

  // Stationarity of the Lagrangian at the primal optimum.
  const Eigen::MatrixXd AV = A * primal.V, AtU = A.transpose() * primal.U;
  Eigen::VectorXd s(m), t(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double nu = primal.U.row(i).norm();
    s[i] = nu > 0.0 ? AV.row(i).norm() / nu : 0.0;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double nv = primal.V.row(j).norm();
    t[j] = nv > 0.0 ? AtU.row(j).norm() / nv : 0.0;
  }
  s = fill_support(s, rows);
  t = fill_support(t, cols);

  // Backtracking descent on log weights of the scale-invariant value.
  Scaled cur = scaled_value(A, s, t, rs, rt);
  for (int it = 1; it <= opts.max_iters; ++it) {
    out.iterations = it;
    const Eigen::VectorXd ws = log_norm_gradient(s, rs), wt = log_norm_gradient(t, rt);
    Eigen::VectorXd gs = 0.5 * (ws - cur.y.cwiseAbs2()), gt = 0.5 * (wt - cur.x.cwiseAbs2());
    for (Eigen::Index i = 0; i < m; ++i)
      if (s[i] == 0.0) gs[i] = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (t[j] == 0.0) gt[j] = 0.0;
    bool accepted = false;
    double eta = 1.0;
    for (int ls = 0; ls < 40; ++ls, eta *= 0.5) {
      const Eigen::VectorXd s2 = (s.array() * (-eta * gs.array()).exp()).matrix();
      const Eigen::VectorXd t2 = (t.array() * (-eta * gt.array()).exp()).matrix();
      const Scaled trial = scaled_value(A, s2, t2, rs, rt);
      if (trial.value < cur.value) {
        const double gain = cur.value - trial.value;
        s = s2;
        t = t2;
        cur = trial;
        accepted = true;
        if (gain <= opts.tol * cur.value) out.converged = true;
        break;
      }
    }
    if (!accepted) out.converged = true;
    if (out.converged) break;
  }

  // Balance so that ||D_s^{-1/2} A D_t^{-1/2}|| = 1 and both outer norms agree.
  const double Ns = lp_norm(s, rs), Nt = lp_norm(t, rt);
  out.s = cur.sigma * std::sqrt(Nt / Ns) * s;
  out.t = cur.sigma * std::sqrt(Ns / Nt) * t;
  out.dual_value = dual_objective(out.s, out.t, inst.pair);
  out.psd_min_eigenvalue = block_min_eigenvalue(A, out.s, out.t);
  return out;
}

FactorizationCertificate build_certificate(const ProblemInstance& inst, const Eigen::VectorXd& s,
                                           const Eigen::VectorXd& t, double psd_tol) {
  validate(inst);
  const Eigen::MatrixXd& A = inst.A;
  if (s.size() != A.rows() || t.size() != A.cols()) throw DomainError("build_certificate: weight sizes do not match");
  if (!s.allFinite() || !t.allFinite() || (s.array() < 0.0).any() || (t.array() < 0.0).any())
    throw DomainError("build_certificate: weights must be finite and nonnegative");

  FactorizationCertificate cert;
  cert.s = s;
  cert.t = t;
  cert.psd_min_eigenvalue = block_min_eigenvalue(A, s, t);
  const double scale = std::max({1.0, s.maxCoeff(), t.maxCoeff()});
  if (cert.psd_min_eigenvalue < -psd_tol * scale)
    throw DomainError("build_certificate: PSD constraint violated, minimum eigenvalue " +
                      std::to_string(cert.psd_min_eigenvalue));

  cert.B = pinv_sqrt(s).asDiagonal() * A * pinv_sqrt(t).asDiagonal();
  cert.spectral_norm_B = top_singular_value(cert.B);
  const Eigen::MatrixXd R = s.cwiseSqrt().asDiagonal() * cert.B * t.cwiseSqrt().asDiagonal();
  cert.reconstruction_error = (R - A).cwiseAbs().maxCoeff();
  cert.dual_value = dual_objective(s, t, inst.pair);
  cert.norm_product =
      std::sqrt(lp_norm(s, dual_s_exponent(inst.pair))) * std::sqrt(lp_norm(t, dual_t_exponent(inst.pair)));
  return cert;
}

}  // namespace pqnorm
