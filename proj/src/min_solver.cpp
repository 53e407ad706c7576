#include "ergo/min_solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <Eigen/SparseLU>

namespace ergo {

NonnegAffineOperator::NonnegAffineOperator(SparseRowMatrix a, Eigen::VectorXd b)
    : A(std::move(a)), g(std::move(b)) {
  if (A.rows() != A.cols() || A.rows() != g.size())
    throw ModelError("affine operator shape mismatch");
  for (Eigen::Index k = 0; k < A.outerSize(); ++k)
    for (SparseRowMatrix::InnerIterator it(A, k); it; ++it)
      if (!(it.value() >= 0.0)) throw ModelError("affine operator has a negative entry");
  if ((g.array() < 0.0).any() || !g.allFinite()) throw ModelError("source has a negative entry");
}

NonnegAffineOperator NonnegAffineOperator::dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  return NonnegAffineOperator(a.sparseView(), b);
}

double relative_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() == 0) return 0.0;
  return (a - b).lpNorm<Eigen::Infinity>() / (1.0 + b.lpNorm<Eigen::Infinity>());
}

MinimalSolution solve_iterative(const NonnegAffineOperator& op, const IterativeOptions& opt) {
  if (!(opt.tol > 0.0)) throw ModelError("tolerance must be positive");
  MinimalSolution out;
  out.method = SolveMethod::iterative;
  const Eigen::Index n = op.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    out.x = x;
    return out;
  }
  // last increments, newest first; window sums s = d_k + ... + d_{k-w+1}
  // obey s_k = A s_{k-1}, so s_k >= s_{k-1} means they never shrink (w > 1
  // catches periodic classes)
  constexpr std::size_t kWindow = 4;
  std::deque<Eigen::VectorXd> hist;
  for (std::size_t it = 1; it <= opt.max_iter; ++it) {
    Eigen::VectorXd xn = op.apply(x);
    Eigen::VectorXd d = xn - x;
    out.iterations = it;
    const double scale = 1.0 + xn.lpNorm<Eigen::Infinity>();
    // monotone iteration; rounding can only produce tiny dips
    if (d.minCoeff() < -1e-12 * scale) out.note = "non-monotone iterate";
    Eigen::Index k;
    if (xn.maxCoeff(&k) > opt.overflow || !xn.allFinite()) {
      out.status = SolveStatus::infinite;
      out.infinite_component = k;
      out.x = xn;
      out.residual = std::numeric_limits<double>::infinity();
      return out;
    }
    if (d.lpNorm<Eigen::Infinity>() <= opt.tol * scale) {
      out.x = xn;
      out.residual = (op.apply(xn) - xn).lpNorm<Eigen::Infinity>();
      return out;
    }
    hist.push_front(d);
    if (hist.size() > kWindow + 1) hist.pop_back();
    if (it > 2) {
      Eigen::VectorXd cur = Eigen::VectorXd::Zero(n), prev = Eigen::VectorXd::Zero(n);
      for (std::size_t w = 1; w + 1 <= hist.size(); ++w) {
        cur += hist[w - 1];
        prev += hist[w];
        if (cur.maxCoeff() > 0.0 && (cur.array() >= prev.array()).all()) {
          cur.maxCoeff(&k);
          out.status = SolveStatus::infinite;
          out.infinite_component = k;
          out.x = xn;
          out.residual = std::numeric_limits<double>::infinity();
          out.note = "increments do not shrink";
          return out;
        }
      }
    }
    x = std::move(xn);
  }
  out.status = SolveStatus::inconclusive;
  out.x = x;  // still a lower bound on f*
  out.residual = (op.apply(x) - x).lpNorm<Eigen::Infinity>();
  return out;
}

namespace {

MinimalSolution fallback(const NonnegAffineOperator& op, std::string why, double rcond) {
  IterativeOptions opt;
  const double nnz = std::max<double>(1.0, static_cast<double>(op.A.nonZeros()));
  opt.max_iter = static_cast<std::size_t>(std::clamp(2e8 / nnz, 1e4, 2e6));
  MinimalSolution s = solve_iterative(op, opt);
  s.fallback = true;
  s.rcond = rcond;
  s.note = std::move(why);
  return s;
}

}  // namespace

MinimalSolution solve_direct(const NonnegAffineOperator& op) {
  MinimalSolution out;
  out.method = SolveMethod::direct;
  const Eigen::Index n = op.size();
  if (n == 0) {
    out.x = Eigen::VectorXd(0);
    return out;
  }
  Eigen::VectorXd x;
  if (n < 64) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd(op.A);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    out.rcond = lu.rcond();
    if (!(out.rcond > 1e-14)) return fallback(op, "near-singular system", out.rcond);
    x = lu.solve(op.g);
  } else {
    Eigen::SparseMatrix<double> M(n, n);
    M.setIdentity();
    M -= Eigen::SparseMatrix<double>(op.A);
    M.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(M);
    lu.factorize(M);
    if (lu.info() != Eigen::Success) return fallback(op, "sparse factorization failed", 0.0);
    x = lu.solve(op.g);
    if (lu.info() != Eigen::Success) return fallback(op, "sparse solve failed", 0.0);
  }
  const double scale = 1.0 + x.cwiseAbs().maxCoeff();
  if (!x.allFinite()) return fallback(op, "non-finite direct solution", out.rcond);
  const Eigen::VectorXd lin_res = x - op.apply(x);
  if (lin_res.lpNorm<Eigen::Infinity>() > 1e-8 * scale)
    return fallback(op, "inaccurate direct solution", out.rcond);

  Eigen::Index k;
  if (x.minCoeff(&k) < -1e-10 * scale) {
    // the unique solution is not nonnegative, so no nonnegative solution
    // exists and the minimal one has infinite entries
    out.status = SolveStatus::infinite;
    out.infinite_component = k;
    out.x = x;
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  out.x = x.cwiseMax(0.0);
  out.residual = (out.x - op.apply(out.x)).lpNorm<Eigen::Infinity>();
  return out;
}

CertificateReport check_certificate(const NonnegAffineOperator& op, const Eigen::VectorXd& y,
                                    CertificateSense sense, double tol) {
  if (y.size() != op.size()) throw ModelError("certificate has the wrong length");
  if (!y.allFinite()) throw ModelError("certificate must be finite");
  CertificateReport r;
  r.residual = y - op.apply(y);
  const double scale = 1.0 + (y.size() ? y.cwiseAbs().maxCoeff() : 0.0);
  r.max_sub_violation = y.size() ? std::max(0.0, r.residual.maxCoeff()) : 0.0;
  r.max_super_violation = y.size() ? std::max(0.0, -r.residual.minCoeff()) : 0.0;
  r.is_sub = r.max_sub_violation <= tol * scale;
  r.is_super = r.max_super_violation <= tol * scale && (y.array() >= 0.0).all();
  r.holds = sense == CertificateSense::sub ? r.is_sub : r.is_super;
  r.boundedness_assumed = sense == CertificateSense::sub;
  return r;
}

}  // namespace ergo
