#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "ergo/chain_model.hpp"

namespace ergo {

// x = A x + g with A >= 0, g >= 0.
struct NonnegAffineOperator {
  SparseRowMatrix A;
  Eigen::VectorXd g;

  NonnegAffineOperator() = default;
  NonnegAffineOperator(SparseRowMatrix a, Eigen::VectorXd b);
  explicit NonnegAffineOperator(const TruncatedSystem& sys) : NonnegAffineOperator(sys.A, sys.g) {}

  static NonnegAffineOperator dense(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);
  Eigen::Index size() const { return g.size(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return A * x + g; }
};

enum class SolveMethod { iterative, direct };
enum class SolveStatus { finite, infinite, inconclusive };

struct MinimalSolution {
  Eigen::VectorXd x;
  SolveMethod method = SolveMethod::direct;
  SolveStatus status = SolveStatus::finite;
  double residual = 0.0;
  std::size_t iterations = 0;
  // component that certifies an infinite minimal solution
  std::optional<Eigen::Index> infinite_component;
  // direct solve fell back to iteration
  bool fallback = false;
  double rcond = -1.0;
  std::string note;
};

struct IterativeOptions {
  double tol = 1e-12;
  std::size_t max_iter = 2'000'000;
  double overflow = 1e100;
};

/// Monotone iteration f <- A f + g from f = 0. Stops on a relative
/// sup-residual below tol. Reports Infinite when a component overflows or
/// when the increment d satisfies A d >= d (increments can never shrink).
MinimalSolution solve_iterative(const NonnegAffineOperator& op, const IterativeOptions& opt = {});

/// Factorizes (I - A). If the unique solution has a clearly negative
/// component, no nonnegative solution exists and the minimal one is infinite.
MinimalSolution solve_direct(const NonnegAffineOperator& op);

enum class CertificateSense { sub, super };

struct CertificateReport {
  Eigen::VectorXd residual;  // y - (A y + g)
  bool is_sub = false;
  bool is_super = false;
  double max_sub_violation = 0.0;    // max(residual)+
  double max_super_violation = 0.0;  // max(-residual)+
  bool holds = false;                // for the requested sense
  // sub-solutions bound f* from below only when bounded; finite vectors
  // are bounded, but the condition is recorded rather than proven
  bool boundedness_assumed = false;
};

CertificateReport check_certificate(const NonnegAffineOperator& op, const Eigen::VectorXd& y,
                                    CertificateSense sense, double tol = 1e-12);

/// Relative sup distance ||a - b|| / (1 + ||b||).
double relative_gap(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace ergo
