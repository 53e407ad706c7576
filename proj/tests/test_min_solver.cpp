#include "doctest.h"

#include "ergo/min_solver.hpp"

using namespace ergo;

TEST_CASE("scalar fixed point x = a x + g") {
  Eigen::MatrixXd A(1, 1);
  A << 0.5;
  Eigen::VectorXd g(1);
  g << 1.0;
  const auto op = NonnegAffineOperator::dense(A, g);
  const auto d = solve_direct(op);
  const auto it = solve_iterative(op);
  CHECK(d.status == SolveStatus::finite);
  CHECK(d.x[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(it.x[0] == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("a stochastic loop with positive source has an infinite minimal solution") {
  Eigen::MatrixXd A(2, 2);
  A << 0.0, 1.0, 1.0, 0.0;
  Eigen::VectorXd g(2);
  g << 1.0, 0.0;
  const auto op = NonnegAffineOperator::dense(A, g);
  CHECK(solve_direct(op).status == SolveStatus::infinite);
  CHECK(solve_iterative(op).status == SolveStatus::infinite);
}

TEST_CASE("a zero source gives the zero solution even when I - A is singular") {
  Eigen::MatrixXd A(2, 2);
  A << 0.0, 1.0, 1.0, 0.0;
  const Eigen::VectorXd g = Eigen::VectorXd::Zero(2);
  const auto op = NonnegAffineOperator::dense(A, g);
  const auto it = solve_iterative(op);
  CHECK(it.status == SolveStatus::finite);
  CHECK(it.x.norm() == 0.0);
}

TEST_CASE("3-state chain against a hand solution") {
  // x0 = 0.5 x1 + 1, x1 = 0.5 x0 + 0.5 x2 + 1, x2 = 0.25 x1 + 2
  Eigen::MatrixXd A(3, 3);
  A << 0, 0.5, 0, 0.5, 0, 0.5, 0, 0.25, 0;
  Eigen::VectorXd g(3);
  g << 1, 1, 2;
  const auto op = NonnegAffineOperator::dense(A, g);
  // substituting: x1 = 0.5(0.5x1+1) + 0.5(0.25x1+2) + 1 => x1 (1 - 0.375) = 2.5
  const double x1 = 2.5 / 0.625;
  const auto d = solve_direct(op);
  CHECK(d.x[1] == doctest::Approx(x1).epsilon(1e-13));
  CHECK(d.x[0] == doctest::Approx(0.5 * x1 + 1).epsilon(1e-13));
  CHECK(d.x[2] == doctest::Approx(0.25 * x1 + 2).epsilon(1e-13));
  CHECK(relative_gap(solve_iterative(op).x, d.x) < 1e-10);
}

TEST_CASE("certificates: sub and super solutions") {
  Eigen::MatrixXd A(1, 1);
  A << 0.5;
  Eigen::VectorXd g(1);
  g << 1.0;
  const auto op = NonnegAffineOperator::dense(A, g);
  Eigen::VectorXd lo(1), hi(1), exact(1);
  lo << 1.0;
  hi << 3.0;
  exact << 2.0;
  CHECK(check_certificate(op, lo, CertificateSense::sub).holds);
  CHECK_FALSE(check_certificate(op, lo, CertificateSense::super).holds);
  CHECK(check_certificate(op, hi, CertificateSense::super).holds);
  const auto e = check_certificate(op, exact, CertificateSense::sub);
  CHECK(e.is_sub);
  CHECK(e.is_super);
}

TEST_CASE("relative_gap") {
  Eigen::VectorXd a(2), b(2);
  a << 1, 2;
  b << 1, 2;
  CHECK(relative_gap(a, b) == 0.0);
  a << 1, 3;
  CHECK(relative_gap(a, b) == doctest::Approx(1.0 / 3.0));
}
