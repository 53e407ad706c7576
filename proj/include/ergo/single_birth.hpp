#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ergo/chain_model.hpp"
#include "ergo/verdict.hpp"

namespace ergo {

/// Single birth chain on Z_+: up(n) = q_{n,n+1} > 0 and arbitrary jumps down.
class SingleBirthSpec : public GeneratorSpec {
 public:
  virtual double up(StateIndex n) const = 0;
  /// Downward rates (k, q_nk) with k < n.
  virtual Row below(StateIndex n) const = 0;

  Row row(StateIndex n) const override;
  const SingleBirthSpec* single_birth() const override { return this; }
};

/// Single birth chain from callables.
class FunctionalSingleBirth final : public SingleBirthSpec {
 public:
  FunctionalSingleBirth(std::string id, std::function<double(StateIndex)> up,
                        std::function<Row(StateIndex)> below)
      : id_(std::move(id)), up_(std::move(up)), below_(std::move(below)) {}

  double up(StateIndex n) const override { return up_(n); }
  Row below(StateIndex n) const override { return below_(n); }
  std::string id() const override { return id_; }

 private:
  std::string id_;
  std::function<double(StateIndex)> up_;
  std::function<Row(StateIndex)> below_;
};

struct SingleBirthTableau {
  std::size_t K = 0;  // rows 0..K
  std::vector<long double> F0;  // F_n^(0)
  std::vector<long double> d;   // d_n, d_0 = 0
  std::vector<long double> S;   // sum_{n<=k} F_n^(0)
  std::vector<long double> D;   // sum_{n<=k} d_n
  std::vector<double> d_sup;    // max_{j<=k} D_j / S_j
  bool overflow = false;
  std::size_t rows_valid = 0;   // rows before an overflow
  // full F[n][i] (i <= n) for the first rows, used for the second d_n form
  std::vector<std::vector<double>> F;
  std::size_t cross_checked_rows = 0;
  double max_dual_gap = 0.0;  // relative gap between the two d_n forms
  double inf_down_to_zero = 0.0;  // min_{1<=i<=K} q_{i0}

  bool full() const { return !F.empty(); }
  /// Doubling checkpoints 2^j <= rows_valid-1 used for verdicts.
  std::vector<std::size_t> checkpoints() const;
};

struct TableauOptions {
  std::size_t full_rows = 2048;  // keep the full F triangle up to this row
  std::size_t direct_window = 64;  // sum differences directly when n-j is small
};

SingleBirthTableau build_tableau(const SingleBirthSpec& spec, std::size_t K, const TableauOptions& opt = {});

struct ErgodicityExplicit {
  BoundednessVerdict verdict;
  double d_hat = 0.0;
  double d_hat_tol = 0.0;
  std::string reason;
};

ErgodicityExplicit ergodicity_explicit(const SingleBirthTableau& t, const VerdictRule& rule = {});

struct StrongExplicit {
  BoundednessVerdict verdict;
  double d_used = 0.0;
  BoundednessVerdict verdict_low;   // with d_hat - tol
  BoundednessVerdict verdict_high;  // with d_hat + tol
  bool robust = false;
  std::vector<double> partial_sums;  // sum_{j<=k} (F_j d - d_j) at checkpoints
  // fast path: recurrent and inf_i q_{i0} > 0 on the prefix
  bool recurrent_fast_path = false;
};

/// Throws ModelError unless the ergodicity verdict is Converged.
StrongExplicit strong_explicit(const SingleBirthTableau& t, const ErgodicityExplicit& erg,
                               const VerdictRule& rule = {});
/// Partial sums sum_{j<=k}(F_j^(0) d - d_j) for k = 0..rows_valid-1.
std::vector<long double> strong_partial_sums(const SingleBirthTableau& t, long double d);

BoundednessVerdict recurrence_explicit(const SingleBirthTableau& t, const VerdictRule& rule = {});

/// Partial sums of alpha_i / i, i = 1..K, at doubling checkpoints.
BoundednessVerdict catastrophe_recurrence(const std::function<double(std::size_t)>& alpha, std::size_t K,
                                          const VerdictRule& rule = {});

struct ClosedFormCheck {
  std::vector<double> x;       // x_1..x_N from the recurrence
  std::vector<double> direct;  // x_1..x_N from solve_direct
  double max_relative_gap = 0.0;
};

/// Identity x_k = x_1 S_{k-1} - D_{k-1} on the truncated system
/// with H = {0}. Throws when the two routes differ by more than 1e-9.
ClosedFormCheck truncated_closed_form(const SingleBirthSpec& spec, std::size_t N);

/// Alternative solution x'_i = (e1 + eps) S_{i-1} - D_{i-1}, i = 1..K.
std::vector<double> unbounded_solution_fixture(const SingleBirthSpec& spec, double eps, std::size_t K,
                                               double e1);

}  // namespace ergo
