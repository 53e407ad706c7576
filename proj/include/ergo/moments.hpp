#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ergo/chain_model.hpp"
#include "ergo/min_solver.hpp"
#include "ergo/verdict.hpp"

namespace ergo {

/// x^(order) over states 0..N. Entries of H hold the return values, the
/// rest hold the truncated minimal solution.
struct MomentTable {
  int order = 0;
  std::size_t N = 0;
  std::vector<double> by_state;
  std::vector<double> h_values;  // in H member order
  SolveStatus status = SolveStatus::finite;
  double interior_max = 0.0;

  double h_max() const;
};

MomentTable unit_table(const TargetSet& H, std::size_t N);

/// Solves a truncated system and fills H values by one application of the
/// H rows. Infinite systems yield a table with status infinite.
MomentTable table_from_system(const TruncatedSystem& sys, int order);

/// Tables for orders 1..L at truncation N. Discrete chains use the
/// discrete source (g = x^(order-1)).
std::vector<MomentTable> moment_ladder(const GeneratorSpec& spec, const TargetSet& H, int L,
                                       std::size_t N);

struct OrdinaryKind {};
struct LadderKind {
  int order = 2;
};
struct ExponentialKind {
  double lambda = 0.0;
};
using SweepKind = std::variant<OrdinaryKind, LadderKind, ExponentialKind>;

std::string describe(const SweepKind& k);

/// Truncation levels, strictly increasing.
struct Schedule {
  std::vector<std::size_t> levels;
  // window coordinates for verdicts (log2 N for doubling schedules)
  std::vector<double> positions;

  static Schedule pow2(int lo, int hi);
  /// "pow2:a..b" or a comma list of levels.
  static Schedule parse(const std::string& text);
  /// Drops levels beyond a finite state space.
  Schedule clipped(std::optional<std::size_t> state_count) const;
};

struct SweepLevel {
  std::size_t N = 0;
  std::vector<double> h_values;
  double h_max = 0.0;
  double interior_max = 0.0;
  SolveStatus status = SolveStatus::finite;
};

struct MomentSweep {
  SweepKind kind;
  Schedule schedule;
  std::vector<SweepLevel> levels;
  // worst relative drop between consecutive levels (0 when monotone)
  double monotonicity_violation = 0.0;
  bool aborted = false;
  std::string error;

  std::vector<double> h_max_sequence() const;
  std::vector<double> interior_max_sequence() const;
  std::vector<double> positions() const;
  bool any_infinite() const;
};

MomentSweep truncation_sweep(const GeneratorSpec& spec, const TargetSet& H, const SweepKind& kind,
                             const Schedule& schedule);

/// Verdicts on the H statistic and on M_N.
BoundednessVerdict h_verdict(const MomentSweep& s, const VerdictRule& rule = {});
BoundednessVerdict interior_verdict(const MomentSweep& s, const VerdictRule& rule = {});

struct ExpPoint {
  double lambda = 0.0;
  MomentSweep sweep;
  BoundednessVerdict verdict;
};

struct LambdaZeroCheck {
  std::size_t N = 0;
  double lambda = 0.0;
  double x0_lambda = 0.0;    // x_0^(lambda,N) at the smallest grid point
  double x0_ordinary = 0.0;  // x_0^(N) of the ordinary system
  bool consistent = false;
};

struct ExpMomentCurve {
  double inf_q = 0.0;
  bool inf_q_certified = false;
  double lambda_prime = 0.0;
  std::vector<ExpPoint> points;
  std::vector<LambdaZeroCheck> lambda0_checks;
  // x_0^(lambda,N) nondecreasing in lambda at every level
  bool lambda_monotone = true;
};

struct InfRate {
  double value = 0.0;
  bool certified = false;
};
InfRate inf_total_rate(const GeneratorSpec& spec, std::size_t N);

/// lambda' 2^-n for n = 0..count-1.
std::vector<double> default_lambda_grid(double lambda_prime, int count = 21);

ExpMomentCurve exp_moment_scan(const GeneratorSpec& spec, const TargetSet& H,
                               const std::vector<double>& grid, const Schedule& schedule,
                               const VerdictRule& rule = {});

}  // namespace ergo

namespace ergo {

/// Decay rate of the chain killed on H and above N: the largest lambda for
/// which the exponential system stays finite. Nonincreasing in N; its
/// limit is positive exactly when e_{iH}(lambda) is finite for some lambda.
struct DecayRate {
  std::size_t N = 0;
  double lambda_star = 0.0;
  // lambda_star reached min q_i over the unknowns (an upper bound on the
  // true value, so the bisection could not close the bracket from above)
  bool capped = false;
};

DecayRate decay_rate(const GeneratorSpec& spec, const TargetSet& H, std::size_t N, double rel_tol = 1e-10);

struct DecaySweep {
  Schedule schedule;
  std::vector<DecayRate> levels;
  bool monotone = true;  // lambda_star nonincreasing in N

  /// 1 / lambda_star per level, the statistic fed to boundedness_verdict.
  std::vector<double> inverse_sequence() const;
};

DecaySweep decay_sweep(const GeneratorSpec& spec, const TargetSet& H, const Schedule& schedule);
BoundednessVerdict decay_verdict(const DecaySweep& s, const VerdictRule& rule = {});

}  // namespace ergo
