#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergo/chain_model.hpp"
#include "ergo/moments.hpp"
#include "ergo/verdict.hpp"

namespace ergo {

// non_algebraic(order l) witnesses "not (l+1)-ergodic" with source E_i sigma_H^l.
enum class WitnessKind { non_ergodic, non_strong, non_algebraic, non_exponential };

const char* to_string(WitnessKind k);
WitnessKind parse_witness_kind(const std::string& s);

struct WitnessTerm {
  std::vector<std::pair<StateIndex, double>> support;  // sorted by state
  std::optional<std::size_t> N;  // truncation level of a generated term
  // non_exponential: x_0^(lambda_n, N_n) before any reduction of y on H
  std::optional<double> x0;
};

struct WitnessSequence {
  WitnessKind kind = WitnessKind::non_ergodic;
  int order = 0;  // l for non_algebraic
  std::vector<WitnessTerm> terms;
  std::vector<double> lambdas;  // non_exponential only
  std::string provenance = "user";
};

struct WitnessOptions {
  double tol = 1e-9;  // on (y_i - rhs_i) / (1 + |y_i|)
  VerdictRule rule;
  // extra states scanned past the support (catches violations created by
  // negative entries on in-neighbours)
  std::size_t ring = 64;
};

struct TermCheck {
  double max_violation = 0.0;  // normalized, positive part
  StateIndex worst_state = 0;
  std::size_t checked = 0;
  StateIndex region_hi = 0;  // states 0..region_hi plus the support were checked
  double statistic = 0.0;
};

struct WitnessReport {
  WitnessKind kind = WitnessKind::non_ergodic;
  std::vector<TermCheck> terms;
  std::vector<double> statistic;
  std::string statistic_name;
  BoundednessVerdict divergence;
  double max_violation = 0.0;
  bool inequalities_hold = false;
  bool lambdas_ok = true;
  bool pass = false;
  // non_algebraic: the moment source came from a truncation (a lower bound)
  bool truncated_source = false;
  // why checking the recorded region covers every state
  std::string reduction;
  std::vector<std::string> notes;
};

/// Throws ModelError for structurally invalid input (missing lambdas,
/// lambdas on a discrete chain...).
WitnessReport verify_witness(const GeneratorSpec& spec, const TargetSet& H, const WitnessSequence& w,
                             const WitnessOptions& opt = {});

/// Terms are truncated minimal solutions at the first `count` levels of the
/// schedule, extended by 0.
WitnessSequence gen_nonergodic_witness(const GeneratorSpec& spec, const TargetSet& H, std::size_t count,
                                       const Schedule& schedule);
WitnessSequence gen_nonstrong_witness(const GeneratorSpec& spec, const TargetSet& H, std::size_t count,
                                      const Schedule& schedule);

enum class NonexpStatus { complete, no_witness, budget_exhausted };
const char* to_string(NonexpStatus s);

struct NonexpOptions {
  std::size_t start_level = 16;
  std::size_t max_level = std::size_t(1) << 20;
  int bisect_iters = 60;
  double rel_tol = 1e-6;  // |x_0 - n| <= rel_tol n
  VerdictRule rule;
};

struct NonexpTermInfo {
  std::size_t n = 0;
  std::size_t N = 0;
  double lambda = 0.0;
  double lambda_cap = 0.0;
  double x0 = 0.0;
  double relative_gap = 0.0;  // |x0 - n| / n
  bool contract_met = false;  // gap within tolerance and lambda <= 1/n
  // x_0 stays above n as lambda -> 0, so y on H was lowered to n
  bool reduced = false;
};

struct NonexpResult {
  NonexpStatus status = NonexpStatus::complete;
  WitnessSequence sequence;
  std::vector<NonexpTermInfo> info;
  double lambda_prime = 0.0;
  // when stopped: x_0^(lambda_cap, N) over doubling N at the failing n
  std::vector<double> stop_evidence;
  std::vector<std::size_t> stop_levels;
  BoundednessVerdict stop_verdict;
  std::string reason;
};

NonexpResult gen_nonexp_witness(const GeneratorSpec& spec, const TargetSet& H, std::size_t count,
                                const NonexpOptions& opt = {});

}  // namespace ergo
