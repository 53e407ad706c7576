#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ergo {

enum class VerdictState { converged, diverging, inconclusive };
enum class Growth { none, geometric, power, logarithmic, iterated_log };

const char* to_string(VerdictState s);
const char* to_string(Growth g);

struct VerdictRule {
  double tol_conv = 1e-6;  // relative increment per window
  double tol_div = 1e-4;   // absolute increment per window
  int div_windows = 3;
  // Tail test for sequences that settle too slowly for tol_conv: windows
  // whose increments shrink by ratio <= ratio_max and whose local power
  // ln(d_j/d_{j+1}) / ln(k_{j+1}/k_j) is at least power_min.
  bool tail_rule = true;
  double ratio_max = 0.9;
  double power_min = 2.0;
  // Increments that shrink only like k^-p with p <= this are a divergent
  // tail in the position variable (k = log2 N gives iterated-log growth).
  double slow_power_max = 1.25;
};

struct VerdictEvidence {
  std::vector<double> increments;
  std::vector<double> ratios;
  std::vector<double> powers;
  double last_relative_increment = 0.0;
};

struct BoundednessVerdict {
  VerdictState state = VerdictState::inconclusive;
  double limit = 0.0;  // meaningful when converged
  Growth growth = Growth::none;
  std::string reason;
  VerdictEvidence evidence;

  bool converged() const { return state == VerdictState::converged; }
  bool diverging() const { return state == VerdictState::diverging; }
};

/// Decide boundedness of a nondecreasing sequence. `positions` are the
/// window coordinates (log2 N for doubling schedules); when absent the
/// index + 1 is used. Throws std::invalid_argument below three values.
BoundednessVerdict boundedness_verdict(const std::vector<double>& seq, const VerdictRule& rule = {},
                                       const std::vector<double>& positions = {});

/// Wynn epsilon extrapolation of a sequence; nullopt when unstable.
std::optional<double> wynn_epsilon(const std::vector<double>& seq);

/// Verdict for an unbounded (infinite) value observed directly.
BoundednessVerdict infinite_verdict(std::string reason);

}  // namespace ergo
