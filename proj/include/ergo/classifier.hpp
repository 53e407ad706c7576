#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergo/chain_model.hpp"
#include "ergo/moments.hpp"
#include "ergo/single_birth.hpp"
#include "ergo/verdict.hpp"

namespace ergo {

enum class Holds { yes, no, unknown };
// evidence: finite sweep statistics; explicit: single-birth formulas;
// certificate: a checked inequality; implied: read off another tier
enum class Grade { evidence, explicit_formula, certificate, implied, none };

const char* to_string(Holds h);
const char* to_string(Grade g);

struct Tier {
  std::string name;
  BoundednessVerdict verdict;
  Holds holds = Holds::unknown;
  Grade grade = Grade::none;
  std::string source;
  std::vector<double> sequence;
  std::vector<std::size_t> levels;
  std::string note;
};

/// Outside evidence for one tier (e.g. a level-reduction check). It
/// outranks the sweeps.
struct ExternalCertificate {
  std::string tier;  // tier name as in the ladder
  Holds holds = Holds::unknown;
  std::string source;
  BoundednessVerdict verdict;
  std::string note;
};

struct ClassifyConfig {
  Schedule schedule = Schedule::pow2(4, 17);
  VerdictRule rule;
  bool exponential = true;
  std::vector<double> lambda_grid;  // empty: lambda' 2^-n, n = 0..20
  // the decay-rate veto is expensive on lattice models; levels above this
  // are skipped
  std::size_t decay_max_level = std::size_t(1) << 13;
  std::size_t tableau_rows = std::size_t(1) << 20;
  // user-supplied z for the transience inequality (embedded chain)
  std::optional<std::vector<double>> transience_certificate;
  std::vector<ExternalCertificate> certificates;
};

struct SingleBirthCrossCheck {
  std::size_t K = 0;
  ErgodicityExplicit ergodic;
  std::optional<StrongExplicit> strong;
  BoundednessVerdict recurrence;
  bool ergodic_agrees = false;
  bool strong_agrees = false;  // vacuous (true) when d is not finite
  double max_dual_gap = 0.0;
};

/// Evidence that alpha_i -> 0 for chains shaped like q_{i,i+1} = i+1,
/// q_{i,0} = alpha_i: 1/max(alpha) over a few states at each 2^k.
struct CatastropheTail {
  bool applicable = false;
  std::vector<double> inverse_alpha;
  std::vector<double> positions;
  BoundednessVerdict verdict;
};

CatastropheTail catastrophe_tail(const GeneratorSpec& spec, int k_lo = 4, int k_hi = 40,
                                 const VerdictRule& rule = {});

struct ErgodicityReport {
  std::string model;
  TargetSet H;
  int L = 1;
  Schedule schedule;

  Tier recurrent;
  Tier ergodic;
  std::vector<Tier> algebraic;  // l = 2..L
  Tier exponential;
  Tier strong;

  std::optional<SingleBirthCrossCheck> single_birth;
  std::optional<ExpMomentCurve> exp_curve;
  std::optional<DecaySweep> decay;
  std::optional<CatastropheTail> catastrophe;
  double monotonicity_violation = 0.0;
  std::vector<std::string> consistency_errors;
  std::vector<std::string> notes;

  bool consistent() const { return consistency_errors.empty(); }
  /// Tiers from weakest to strongest claim.
  std::vector<const Tier*> ladder() const;
};

ErgodicityReport classify(const GeneratorSpec& spec, const TargetSet& H, int L, const ClassifyConfig& config = {});

struct TransienceCheck {
  bool certified = false;
  double max_violation = 0.0;  // max_i (sum_j P_ij z_j - z_i)+
  StateIndex worst_row = 0;
  std::size_t checked_rows = 0;
  std::size_t unchecked_rows = 0;  // rows jumping beyond the prefix
  double inf_z = 0.0;
  double z0 = 0.0;
  std::string reason;
};

/// sum_j P_ij z_j <= z_i for i >= 1 on the prefix of length z.size(), and
/// inf z < z_0. P is the embedded kernel for continuous chains.
TransienceCheck transience_certificate_check(const GeneratorSpec& spec, const std::vector<double>& z,
                                             double tol = 1e-12);

}  // namespace ergo
