#include "ergo/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ergo {

const char* to_string(Holds h) {
  switch (h) {
    case Holds::yes: return "yes";
    case Holds::no: return "no";
    case Holds::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Grade g) {
  switch (g) {
    case Grade::evidence: return "evidence";
    case Grade::explicit_formula: return "explicit";
    case Grade::certificate: return "certificate";
    case Grade::implied: return "implied";
    case Grade::none: return "none";
  }
  return "?";
}

std::vector<const Tier*> ErgodicityReport::ladder() const {
  std::vector<const Tier*> v{&recurrent, &ergodic};
  for (const auto& t : algebraic) v.push_back(&t);
  v.push_back(&exponential);
  v.push_back(&strong);
  return v;
}

namespace {

// Converged statistic => the tier holds.
Holds bounded_holds(const BoundednessVerdict& v) {
  if (v.converged()) return Holds::yes;
  if (v.diverging()) return Holds::no;
  return Holds::unknown;
}

Tier sweep_tier(std::string name, const MomentSweep& s, bool interior, const VerdictRule& rule) {
  Tier t;
  t.name = std::move(name);
  t.verdict = interior ? interior_verdict(s, rule) : h_verdict(s, rule);
  t.holds = bounded_holds(t.verdict);
  t.grade = Grade::evidence;
  t.source = interior ? "sweep:interior_max" : "sweep:h_max";
  t.sequence = interior ? s.interior_max_sequence() : s.h_max_sequence();
  for (const auto& l : s.levels) t.levels.push_back(l.N);
  if (s.aborted) t.note = s.error;
  return t;
}

bool same_state(const BoundednessVerdict& a, const BoundednessVerdict& b) { return a.state == b.state; }

// Certificates outrank sweep evidence. A certified "no" also settles every
// stronger tier and a certified "yes" every weaker one.
void apply_certificates(ErgodicityReport& r, const std::vector<ExternalCertificate>& certs) {
  std::vector<Tier*> lad{&r.recurrent, &r.ergodic};
  for (auto& t : r.algebraic) lad.push_back(&t);
  lad.push_back(&r.exponential);
  lad.push_back(&r.strong);
  for (const auto& c : certs) {
    std::size_t at = lad.size();
    for (std::size_t k = 0; k < lad.size(); ++k)
      if (lad[k]->name == c.tier) at = k;
    if (at == lad.size()) throw ModelError("certificate for unknown tier " + c.tier);
    if (c.holds == Holds::unknown) continue;
    auto settle = [&](Tier& t, Grade g) {
      if (t.holds != Holds::unknown && t.holds != c.holds)
        r.notes.push_back(t.name + ": " + to_string(t.grade) + " verdict overridden by " + c.source);
      t.holds = c.holds;
      t.grade = g;
      t.source = c.source;
      t.note = g == Grade::certificate ? c.note : "implied by the " + c.tier + " certificate";
    };
    lad[at]->verdict = c.verdict;
    settle(*lad[at], Grade::certificate);
    if (c.holds == Holds::no)
      for (std::size_t k = at + 1; k < lad.size(); ++k) settle(*lad[k], Grade::implied);
    else
      for (std::size_t k = 0; k < at; ++k) settle(*lad[k], Grade::implied);
  }
}

}  // namespace

CatastropheTail catastrophe_tail(const GeneratorSpec& spec, int k_lo, int k_hi, const VerdictRule& rule) {
  CatastropheTail c;
  const SingleBirthSpec* sb = spec.single_birth();
  if (!sb) return c;
  auto alpha_at = [&](StateIndex i) -> std::optional<double> {
    if (sb->up(i) != double(i + 1)) return std::nullopt;
    double a = 0.0;
    for (const auto& t : sb->below(i)) {
      if (t.to != 0) return std::nullopt;
      a += t.rate;
    }
    return a;
  };
  for (int k = k_lo; k <= k_hi; ++k) {
    double best = 0.0;
    // a few neighbours catch parity patterns such as the alternating family
    for (StateIndex off = 0; off < 4; ++off) {
      auto a = alpha_at((StateIndex(1) << k) + off);
      if (!a) return CatastropheTail{};
      best = std::max(best, *a);
    }
    c.inverse_alpha.push_back(best > 0.0 ? 1.0 / best : std::numeric_limits<double>::infinity());
    c.positions.push_back(k);
  }
  c.applicable = true;
  if (std::isinf(c.inverse_alpha.back())) {
    c.verdict = infinite_verdict("alpha vanishes on the sampled tail");
    return c;
  }
  // 1/max alpha need not be monotone; feed its running max
  auto mono = c.inverse_alpha;
  for (std::size_t k = 1; k < mono.size(); ++k) mono[k] = std::max(mono[k], mono[k - 1]);
  c.verdict = boundedness_verdict(mono, rule, c.positions);
  return c;
}

ErgodicityReport classify(const GeneratorSpec& spec, const TargetSet& H, int L, const ClassifyConfig& cfg) {
  if (L < 1) throw ModelError("L must be >= 1");
  ErgodicityReport r;
  r.model = spec.id();
  r.H = H;
  r.L = L;
  r.schedule = cfg.schedule.clipped(spec.state_count());
  const auto& rule = cfg.rule;

  const MomentSweep ordinary = truncation_sweep(spec, H, OrdinaryKind{}, r.schedule);
  r.monotonicity_violation = ordinary.monotonicity_violation;
  r.ergodic = sweep_tier("ergodic", ordinary, false, rule);
  r.strong = sweep_tier("strongly_ergodic", ordinary, true, rule);

  for (int l = 2; l <= L; ++l) {
    const MomentSweep s = truncation_sweep(spec, H, LadderKind{l}, r.schedule);
    r.monotonicity_violation = std::max(r.monotonicity_violation, s.monotonicity_violation);
    r.algebraic.push_back(sweep_tier("ergodic_l" + std::to_string(l), s, false, rule));
  }

  // recurrence
  r.recurrent.name = "recurrent";
  if (const SingleBirthSpec* sb = spec.single_birth()) {
    const auto tab = build_tableau(*sb, cfg.tableau_rows);
    SingleBirthCrossCheck x;
    x.K = tab.K;
    x.max_dual_gap = tab.max_dual_gap;
    x.recurrence = recurrence_explicit(tab, rule);
    x.ergodic = ergodicity_explicit(tab, rule);
    x.ergodic_agrees = same_state(x.ergodic.verdict, r.ergodic.verdict);
    x.strong_agrees = true;
    if (x.ergodic.verdict.converged()) {
      x.strong = strong_explicit(tab, x.ergodic, rule);
      x.strong_agrees = same_state(x.strong->verdict, r.strong.verdict);
    }
    r.recurrent.verdict = x.recurrence;
    // sum F_n^(0) = infinity <=> recurrent
    r.recurrent.holds = x.recurrence.diverging()   ? Holds::yes
                        : x.recurrence.converged() ? Holds::no
                                                   : Holds::unknown;
    r.recurrent.grade = Grade::explicit_formula;
    r.recurrent.source = "single_birth:sum_F0";
    for (auto k : tab.checkpoints()) {
      r.recurrent.levels.push_back(k);
      r.recurrent.sequence.push_back(double(tab.S[k]));
    }
    if (!x.ergodic_agrees) r.notes.push_back("explicit d and the sweep disagree on ergodicity");
    if (!x.strong_agrees) r.notes.push_back("explicit strong functional and M_N disagree");
    r.single_birth = std::move(x);
  } else if (cfg.transience_certificate) {
    const auto tc = transience_certificate_check(spec, *cfg.transience_certificate);
    r.recurrent.grade = Grade::certificate;
    r.recurrent.source = "transience_certificate";
    r.recurrent.note = tc.reason;
    if (tc.certified) r.recurrent.holds = Holds::no;
  }
  if (r.recurrent.holds == Holds::unknown && r.ergodic.holds == Holds::yes) {
    r.recurrent.holds = Holds::yes;
    r.recurrent.grade = Grade::implied;
    r.recurrent.source = "ergodic tier";
  }
  if (r.recurrent.source.empty()) {
    r.recurrent.source = "none";
    r.recurrent.note = "no recurrence route for this chain without a certificate";
  }

  // exponential
  r.exponential.name = "exponentially_ergodic";
  r.exponential.grade = Grade::evidence;
  if (!cfg.exponential) {
    r.exponential.note = "skipped";
  } else if (spec.kind() != ChainKind::continuous) {
    r.exponential.note = "exponential moments are only set up for continuous chains";
  } else {
    const InfRate ir = inf_total_rate(spec, r.schedule.levels.back());
    if (!(ir.value > 0.0)) {
      r.exponential.note = "inf q_i is not positive";
    } else {
      const auto grid = cfg.lambda_grid.empty() ? default_lambda_grid(0.5 * ir.value) : cfg.lambda_grid;
      r.exp_curve = exp_moment_scan(spec, H, grid, r.schedule, rule);
      const auto& pts = r.exp_curve->points;
      bool all_div = !pts.empty();
      const ExpPoint* best = nullptr;  // largest converged lambda
      for (const auto& p : pts) {
        all_div = all_div && p.verdict.diverging();
        if (p.verdict.converged() && (!best || p.lambda > best->lambda)) best = &p;
      }
      r.exponential.source = "exp_scan";
      if (all_div) {
        r.exponential.verdict = pts.back().verdict;
        r.exponential.holds = Holds::no;
        r.exponential.note = "diverging at every grid lambda";
      } else if (best) {
        r.exponential.verdict = best->verdict;
        r.exponential.holds = Holds::yes;
        r.exponential.sequence = best->sweep.h_max_sequence();
        for (const auto& l : best->sweep.levels) r.exponential.levels.push_back(l.N);
        std::ostringstream os;
        os << "converged at lambda = " << best->lambda;
        r.exponential.note = os.str();
      } else {
        r.exponential.verdict = pts.empty() ? BoundednessVerdict{} : pts.back().verdict;
        r.exponential.note = "no grid lambda converged";
      }
      if (!ir.certified) r.notes.push_back("inf q_i taken over a prefix with falling rates");

      // vetoes: a vanishing decay rate, or alpha_i -> 0 for catastrophe chains
      Schedule ds;
      for (std::size_t k = 0; k < r.schedule.levels.size(); ++k)
        if (r.schedule.levels[k] <= cfg.decay_max_level) {
          ds.levels.push_back(r.schedule.levels[k]);
          ds.positions.push_back(r.schedule.positions[k]);
        }
      if (ds.levels.size() >= 3) {
        r.decay = decay_sweep(spec, H, ds);
        const auto dv = decay_verdict(*r.decay, rule);
        if (dv.diverging()) {
          r.exponential.verdict = dv;
          r.exponential.holds = Holds::no;
          r.exponential.source = "decay_rate";
          r.exponential.sequence = r.decay->inverse_sequence();
          r.exponential.levels = ds.levels;
          r.exponential.note = "decay rate of the killed truncations tends to 0";
        }
      }
      auto tail = catastrophe_tail(spec, 4, 40, rule);
      if (tail.applicable) {
        if (tail.verdict.diverging() && r.exponential.holds != Holds::no) {
          r.exponential.verdict = tail.verdict;
          r.exponential.holds = Holds::no;
          r.exponential.source = "catastrophe_alpha_tail";
          r.exponential.sequence = tail.inverse_alpha;
          r.exponential.levels.clear();
          r.exponential.note = "alpha_i -> 0 on the sampled tail (non-exponential for this family)";
        }
        r.catastrophe = std::move(tail);
      }
    }
  }
  if (r.exponential.holds == Holds::unknown && r.ergodic.holds == Holds::no) {
    r.exponential.holds = Holds::no;
    r.exponential.grade = Grade::implied;
    r.exponential.note += r.exponential.note.empty() ? "not ergodic" : "; not ergodic";
  }

  apply_certificates(r, cfg.certificates);

  // hierarchy: each tier implies every weaker one
  const auto tiers = r.ladder();
  for (std::size_t hi = 0; hi < tiers.size(); ++hi)
    for (std::size_t lo = 0; lo < hi; ++lo)
      if (tiers[hi]->holds == Holds::yes && tiers[lo]->holds == Holds::no)
        r.consistency_errors.push_back(tiers[hi]->name + " holds but " + tiers[lo]->name + " fails");
  if (r.monotonicity_violation > 1e-12)
    r.consistency_errors.push_back("a truncation sweep decreased");
  if (r.single_birth && (!r.single_birth->ergodic_agrees || !r.single_birth->strong_agrees))
    r.consistency_errors.push_back("explicit single-birth route disagrees with the sweeps");
  return r;
}

TransienceCheck transience_certificate_check(const GeneratorSpec& spec, const std::vector<double>& z, double tol) {
  TransienceCheck c;
  if (z.size() < 2) {
    c.reason = "certificate needs at least two entries";
    return c;
  }
  for (double v : z)
    if (!std::isfinite(v)) {
      c.reason = "certificate must be finite";
      return c;
    }
  const bool discrete = spec.kind() == ChainKind::discrete;
  c.z0 = z[0];
  c.inf_z = *std::min_element(z.begin(), z.end());
  for (StateIndex i = 1; i < z.size(); ++i) {
    const Row r = spec.row(i);
    double q = 0.0;
    for (const auto& t : r) q += t.rate;
    bool inside = true;
    double s = 0.0;
    for (const auto& t : r) {
      if (t.to >= z.size()) {
        inside = false;
        break;
      }
      s += (discrete ? t.rate : t.rate / q) * z[t.to];
    }
    if (!inside) {
      ++c.unchecked_rows;
      continue;
    }
    ++c.checked_rows;
    const double v = s - z[i];
    if (v > c.max_violation) {
      c.max_violation = v;
      c.worst_row = i;
    }
  }
  const double scale = 1.0 + std::abs(c.z0) + std::abs(c.inf_z);
  std::ostringstream os;
  if (c.max_violation > tol * scale) {
    os << "inequality fails at row " << c.worst_row << " by " << c.max_violation;
  } else if (!(c.inf_z < c.z0 - tol * scale)) {
    os << "inf z is not below z_0";
  } else {
    c.certified = true;
    os << "superharmonic on " << c.checked_rows << " rows with inf z < z_0";
    if (c.unchecked_rows) os << "; " << c.unchecked_rows << " boundary rows leave the prefix";
  }
  c.reason = os.str();
  return c;
}

}  // namespace ergo
