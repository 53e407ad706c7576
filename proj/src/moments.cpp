#include "ergo/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ergo/parallel.hpp"

namespace ergo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MomentTable infinite_table(const TargetSet& H, std::size_t N, int order, SolveStatus st) {
  MomentTable t;
  t.order = order;
  t.N = N;
  t.status = st;
  t.by_state.assign(N + 1, kInf);
  t.h_values.assign(H.members.size(), kInf);
  t.interior_max = kInf;
  return t;
}

MomentTable level_table(const GeneratorSpec& spec, const TargetSet& H, const SweepKind& kind,
                        std::size_t N) {
  if (std::holds_alternative<OrdinaryKind>(kind))
    return table_from_system(build_truncated_system(spec, H, N, OrdinarySource{}), 1);
  if (auto* l = std::get_if<LadderKind>(&kind)) return moment_ladder(spec, H, l->order, N).back();
  const auto& e = std::get<ExponentialKind>(kind);
  return table_from_system(build_truncated_system(spec, H, N, ExponentialSource{e.lambda}), 1);
}

SweepLevel to_level(const MomentTable& t) {
  SweepLevel l;
  l.N = t.N;
  l.h_values = t.h_values;
  l.h_max = t.h_max();
  l.interior_max = t.interior_max;
  l.status = t.status;
  return l;
}

double drop(double earlier, double later) {
  if (std::isinf(earlier)) return std::isinf(later) ? 0.0 : 1.0;
  if (std::isinf(later)) return 0.0;
  return std::max(0.0, (earlier - later) / (1.0 + std::abs(later)));
}

MomentSweep assemble(const SweepKind& kind, const Schedule& schedule,
                     std::vector<std::optional<SweepLevel>>& slots, std::vector<std::string>& errors) {
  MomentSweep s;
  s.kind = kind;
  s.schedule = schedule;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (!slots[k]) {
      s.aborted = true;
      s.error = "level N=" + std::to_string(schedule.levels[k]) + ": " + errors[k];
      break;
    }
    s.levels.push_back(std::move(*slots[k]));
  }
  for (std::size_t k = 1; k < s.levels.size(); ++k) {
    const auto& a = s.levels[k - 1];
    const auto& b = s.levels[k];
    for (std::size_t h = 0; h < a.h_values.size(); ++h)
      s.monotonicity_violation = std::max(s.monotonicity_violation, drop(a.h_values[h], b.h_values[h]));
    s.monotonicity_violation = std::max(s.monotonicity_violation, drop(a.interior_max, b.interior_max));
  }
  return s;
}

}  // namespace

double MomentTable::h_max() const {
  double m = 0.0;
  for (double v : h_values) m = std::max(m, v);
  return m;
}

MomentTable unit_table(const TargetSet& H, std::size_t N) {
  MomentTable t;
  t.order = 0;
  t.N = N;
  t.by_state.assign(N + 1, 1.0);
  t.h_values.assign(H.members.size(), 1.0);
  t.interior_max = N + 1 > H.members.size() ? 1.0 : 0.0;
  return t;
}

MomentTable table_from_system(const TruncatedSystem& sys, int order) {
  MinimalSolution sol = solve_direct(NonnegAffineOperator(sys));
  if (sol.status == SolveStatus::infinite) return infinite_table(sys.H, sys.N, order, sol.status);
  MomentTable t;
  t.order = order;
  t.N = sys.N;
  t.status = sol.status;
  t.by_state.assign(sys.N + 1, 0.0);
  for (std::size_t k = 0; k < sys.unknowns.size(); ++k) t.by_state[sys.unknowns[k]] = sol.x[k];
  Eigen::VectorXd hv = sys.h_rows * sol.x + sys.h_const;
  t.h_values.assign(hv.data(), hv.data() + hv.size());
  for (std::size_t k = 0; k < sys.H.members.size(); ++k) t.by_state[sys.H.members[k]] = t.h_values[k];
  t.interior_max = sol.x.size() ? sol.x.maxCoeff() : 0.0;
  return t;
}

std::vector<MomentTable> moment_ladder(const GeneratorSpec& spec, const TargetSet& H, int L,
                                       std::size_t N) {
  if (L < 1) throw ModelError("ladder depth must be >= 1");
  std::vector<MomentTable> out;
  MomentTable prev = unit_table(H, N);
  for (int ell = 1; ell <= L; ++ell) {
    if (prev.status == SolveStatus::infinite) {
      out.push_back(infinite_table(H, N, ell, SolveStatus::infinite));
      continue;
    }
    auto sys = build_truncated_system(spec, H, N, LadderSource{ell, prev.by_state});
    out.push_back(table_from_system(sys, ell));
    prev = out.back();
  }
  return out;
}

std::string describe(const SweepKind& k) {
  if (std::holds_alternative<OrdinaryKind>(k)) return "ordinary";
  if (auto* l = std::get_if<LadderKind>(&k)) return "ladder(" + std::to_string(l->order) + ")";
  std::ostringstream os;
  os << "exponential(" << std::get<ExponentialKind>(k).lambda << ")";
  return os.str();
}

Schedule Schedule::pow2(int lo, int hi) {
  if (lo < 0 || hi < lo || hi > 40) throw ModelError("invalid pow2 schedule");
  Schedule s;
  for (int k = lo; k <= hi; ++k) {
    s.levels.push_back(std::size_t{1} << k);
    s.positions.push_back(k);
  }
  return s;
}

Schedule Schedule::parse(const std::string& text) {
  if (text.rfind("pow2:", 0) == 0) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw ModelError("schedule must look like pow2:a..b");
    return pow2(std::stoi(text.substr(5, dots - 5)), std::stoi(text.substr(dots + 2)));
  }
  Schedule s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto n = std::stoull(item);
    if (n == 0 || (!s.levels.empty() && n <= s.levels.back()))
      throw ModelError("schedule levels must be positive and increasing");
    s.levels.push_back(n);
    s.positions.push_back(std::log2(static_cast<double>(n)));
  }
  if (s.levels.empty()) throw ModelError("empty schedule");
  return s;
}

Schedule Schedule::clipped(std::optional<std::size_t> state_count) const {
  if (!state_count) return *this;
  Schedule s = *this;
  // a finite chain is fully contained once N reaches the last state
  for (auto& n : s.levels) n = std::min(n, *state_count - 1);
  return s;
}

std::vector<double> MomentSweep::h_max_sequence() const {
  std::vector<double> v;
  for (const auto& l : levels) v.push_back(l.h_max);
  return v;
}

std::vector<double> MomentSweep::interior_max_sequence() const {
  std::vector<double> v;
  for (const auto& l : levels) v.push_back(l.interior_max);
  return v;
}

std::vector<double> MomentSweep::positions() const {
  return {schedule.positions.begin(), schedule.positions.begin() + levels.size()};
}

bool MomentSweep::any_infinite() const {
  return std::any_of(levels.begin(), levels.end(),
                     [](const SweepLevel& l) { return l.status == SolveStatus::infinite; });
}

MomentSweep truncation_sweep(const GeneratorSpec& spec, const TargetSet& H, const SweepKind& kind,
                             const Schedule& schedule) {
  if (schedule.levels.empty()) throw ModelError("empty schedule");
  const Schedule sched = schedule.clipped(spec.state_count());
  std::vector<std::optional<SweepLevel>> slots(sched.levels.size());
  std::vector<std::string> errors(sched.levels.size());
  parallel_for(sched.levels.size(), [&](std::size_t k) {
    try {
      slots[k] = to_level(level_table(spec, H, kind, sched.levels[k]));
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });
  return assemble(kind, sched, slots, errors);
}

namespace {

BoundednessVerdict seq_verdict(const MomentSweep& s, const std::vector<double>& seq,
                               const VerdictRule& rule) {
  if (s.any_infinite()) return infinite_verdict("a truncated minimal solution is infinite");
  if (seq.size() < 3) {
    BoundednessVerdict v;
    v.reason = "fewer than three completed levels";
    if (!seq.empty()) v.limit = seq.back();
    return v;
  }
  return boundedness_verdict(seq, rule, s.positions());
}

}  // namespace

BoundednessVerdict h_verdict(const MomentSweep& s, const VerdictRule& rule) {
  return seq_verdict(s, s.h_max_sequence(), rule);
}

BoundednessVerdict interior_verdict(const MomentSweep& s, const VerdictRule& rule) {
  return seq_verdict(s, s.interior_max_sequence(), rule);
}

InfRate inf_total_rate(const GeneratorSpec& spec, std::size_t N) {
  InfRate r;
  if (auto n = spec.state_count()) {
    r.value = min_total_rate(spec, *n - 1);
    r.certified = true;
    return r;
  }
  double lo = kInf, hi = kInf;
  for (std::size_t i = 0; i <= N; ++i) {
    double& half = 2 * i <= N ? lo : hi;
    half = std::min(half, spec.total_rate(i));
  }
  r.value = std::min(lo, hi);
  // rates still falling at the end of the prefix say nothing about the tail
  r.certified = hi >= lo;
  return r;
}

std::vector<double> default_lambda_grid(double lambda_prime, int count) {
  std::vector<double> g;
  for (int n = 0; n < count; ++n) g.push_back(std::ldexp(lambda_prime, -n));
  return g;
}

ExpMomentCurve exp_moment_scan(const GeneratorSpec& spec, const TargetSet& H,
                               const std::vector<double>& grid, const Schedule& schedule,
                               const VerdictRule& rule) {
  if (spec.kind() != ChainKind::continuous)
    throw ModelError("exponential moments are defined for continuous chains only");
  if (schedule.levels.empty()) throw ModelError("empty schedule");
  const Schedule sched = schedule.clipped(spec.state_count());
  ExpMomentCurve c;
  const InfRate ir = inf_total_rate(spec, sched.levels.back());
  c.inf_q = ir.value;
  c.inf_q_certified = ir.certified;
  c.lambda_prime = 0.5 * ir.value;
  if (!(c.lambda_prime > 0.0)) throw ModelError("inf q_i must be positive");
  for (double l : grid)
    if (!(l > 0.0) || l > c.lambda_prime * (1 + 1e-12))
      throw ModelError("lambda outside (0, lambda']");

  const std::size_t nl = grid.size(), nn = sched.levels.size();
  std::vector<std::optional<SweepLevel>> slots(nl * nn);
  std::vector<std::string> errors(nl * nn);
  std::vector<double> ordinary(nn, 0.0);
  parallel_for(nl * nn + nn, [&](std::size_t k) {
    try {
      if (k >= nl * nn) {
        const std::size_t j = k - nl * nn;
        ordinary[j] = level_table(spec, H, OrdinaryKind{}, sched.levels[j]).h_values.front();
        return;
      }
      slots[k] = to_level(level_table(spec, H, ExponentialKind{grid[k / nn]}, sched.levels[k % nn]));
    } catch (const std::exception& e) {
      if (k < nl * nn) errors[k] = e.what();
    }
  });

  for (std::size_t a = 0; a < nl; ++a) {
    std::vector<std::optional<SweepLevel>> row(slots.begin() + a * nn, slots.begin() + (a + 1) * nn);
    std::vector<std::string> err(errors.begin() + a * nn, errors.begin() + (a + 1) * nn);
    ExpPoint p;
    p.lambda = grid[a];
    p.sweep = assemble(ExponentialKind{grid[a]}, sched, row, err);
    p.verdict = h_verdict(p.sweep, rule);
    c.points.push_back(std::move(p));
  }

  // lambda-monotonicity at each level
  std::vector<std::size_t> order(nl);
  for (std::size_t a = 0; a < nl; ++a) order[a] = a;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return grid[x] < grid[y]; });
  for (std::size_t j = 0; j < nn; ++j) {
    double last = 0.0;
    for (auto a : order) {
      const auto& lv = c.points[a].sweep.levels;
      if (j >= lv.size()) continue;
      const double v = lv[j].h_values.front();
      if (v < last * (1 - 1e-12) - 1e-12) c.lambda_monotone = false;
      last = std::max(last, v);
    }
  }

  if (!order.empty()) {
    const auto& smallest = c.points[order.front()];
    for (std::size_t j = 0; j < smallest.sweep.levels.size(); ++j) {
      LambdaZeroCheck z;
      z.N = sched.levels[j];
      z.lambda = smallest.lambda;
      z.x0_lambda = smallest.sweep.levels[j].h_values.front();
      z.x0_ordinary = ordinary[j];
      // x^(lambda,N) dominates x^(N) and tends to it as lambda -> 0
      z.consistent = std::isfinite(z.x0_lambda) && z.x0_lambda >= z.x0_ordinary * (1 - 1e-9) - 1e-12;
      c.lambda0_checks.push_back(z);
    }
  }
  return c;
}

}  // namespace ergo

#include <Eigen/SparseLU>

namespace ergo {

namespace {

// M = diag(q) - Q restricted to the unknowns. M - lambda I is a nonsingular
// M-matrix iff lambda is below the decay rate, iff (M - lambda I) x = 1 has
// a positive solution.
bool below_decay(const SparseRowMatrix& M, double lambda) {
  using Col = Eigen::SparseMatrix<double>;
  Col S = Col(M);
  for (Eigen::Index k = 0; k < S.rows(); ++k) S.coeffRef(k, k) -= lambda;
  Eigen::SparseLU<Col, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(S);
  if (lu.info() != Eigen::Success) return false;
  Eigen::VectorXd x = lu.solve(Eigen::VectorXd::Ones(S.rows()));
  if (lu.info() != Eigen::Success || !x.allFinite()) return false;
  return x.minCoeff() > 0.0;
}

}  // namespace

DecayRate decay_rate(const GeneratorSpec& spec, const TargetSet& H, std::size_t N, double rel_tol) {
  if (spec.kind() != ChainKind::continuous) throw ModelError("decay rates are defined for continuous chains only");
  const TruncatedSystem sys = build_truncated_system(spec, H, N, OrdinarySource{});
  DecayRate d;
  d.N = N;
  const auto n = static_cast<Eigen::Index>(sys.size());
  if (n == 0) {
    d.lambda_star = kInf;
    d.capped = true;
    return d;
  }
  // A = Pi restricted, g = 1/q, so M = diag(q) (I - A) = diag(1/g) (I - A)
  std::vector<Eigen::Triplet<double>> trip;
  double hi = kInf;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double q = 1.0 / sys.g[k];
    hi = std::min(hi, q);
    trip.emplace_back(int(k), int(k), q);
    for (SparseRowMatrix::InnerIterator it(sys.A, k); it; ++it)
      trip.emplace_back(int(k), int(it.col()), -q * it.value());
  }
  SparseRowMatrix M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  if (below_decay(M, hi * (1 - 1e-12))) {
    d.lambda_star = hi;
    d.capped = true;
    return d;
  }
  double lo = 0.0;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (below_decay(M, mid) ? lo : hi) = mid;
  }
  d.lambda_star = lo;
  return d;
}

std::vector<double> DecaySweep::inverse_sequence() const {
  std::vector<double> v;
  for (const auto& l : levels) v.push_back(l.lambda_star > 0.0 ? 1.0 / l.lambda_star : kInf);
  return v;
}

DecaySweep decay_sweep(const GeneratorSpec& spec, const TargetSet& H, const Schedule& schedule) {
  if (schedule.levels.empty()) throw ModelError("empty schedule");
  DecaySweep s;
  s.schedule = schedule.clipped(spec.state_count());
  s.levels.resize(s.schedule.levels.size());
  parallel_for(s.levels.size(), [&](std::size_t k) { s.levels[k] = decay_rate(spec, H, s.schedule.levels[k]); });
  for (std::size_t k = 1; k < s.levels.size(); ++k)
    if (s.levels[k].lambda_star > s.levels[k - 1].lambda_star * (1 + 1e-8)) s.monotone = false;
  return s;
}

BoundednessVerdict decay_verdict(const DecaySweep& s, const VerdictRule& rule) {
  const auto seq = s.inverse_sequence();
  if (seq.size() < 3) {
    BoundednessVerdict v;
    v.reason = "fewer than three levels";
    return v;
  }
  if (std::isinf(seq.back())) return infinite_verdict("decay rate vanished");
  // bisection noise can make 1/lambda* wobble at the 1e-10 level; enforce
  // monotonicity so the rule sees a nondecreasing sequence
  auto mono = seq;
  for (std::size_t k = 1; k < mono.size(); ++k) mono[k] = std::max(mono[k], mono[k - 1]);
  return boundedness_verdict(mono, rule, s.schedule.positions);
}

}  // namespace ergo
