#include "ergo/single_birth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergo/min_solver.hpp"

namespace ergo {

namespace {

constexpr long double kHuge = 1e4000L;

std::vector<double> at(const std::vector<long double>& v, const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  for (auto k : idx) out.push_back(static_cast<double>(v[k]));
  return out;
}

std::vector<double> log2_positions(const std::vector<std::size_t>& idx) {
  std::vector<double> out;
  for (auto k : idx) out.push_back(std::log2(static_cast<double>(k)));
  return out;
}

BoundednessVerdict too_short(const std::string& what) {
  BoundednessVerdict v;
  v.reason = what;
  return v;
}

}  // namespace

Row SingleBirthSpec::row(StateIndex n) const {
  Row r = below(n);
  r.push_back({n + 1, up(n)});
  return r;
}

std::vector<std::size_t> SingleBirthTableau::checkpoints() const {
  std::vector<std::size_t> out;
  if (rows_valid < 2) return out;
  const std::size_t last = rows_valid - 1;
  const int first = last >= 64 ? 4 : 1;
  for (int j = first; (std::size_t{1} << j) <= last; ++j) out.push_back(std::size_t{1} << j);
  return out;
}

SingleBirthTableau build_tableau(const SingleBirthSpec& spec, std::size_t K, const TableauOptions& opt) {
  if (K < 1) throw ModelError("tableau depth must be >= 1");
  SingleBirthTableau t;
  t.K = K;
  t.F0.assign(K + 1, 0.0L);
  t.d.assign(K + 1, 0.0L);
  t.S.assign(K + 1, 0.0L);
  t.D.assign(K + 1, 0.0L);
  t.d_sup.assign(K + 1, 0.0);
  t.F0[0] = 1.0L;
  t.S[0] = 1.0L;
  t.rows_valid = 1;
  t.inf_down_to_zero = std::numeric_limits<double>::infinity();

  // [j, n) sums of a prefix-summed array; short ranges are summed directly
  auto range = [&](const std::vector<long double>& val, const std::vector<long double>& pre,
                   std::size_t j, std::size_t n) -> long double {
    if (n - j <= opt.direct_window) {
      long double s = 0.0L;
      for (std::size_t k = j; k < n; ++k) s += val[k];
      return s;
    }
    return pre[n - 1] - (j ? pre[j - 1] : 0.0L);
  };

  std::vector<double> ups{spec.up(0)};
  if (!(ups[0] > 0.0)) throw ModelError("q_{0,1} must be positive");
  std::vector<std::vector<double>> colsum;  // colsum[n][i] = sum_{k=i}^{n} F[k][i]
  double work = 0.0;
  bool full = opt.full_rows > 0;
  if (full) {
    t.F.push_back({1.0});
    colsum.push_back({1.0});
  }

  for (std::size_t n = 1; n <= K; ++n) {
    const double u = spec.up(n);
    if (!(u > 0.0) || !std::isfinite(u)) throw ModelError("q_{n,n+1} must be positive at n=" + std::to_string(n));
    ups.push_back(u);
    const Row low = spec.below(n);
    long double sf = 0.0L, sd = 1.0L, q0 = 0.0L;
    for (const auto& tr : low) {
      if (tr.to >= n) throw ModelError("single birth row jumps up by more than one");
      sf += tr.rate * range(t.F0, t.S, tr.to, n);
      sd += tr.rate * range(t.d, t.D, tr.to, n);
      if (tr.to == 0) q0 += tr.rate;
    }
    t.inf_down_to_zero = std::min(t.inf_down_to_zero, static_cast<double>(q0));
    t.F0[n] = sf / u;
    t.d[n] = sd / u;
    t.S[n] = t.S[n - 1] + t.F0[n];
    t.D[n] = t.D[n - 1] + t.d[n];
    if (!(t.S[n] < kHuge) || !(t.D[n] < kHuge)) {
      t.overflow = true;
      break;
    }
    t.d_sup[n] = std::max(t.d_sup[n - 1], static_cast<double>(t.D[n] / t.S[n]));
    t.rows_valid = n + 1;

    if (full) {
      work += static_cast<double>(n) * static_cast<double>(low.size() + 1);
      if (n > opt.full_rows || work > 2e8) {
        full = false;
        continue;
      }
      std::vector<double> row(n + 1, 0.0), cs(n + 1, 0.0);
      row[n] = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        long double s = 0.0L;
        for (const auto& tr : low) {
          const std::size_t from = std::max<std::size_t>(i, tr.to);
          // sum_{k=from}^{n-1} F[k][i]
          const double hi = colsum[n - 1][i];
          const double lo = from > i ? colsum[from - 1][i] : 0.0;
          s += tr.rate * static_cast<long double>(hi - lo);
        }
        row[i] = static_cast<double>(s / u);
        cs[i] = colsum[n - 1][i] + row[i];
      }
      cs[n] = 1.0;
      long double d2 = 0.0L;
      for (std::size_t k = 1; k <= n; ++k) d2 += row[k] / ups[k];
      const double gap_d = static_cast<double>(std::abs(d2 - t.d[n]) / (std::abs(t.d[n]) + 1e-300L));
      const double gap_f = static_cast<double>(std::abs(row[0] - t.F0[n]) / (std::abs(t.F0[n]) + 1e-300L));
      t.max_dual_gap = std::max({t.max_dual_gap, gap_d, gap_f});
      t.cross_checked_rows = n;
      t.F.push_back(std::move(row));
      colsum.push_back(std::move(cs));
    }
  }
  if (!std::isfinite(t.inf_down_to_zero)) t.inf_down_to_zero = 0.0;
  return t;
}

ErgodicityExplicit ergodicity_explicit(const SingleBirthTableau& t, const VerdictRule& rule) {
  ErgodicityExplicit e;
  if (t.overflow) {
    e.verdict = too_short("tableau overflowed at row " + std::to_string(t.rows_valid));
    e.reason = e.verdict.reason;
    return e;
  }
  const auto idx = t.checkpoints();
  if (idx.size() < 3) {
    e.verdict = too_short("tableau too shallow for three windows");
    e.reason = e.verdict.reason;
    return e;
  }
  std::vector<double> seq;
  for (auto k : idx) seq.push_back(t.d_sup[k]);
  e.verdict = boundedness_verdict(seq, rule, log2_positions(idx));
  e.reason = e.verdict.reason;
  if (e.verdict.converged()) {
    const double last = t.d_sup[t.rows_valid - 1];
    e.d_hat = std::max(e.verdict.limit, last);
    auto w1 = wynn_epsilon(seq);
    std::vector<double> shorter(seq.begin(), seq.end() - 1);
    auto w0 = wynn_epsilon(shorter);
    double tol = (w1 && w0) ? std::abs(*w1 - *w0) : std::abs(seq.back() - seq[seq.size() - 2]);
    e.d_hat_tol = std::max(tol, 8 * std::numeric_limits<double>::epsilon() * std::abs(e.d_hat));
  }
  return e;
}

std::vector<long double> strong_partial_sums(const SingleBirthTableau& t, long double d) {
  std::vector<long double> p(t.rows_valid);
  for (std::size_t k = 0; k < t.rows_valid; ++k) p[k] = d * t.S[k] - t.D[k];
  return p;
}

namespace {

BoundednessVerdict strong_verdict_for(const SingleBirthTableau& t, long double d, const VerdictRule& rule,
                                      std::vector<double>* raw) {
  const auto p = strong_partial_sums(t, d);
  const auto idx = t.checkpoints();
  std::vector<double> sup;
  long double run = -std::numeric_limits<long double>::infinity();
  std::size_t next = 0;
  for (std::size_t k = 0; k < p.size() && next < idx.size(); ++k) {
    run = std::max(run, p[k]);
    if (k == idx[next]) {
      sup.push_back(static_cast<double>(run));
      if (raw) raw->push_back(static_cast<double>(p[k]));
      ++next;
    }
  }
  if (sup.size() < 3) return too_short("tableau too shallow for three windows");
  return boundedness_verdict(sup, rule, log2_positions(idx));
}

}  // namespace

StrongExplicit strong_explicit(const SingleBirthTableau& t, const ErgodicityExplicit& erg,
                               const VerdictRule& rule) {
  if (!erg.verdict.converged())
    throw ModelError("strong ergodicity functional needs a finite d (ergodicity verdict is not Converged)");
  StrongExplicit s;
  s.d_used = erg.d_hat;
  s.verdict = strong_verdict_for(t, erg.d_hat, rule, &s.partial_sums);
  s.verdict_low = strong_verdict_for(t, static_cast<long double>(erg.d_hat) - erg.d_hat_tol, rule, nullptr);
  s.verdict_high = strong_verdict_for(t, static_cast<long double>(erg.d_hat) + erg.d_hat_tol, rule, nullptr);
  s.robust = s.verdict.state == s.verdict_low.state && s.verdict.state == s.verdict_high.state;
  s.recurrent_fast_path = recurrence_explicit(t, rule).diverging() && t.inf_down_to_zero > 0.0;
  return s;
}

BoundednessVerdict recurrence_explicit(const SingleBirthTableau& t, const VerdictRule& rule) {
  if (t.overflow) return infinite_verdict("sum of F_n^(0) overflowed");
  const auto idx = t.checkpoints();
  if (idx.size() < 3) return too_short("tableau too shallow for three windows");
  return boundedness_verdict(at(t.S, idx), rule, log2_positions(idx));
}

BoundednessVerdict catastrophe_recurrence(const std::function<double(std::size_t)>& alpha, std::size_t K,
                                          const VerdictRule& rule) {
  std::vector<std::size_t> idx;
  for (int j = K >= 64 ? 4 : 1; (std::size_t{1} << j) <= K; ++j) idx.push_back(std::size_t{1} << j);
  if (idx.size() < 3) return too_short("K too small for three windows");
  std::vector<double> seq;
  long double s = 0.0L;
  std::size_t next = 0;
  for (std::size_t i = 1; i <= idx.back(); ++i) {
    const double a = alpha(i);
    if (!(a >= 0.0)) throw ModelError("alpha must be nonnegative");
    s += static_cast<long double>(a) / i;
    if (i == idx[next]) {
      seq.push_back(static_cast<double>(s));
      ++next;
    }
  }
  return boundedness_verdict(seq, rule, log2_positions(idx));
}

ClosedFormCheck truncated_closed_form(const SingleBirthSpec& spec, std::size_t N) {
  if (N < 1) throw ModelError("N must be >= 1");
  const auto sys = build_truncated_system(spec, TargetSet{}, N, OrdinarySource{});
  const auto sol = solve_direct(NonnegAffineOperator(sys));
  if (sol.status != SolveStatus::finite) throw ModelError("truncated system did not solve");
  TableauOptions opt;
  opt.full_rows = 0;
  const auto t = build_tableau(spec, N, opt);
  if (t.rows_valid < N) throw ModelError("tableau overflowed before row N");
  ClosedFormCheck c;
  c.direct.assign(sol.x.data(), sol.x.data() + sol.x.size());
  const long double x1 = sol.x[0];
  for (std::size_t k = 1; k <= N; ++k) c.x.push_back(static_cast<double>(x1 * t.S[k - 1] - t.D[k - 1]));
  double scale = 1.0;
  for (double v : c.direct) scale = std::max(scale, 1.0 + std::abs(v));
  for (std::size_t k = 0; k < N; ++k) {
    c.max_relative_gap = std::max(c.max_relative_gap, std::abs(c.x[k] - c.direct[k]) / scale);
    if (!(c.direct[k] > 0.0)) throw ModelError("truncated solution is not positive");
  }
  if (c.max_relative_gap > 1e-9)
    throw ModelError("closed form and direct solve disagree by " + std::to_string(c.max_relative_gap));
  return c;
}

std::vector<double> unbounded_solution_fixture(const SingleBirthSpec& spec, double eps, std::size_t K,
                                               double e1) {
  TableauOptions opt;
  opt.full_rows = 0;
  const auto t = build_tableau(spec, std::max<std::size_t>(K, 64), opt);
  if (recurrence_explicit(t).converged()) throw ModelError("fixture needs a recurrent chain");
  std::vector<double> x;
  const long double x1 = static_cast<long double>(e1) + eps;
  for (std::size_t i = 1; i <= K && i <= t.rows_valid; ++i)
    x.push_back(static_cast<double>(x1 * t.S[i - 1] - t.D[i - 1]));
  return x;
}

}  // namespace ergo
