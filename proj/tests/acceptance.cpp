// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "ergo/classifier.hpp"
#include "ergo/level_checks.hpp"
#include "ergo/min_solver.hpp"
#include "ergo/moments.hpp"
#include "ergo/simulator.hpp"
#include "ergo/single_birth.hpp"
#include "ergo/witness.hpp"
#include "ergo/zoo.hpp"

using namespace ergo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

CatastropheParams cat(CatastropheFamily f, double gamma = 1.0) {
  CatastropheParams p;
  p.family = f;
  p.gamma = gamma;
  return p;
}

// 1. birth-death gamma sweep
void gamma_sweep(Outcome& o) {
  for (double g : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    const auto t0 = Clock::now();
    ClassifyConfig cfg;
    cfg.schedule = Schedule::pow2(4, 15);
    const auto r = classify(*birth_death_gamma(g).spec, TargetSet{}, 2, cfg);
    const double secs = seconds_since(t0);
    std::ostringstream tag;
    tag << "gamma=" << g;
    if (g <= 1.0) {
      o.require(r.ergodic.verdict.diverging(), tag.str() + " ergodic Diverging");
    } else if (g <= 2.0) {
      o.require(r.ergodic.verdict.converged(), tag.str() + " ergodic Converged");
      o.require(r.strong.verdict.diverging(), tag.str() + " strong Diverging");
    } else {
      o.require(r.ergodic.verdict.converged(), tag.str() + " ergodic Converged");
      for (const auto& t : r.algebraic) o.require(t.verdict.converged(), tag.str() + " " + t.name + " Converged");
      o.require(r.exponential.verdict.converged(), tag.str() + " exponential Converged");
      o.require(r.strong.verdict.converged(), tag.str() + " strong Converged");
    }
    o.require(secs <= 60.0, tag.str() + " within 60 s");
    o.detail << " " << tag.str() << ":" << to_string(r.ergodic.verdict.state) << "/"
             << to_string(r.strong.verdict.state) << " " << std::round(secs * 10) / 10 << "s";
  }
}

// 2. explicit single-birth route vs sweeps
void explicit_vs_sweep(Outcome& o) {
  int models = 0, disagreements = 0;
  for (const auto& m : zoo_catalog()) {
    if (!m.single_birth) continue;
    ClassifyConfig cfg;
    cfg.exponential = false;
    const auto r = classify(*m.spec, TargetSet{}, 1, cfg);
    ++models;
    if (!r.single_birth || !r.single_birth->ergodic_agrees || !r.single_birth->strong_agrees) {
      ++disagreements;
      o.detail << " disagree:" << m.spec->id();
    }
  }
  o.require(disagreements == 0, "zero disagreements");
  o.detail << " models=" << models << " disagreements=" << disagreements;
}

// 3. catastrophe table
void catastrophe_table(Outcome& o) {
  const std::size_t K = 1 << 20;
  {
    const auto m = catastrophe(cat(CatastropheFamily::power, 1.0));
    const auto t = build_tableau(*m.single_birth, K);
    const bool a = recurrence_explicit(t).converged();
    const bool b = catastrophe_recurrence([](std::size_t i) { return 1.0 / double(i); }, K).converged();
    o.require(a && b, "1/i transient");
    o.detail << " 1/i:" << (a && b ? "transient" : "?");
  }
  {
    const auto m = catastrophe(cat(CatastropheFamily::log_power, 0.5));
    const auto t = build_tableau(*m.single_birth, K);
    const bool erg = ergodicity_explicit(t).verdict.converged();
    NonexpOptions opt;
    const auto w = gen_nonexp_witness(*m.spec, TargetSet{}, 10, opt);
    bool found = w.status == NonexpStatus::complete;
    if (found) found = verify_witness(*m.spec, TargetSet{}, w.sequence).pass;
    o.require(erg, "1/log^0.5 i ergodic");
    o.require(found, "1/log^0.5 i non-exponential witness (10 terms)");
    o.detail << " 1/log^0.5:" << (erg ? "ergodic" : "?") << ",witness=" << to_string(w.status) << "("
             << w.info.size() << " terms)";
  }
  {
    const auto m = catastrophe(cat(CatastropheFamily::log_power, 1.0));
    const auto t = build_tableau(*m.single_birth, K);
    const bool rec = recurrence_explicit(t).diverging();
    const bool nonerg = ergodicity_explicit(t).verdict.diverging();
    o.require(rec && nonerg, "1/log i null recurrent");
    o.detail << " 1/log:" << (rec && nonerg ? "null_recurrent" : "?");
  }
  for (auto f : {CatastropheFamily::constant, CatastropheFamily::alternating}) {
    const auto m = catastrophe(cat(f));
    const auto t = build_tableau(*m.single_birth, K);
    const auto erg = ergodicity_explicit(t);
    const bool strong = erg.verdict.converged() && strong_explicit(t, erg).verdict.converged();
    o.require(strong, std::string(to_string(f)) + " strongly ergodic");
    o.detail << " " << to_string(f) << ":" << (strong ? "strong" : "?");
  }
}

// 4. two-state closed forms
void two_state_oracles(Outcome& o) {
  const ExplicitGenerator g(2, {{0, 1, 1.0}, {1, 0, 1.0}}, ChainKind::continuous, "two_state");
  auto solve = [&](const SystemSource& src, int order) {
    const auto sys = build_truncated_system(g, TargetSet{}, 1, src);
    const auto sol = solve_direct(NonnegAffineOperator(sys));
    const double x1 = sol.x[0];
    const double h = sys.h_const[0] + (sys.h_rows * sol.x)[0];
    (void)order;
    return std::pair{x1, h};
  };
  const auto [e1, e0] = solve(OrdinarySource{}, 1);
  const auto tabs = moment_ladder(g, TargetSet{}, 2, 1);
  const double e0sq = tabs[1].h_values[0];
  const auto [z1, z0] = solve(ExponentialSource{0.5}, 1);
  (void)z1;
  o.require(std::abs(e1 - 1.0) <= 1e-12, "E_1 sigma_0 = 1");
  o.require(std::abs(e0 - 2.0) <= 1e-12, "E_0 sigma_0 = 2");
  o.require(std::abs(e0sq - 6.0) <= 1e-12, "E_0 sigma_0^2 = 6");
  o.require(std::abs(z0 - 6.0) <= 1e-12, "exponential functional = 6");
  o.detail << " errors: " << std::abs(e1 - 1) << " " << std::abs(e0 - 2) << " " << std::abs(e0sq - 6) << " "
           << std::abs(z0 - 6);
}

// 5. constant catastrophe closed forms
void constant_catastrophe(Outcome& o) {
  const auto m = catastrophe(cat(CatastropheFamily::constant));
  const auto t = build_tableau(*m.single_birth, 1000000);
  double worst = 0.0;
  for (std::size_t n = 1; n < t.rows_valid; ++n)
    worst = std::max({worst, std::abs(double(t.F0[n]) - 0.5), std::abs(double(t.d[n]) - 0.5)});
  const double dsup = t.d_sup[t.rows_valid - 1];
  const auto cf = truncated_closed_form(*m.single_birth, 2);
  const auto erg = ergodicity_explicit(t);
  const auto st = strong_explicit(t, erg);
  double ps = 0.0;
  for (double v : st.partial_sums) ps = std::max(ps, std::abs(v - 1.0));
  o.require(t.rows_valid >= 1000000, "tableau reached K = 10^6");
  o.require(worst <= 1e-12, "F_n^(0) = d_n = 1/2");
  o.require(std::abs(dsup - 1.0) <= 2.1e-6, "d_sup within 2.1e-6 of 1");
  o.require(std::abs(cf.x[0] - 0.5) <= 1e-12 && std::abs(cf.x[1] - 0.25) <= 1e-12, "closed form N=2");
  o.require(ps <= 1e-9, "strong partial sums = 1");
  o.detail << " max|F-1/2|,|d-1/2|=" << worst << " |d_sup-1|=" << std::abs(dsup - 1.0) << " partial sums err=" << ps;
}

// 6. componentwise monotonicity of every sweep
void monotone_sweeps(Outcome& o) {
  double worst = 0.0;
  std::size_t sweeps = 0;
  for (const auto& m : zoo_catalog()) {
    const bool lattice = dynamic_cast<const LatticeModel*>(m.spec.get()) != nullptr;
    const auto sch = lattice ? Schedule::pow2(2, 10) : Schedule::pow2(2, 12);
    const double lam = 0.5 * min_total_rate(*m.spec, sch.levels.back());
    // kind 0: first moment, 1: second moment, 2: exponential
    for (int kind = 0; kind < 3; ++kind) {
      std::vector<double> prev;
      for (std::size_t N : sch.levels) {
        MomentTable t;
        if (kind < 2) {
          t = moment_ladder(*m.spec, TargetSet{}, kind + 1, N)[kind];
        } else {
          t = table_from_system(build_truncated_system(*m.spec, TargetSet{}, N, ExponentialSource{lam}), 1);
        }
        if (t.status == SolveStatus::infinite) break;
        for (std::size_t i = 0; i < prev.size(); ++i)
          worst = std::max(worst, (prev[i] - t.by_state[i]) / (1.0 + std::abs(prev[i])));
        prev = t.by_state;
      }
      ++sweeps;
    }
  }
  o.require(worst <= 1e-12, "nondecreasing within 1e-12");
  o.detail << " sweeps=" << sweeps << " worst relative drop=" << std::max(worst, 0.0);
}

// 7. solver equivalence and simulation
void solver_oracles(Outcome& o) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  int sim_ok = 0, sim_runs = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 50)(rng);
    std::uniform_real_distribution<double> rate(0.1, 5.0);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<ExplicitGenerator::Triplet> tr;
    for (std::size_t i = 0; i < n; ++i) {
      tr.push_back({i, (i + 1) % n, rate(rng)});
      for (int k = 0; k < 3; ++k) {
        const auto j = pick(rng);
        if (j != i && j != (i + 1) % n) tr.push_back({i, j, rate(rng)});
      }
    }
    const ExplicitGenerator g(n, tr, ChainKind::continuous, "random");
    const auto sys = build_truncated_system(g, TargetSet{}, n - 1, OrdinarySource{});
    const NonnegAffineOperator op(sys);
    const auto d = solve_direct(op);
    const auto it = solve_iterative(op);
    worst = std::max(worst, relative_gap(it.x, d.x));
    if (trial < 5) {
      const double exact = sys.h_const[0] + (sys.h_rows * d.x)[0];
      const auto rep = estimate_moments(g, TargetSet{}, 0, {1}, {}, 100000, 1000 + trial);
      const auto& e = rep.estimates[0];
      ++sim_runs;
      if (std::abs(e.mean - exact) <= 4.0 * e.se) ++sim_ok;
      o.detail << " sim" << trial << ":" << std::abs(e.mean - exact) / e.se << "SE";
    }
  }
  o.require(worst <= 1e-9, "iterative vs direct within 1e-9");
  o.require(sim_ok == sim_runs, "simulator within 4 SE");
  o.detail << " worst solver gap=" << worst;
}

// 8. witness round trips
void witnesses(Outcome& o) {
  {
    const auto m = birth_death_gamma(2.0);
    const auto w = gen_nonstrong_witness(*m.spec, TargetSet{}, 12, Schedule::pow2(4, 15));
    const auto r = verify_witness(*m.spec, TargetSet{}, w);
    o.require(r.pass && r.max_violation <= 1e-9, "non-strong witness on gamma = 2");
    o.detail << " non_strong:" << (r.pass ? "pass" : "fail") << "(viol " << r.max_violation << ")";
  }
  {
    const auto m = birth_death_gamma(0.5);
    const auto w = gen_nonergodic_witness(*m.spec, TargetSet{}, 12, Schedule::pow2(4, 15));
    const auto r = verify_witness(*m.spec, TargetSet{}, w);
    o.require(r.pass && r.max_violation <= 1e-9, "non-ergodic witness on gamma = 0.5");
    o.detail << " non_ergodic:" << (r.pass ? "pass" : "fail") << "(viol " << r.max_violation << ")";
  }
  {
    const auto m = catastrophe(cat(CatastropheFamily::log_power, 1.0));
    const auto r = gen_nonexp_witness(*m.spec, TargetSet{}, 50);
    std::size_t good = 0;
    for (const auto& t : r.info)
      if (t.lambda <= 1.0 / double(t.n) && std::abs(t.x0 - double(t.n)) <= 1e-6 * double(t.n)) ++good;
    o.require(r.status == NonexpStatus::complete && good == 50, "non-exponential n = 1..50 with |x_0 - n| <= 1e-6 n");
    o.detail << " non_exp(1/log i):" << to_string(r.status) << " terms=" << r.info.size()
             << " meeting contract=" << good;
  }
  {
    const auto m = catastrophe(cat(CatastropheFamily::constant));
    const auto r = gen_nonexp_witness(*m.spec, TargetSet{}, 5);
    o.require(r.status == NonexpStatus::no_witness, "NoWitness on alpha = 1");
    o.detail << " non_exp(alpha=1):" << to_string(r.status);
  }
}

// 9. level-reduction checks
void level_checks(Outcome& o) {
  const std::size_t n_max = 1000, i_max = 10000;
  std::vector<LevelCheckReport> reps;
  reps.push_back(brussel_level_check(1.0, 1.0, BrusselFamily::log_level, n_max, i_max));
  reps.push_back(brussel_level_check(1.0, 1.0, BrusselFamily::increment, n_max, i_max));
  reps.push_back(multi_gamma_level_check(2.0, MultiGammaFamily::power, n_max, i_max));
  reps.push_back(multi_gamma_level_check(2.0, MultiGammaFamily::loglog, n_max, i_max));
  reps.push_back(multi_gamma_level_check(1.0, MultiGammaFamily::harmonic, n_max, i_max));
  for (const auto& r : reps) {
    o.require(r.violations == 0, r.family + " zero violations");
    o.require(r.seconds <= 10.0, r.family + " within 10 s");
    o.detail << " " << r.family << ":" << r.violations << "v/" << std::round(r.seconds * 100) / 100 << "s";
  }
}

// 10. single-birth identity
void closed_form_identity(Outcome& o) {
  double worst = 0.0;
  const std::vector<ZooModel> models{catastrophe(cat(CatastropheFamily::constant)),
                                     catastrophe(cat(CatastropheFamily::log_power, 1.0)), birth_death_gamma(1.5)};
  for (const auto& m : models)
    for (std::size_t N : {8u, 64u, 512u}) {
      try {
        worst = std::max(worst, truncated_closed_form(*m.single_birth, N).max_relative_gap);
      } catch (const ModelError& e) {
        o.require(false, m.spec->id() + " N=" + std::to_string(N) + ": " + e.what());
      }
    }
  o.require(worst <= 1e-9, "within 1e-9");
  o.detail << " worst relative gap=" << worst;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"birth-death gamma sweep", gamma_sweep},
      {"explicit single-birth vs sweep agreement", explicit_vs_sweep},
      {"catastrophe family table", catastrophe_table},
      {"two-state closed forms", two_state_oracles},
      {"constant catastrophe closed forms", constant_catastrophe},
      {"monotone truncation sweeps", monotone_sweeps},
      {"solver and simulator oracles", solver_oracles},
      {"witness round trips", witnesses},
      {"level-reduction checks", level_checks},
      {"single-birth closed-form identity", closed_form_identity},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      criteria[k].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("criterion %zu: %s  %s (%.1fs)%s\n", k + 1, o.ok ? "PASS" : "FAIL", criteria[k].first,
                seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.ok) ++failed;
  }
  std::printf("%d of %zu criteria pass\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
