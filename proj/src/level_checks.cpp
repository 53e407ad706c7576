#include "ergo/level_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"

namespace ergo {

const char* to_string(BrusselFamily f) {
  return f == BrusselFamily::log_level ? "log_level" : "increment";
}

const char* to_string(MultiGammaFamily f) {
  switch (f) {
    case MultiGammaFamily::power: return "power";
    case MultiGammaFamily::loglog: return "loglog";
    case MultiGammaFamily::harmonic: return "harmonic";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::size_t> doubling_upto(std::size_t n_max) {
  std::vector<std::size_t> v;
  for (std::size_t n = 1; n <= n_max; n *= 2) v.push_back(n);
  return v;
}

struct Tracker {
  LevelCheckReport& r;
  double tol;
  void row(double lhs, double rhs, std::size_t n, std::size_t i, std::size_t l) {
    ++r.rows_checked;
    const double v = (lhs - rhs) / std::max(1.0, std::abs(lhs));
    if (v > tol) ++r.violations;
    if (v > r.max_violation) {
      r.max_violation = v;
      r.worst_n = n;
      r.worst_i = i;
      r.worst_l = l;
    }
  }
};

void finish(LevelCheckReport& r, Clock::time_point t0, const VerdictRule& rule = {}) {
  std::vector<double> pos;
  for (auto n : r.stat_n) pos.push_back(std::log2(double(n)));
  if (r.statistic.size() >= 3) {
    auto mono = r.statistic;
    for (std::size_t k = 1; k < mono.size(); ++k) mono[k] = std::max(mono[k], mono[k - 1]);
    r.divergence = boundedness_verdict(mono, rule, pos);
  } else {
    r.divergence.reason = "fewer than three values of n";
  }
  r.pass = r.violations == 0 && r.divergence.diverging();
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
}

// prefix harmonic numbers H_0..H_m
std::vector<long double> harmonic(std::size_t m) {
  std::vector<long double> h(m + 1, 0.0L);
  for (std::size_t k = 1; k <= m; ++k) h[k] = h[k - 1] + 1.0L / k;
  return h;
}

}  // namespace

double brussel_log_level(double lambda4, std::size_t n, std::size_t i) {
  if (i == 0) return 0.0;
  return std::log(double(std::min(i, n)) + 1.0) / lambda4;
}

double brussel_increment_level(double la, double l4, std::size_t n, std::size_t i) {
  // F_k = sum_{j<=k} d_j
  double s = 0.0;
  for (std::size_t j = 1; j <= std::min(i, n); ++j) s += 1.0 / (l4 * (j + 1.0));
  if (i >= n + 1) s -= 1.0 / (la * (n + 1.0));
  if (i >= n + 2) s -= double(i - n - 1) / la;
  return s;
}

LevelCheckReport brussel_level_check(double la, double l4, const std::function<double(std::size_t, std::size_t)>& f,
                                     std::string name, std::size_t n_max, std::size_t i_max, double tol) {
  const auto t0 = Clock::now();
  LevelCheckReport r;
  r.family = std::move(name);
  r.n_max = n_max;
  r.i_max = i_max;
  Tracker tr{r, tol};
  const auto stat_ns = doubling_upto(n_max);
  std::vector<double> fv(i_max + 2);
  for (std::size_t n = 1; n <= n_max; ++n) {
    fv[0] = 0.0;
    for (std::size_t i = 1; i <= i_max + 1; ++i) fv[i] = f(n, i);
    for (std::size_t i = 1; i <= i_max; ++i) {
      for (std::size_t l : {std::size_t(0), std::size_t(1), i}) {
        const double lhs = (la + l4 * l) * fv[i];
        const double rhs = la * fv[i + 1] + l4 * l * fv[i - 1] + 1.0;
        tr.row(lhs, rhs, n, i, l);
      }
    }
    if (std::find(stat_ns.begin(), stat_ns.end(), n) != stat_ns.end()) {
      r.stat_n.push_back(n);
      r.statistic.push_back(*std::max_element(fv.begin() + 1, fv.end()));
    }
  }
  finish(r, t0);
  return r;
}

LevelCheckReport brussel_level_check(double la, double l4, BrusselFamily family, std::size_t n_max,
                                     std::size_t i_max, double tol) {
  if (!(la > 0.0) || !(l4 > 0.0)) throw ModelError("Brussel rates must be positive");
  if (family == BrusselFamily::log_level)
    return brussel_level_check(
        la, l4, [&](std::size_t n, std::size_t i) { return brussel_log_level(l4, n, i); }, "log_level", n_max,
        i_max, tol);
  // closed form of the increment family through harmonic numbers
  const auto H = harmonic(i_max + 3);
  auto f = [&](std::size_t n, std::size_t i) -> double {
    const std::size_t m = std::min(i, n);
    long double s = (H[m + 1] - 1.0L) / l4;
    if (i >= n + 1) s -= 1.0L / (la * (n + 1.0L));
    if (i >= n + 2) s -= (long double)(i - n - 1) / la;
    return double(s);
  };
  return brussel_level_check(la, l4, f, "increment", n_max, i_max, tol);
}

LevelCheckReport multi_gamma_level_check(double gamma, MultiGammaFamily family, std::size_t n_max,
                                         std::size_t i_max, double tol) {
  const bool harm = family == MultiGammaFamily::harmonic;
  if (harm ? gamma > 1.0 : gamma > 2.0)
    throw ModelError(std::string("the ") + to_string(family) + " family needs gamma <= " + (harm ? "1" : "2"));
  const auto t0 = Clock::now();
  LevelCheckReport r;
  r.family = to_string(family);
  r.n_max = n_max;
  r.i_max = i_max;
  Tracker tr{r, tol};
  const auto stat_ns = doubling_upto(n_max);
  const auto Hn = harmonic(i_max + 2);
  auto cap = [&](std::size_t i) { return harm ? double(i) : double(i) * double(i); };

  std::vector<double> d(i_max + 2);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double c_n = 1.0 / ((n + 9.0) * std::log(n + 9.0));
    long double tail = 0.0L;  // sum_{k=n}^{i-1} 1/k^2
    for (std::size_t i = 1; i <= i_max + 1; ++i) {
      switch (family) {
        case MultiGammaFamily::power:
          d[i] = std::pow(double(i), -(1.0 + 1.0 / double(i <= n ? i : n + 1)));
          break;
        case MultiGammaFamily::loglog:
          if (i <= n) {
            d[i] = 1.0 / ((i + 9.0) * std::log(i + 9.0));
          } else {
            tail += 1.0L / ((long double)(i - 1) * (i - 1));
            d[i] = double(c_n - tail);
          }
          break;
        case MultiGammaFamily::harmonic:
          d[i] = double((long double)n - Hn[i - 1]);
          break;
      }
    }
    if (harm) {
      // y_0 = n + 1 <= y_1 + 1 with y_1 = d_1
      tr.row(n + 1.0, d[1] + 1.0, n, 0, 0);
    }
    for (std::size_t i = 1; i <= i_max; ++i) tr.row(d[i], d[i + 1] + 1.0 / cap(i), n, i, 0);

    if (std::find(stat_ns.begin(), stat_ns.end(), n) == stat_ns.end()) continue;
    r.stat_n.push_back(n);
    double stat = 0.0;
    switch (family) {
      case MultiGammaFamily::power: {
        // sup_k y_k = sum of all d_i (all positive); the tail past i_max is
        // bounded below by its integral
        long double s = 0.0L;
        for (std::size_t i = 1; i <= i_max; ++i) s += d[i];
        const double eps = 1.0 / (n + 1.0);
        s += std::pow(double(i_max) + 1.0, -eps) / eps;
        stat = double(s);
        break;
      }
      case MultiGammaFamily::loglog: {
        // y rises while d > 0; scan past i_max if needed
        long double s = 0.0L, t = 0.0L;
        for (std::size_t i = 1;; ++i) {
          double di;
          if (i <= n) {
            di = 1.0 / ((i + 9.0) * std::log(i + 9.0));
          } else {
            t += 1.0L / ((long double)(i - 1) * (i - 1));
            di = double(c_n - t);
          }
          if (di < 0.0) break;
          s += di;
        }
        stat = double(s);
        break;
      }
      case MultiGammaFamily::harmonic:
        stat = n + 1.0;  // y_0, the H value
        break;
    }
    r.statistic.push_back(stat);
  }
  finish(r, t0);
  return r;
}

LevelCheckReport lattice_level_check(const LatticeModel& model,
                                     const std::function<double(std::size_t, std::size_t)>& f, std::string name,
                                     std::size_t n_max, std::size_t max_level, double tol) {
  const auto t0 = Clock::now();
  LevelCheckReport r;
  r.family = std::move(name);
  r.n_max = n_max;
  r.i_max = max_level;
  Tracker tr{r, tol};
  const StateIndex last = model.last_index_of_level(max_level);
  std::vector<Row> rows(last + 1);
  std::vector<std::size_t> lev(last + 1);
  for (StateIndex x = 1; x <= last; ++x) {
    rows[x] = model.row(x);
    lev[x] = model.level(x);
  }
  for (std::size_t n : doubling_upto(n_max)) {
    double sup = 0.0;
    for (StateIndex x = 1; x <= last; ++x) {
      double q = 0.0, s = 0.0;
      for (const auto& t : rows[x]) {
        q += t.rate;
        if (t.to != 0) s += t.rate * f(n, model.level(t.to));
      }
      const double fx = f(n, lev[x]);
      sup = std::max(sup, fx);
      tr.row(q * fx, s + 1.0, n, lev[x], x);
    }
    r.stat_n.push_back(n);
    r.statistic.push_back(sup);
  }
  finish(r, t0);
  return r;
}

std::vector<ExternalCertificate> level_certificates(const ZooModel& m, std::size_t n_max, std::size_t i_max) {
  std::vector<ExternalCertificate> out;
  const auto p = nlohmann::json::parse(m.params);
  auto add = [&](const LevelCheckReport& r, const char* tier, const char* source) {
    if (!r.pass) return;
    ExternalCertificate c;
    c.tier = tier;
    c.holds = Holds::no;
    c.source = source;
    c.verdict = r.divergence;
    c.note = "reduced inequality holds for i <= " + std::to_string(r.i_max) + ", n <= " + std::to_string(r.n_max) +
             " and the test function diverges in n";
    out.push_back(std::move(c));
  };
  if (m.name == "brussel") {
    const auto lam = p.at("lambda").get<std::vector<double>>();
    double a = 0.0;
    for (double v : p.at("a").get<std::vector<double>>()) a += v;
    add(brussel_level_check(lam[0] * a, lam[3], BrusselFamily::log_level, n_max, i_max), "strongly_ergodic",
        "level_check:brussel_log_level");
  } else if (m.name == "multi_gamma") {
    const double g = p.at("gamma").get<double>();
    // the harmonic family settles every tier above recurrence, so it goes first
    if (g <= 1.0)
      add(multi_gamma_level_check(g, MultiGammaFamily::harmonic, n_max, i_max), "ergodic",
          "level_check:multi_gamma_harmonic");
    if (g <= 2.0)
      add(multi_gamma_level_check(g, MultiGammaFamily::power, n_max, i_max), "strongly_ergodic",
          "level_check:multi_gamma_power");
  }
  return out;
}

}  // namespace ergo
