#include "ergo/verdict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ergo {

const char* to_string(VerdictState s) {
  switch (s) {
    case VerdictState::converged: return "Converged";
    case VerdictState::diverging: return "Diverging";
    case VerdictState::inconclusive: return "Inconclusive";
  }
  return "?";
}

const char* to_string(Growth g) {
  switch (g) {
    case Growth::none: return "none";
    case Growth::geometric: return "geometric";
    case Growth::power: return "power";
    case Growth::logarithmic: return "logarithmic";
    case Growth::iterated_log: return "iterated_log";
  }
  return "?";
}

std::optional<double> wynn_epsilon(const std::vector<double>& seq) {
  const std::size_t n = seq.size();
  if (n == 0) return std::nullopt;
  if (n < 3) return seq.back();
  // prev = column k-1, cur = column k
  std::vector<double> prev(n + 1, 0.0), cur(seq.begin(), seq.end());
  double best = seq.back();
  for (std::size_t k = 1; cur.size() > 1; ++k) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t m = 0; m + 1 < cur.size(); ++m) {
      const double diff = cur[m + 1] - cur[m];
      const double mag = std::max(std::abs(cur[m + 1]), std::abs(cur[m]));
      if (diff == 0.0 || std::abs(diff) <= 4 * std::numeric_limits<double>::epsilon() * mag)
        return best;  // breakdown: the column has converged to rounding
      next[m] = prev[m + 1] + 1.0 / diff;
    }
    if (k % 2 == 0) {
      if (!std::isfinite(next.back())) return best;
      best = next.back();
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return best;
}

BoundednessVerdict infinite_verdict(std::string reason) {
  BoundednessVerdict v;
  v.state = VerdictState::diverging;
  v.growth = Growth::geometric;
  v.limit = std::numeric_limits<double>::infinity();
  v.reason = std::move(reason);
  return v;
}

BoundednessVerdict boundedness_verdict(const std::vector<double>& seq, const VerdictRule& rule,
                                       const std::vector<double>& positions) {
  if (seq.size() < 3) throw std::invalid_argument("boundedness verdict needs at least 3 values");
  if (!positions.empty() && positions.size() != seq.size())
    throw std::invalid_argument("positions must match the sequence");
  for (double s : seq)
    if (!std::isfinite(s)) return infinite_verdict("sequence reaches an infinite value");

  BoundednessVerdict v;
  const std::size_t m = seq.size() - 1;  // number of increments
  auto pos = [&](std::size_t j) { return positions.empty() ? double(j + 1) : positions[j]; };
  auto& ev = v.evidence;
  for (std::size_t j = 0; j < m; ++j) ev.increments.push_back(seq[j + 1] - seq[j]);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const double a = ev.increments[j], b = ev.increments[j + 1];
    const double r = a > 0.0 ? b / a : std::numeric_limits<double>::quiet_NaN();
    ev.ratios.push_back(r);
    // increment j spans positions j..j+1; use its right end
    const double step = std::log(pos(j + 2) / pos(j + 1));
    ev.powers.push_back(a > 0.0 && b > 0.0 && step > 0.0 ? std::log(a / b) / step
                                                         : std::numeric_limits<double>::quiet_NaN());
  }
  auto rel = [&](std::size_t j) { return ev.increments[j] / (1.0 + std::abs(seq[j + 1])); };
  ev.last_relative_increment = rel(m - 1);

  auto limit_estimate = [&]() {
    const double last = seq.back();
    const double d = ev.increments.back();
    if (d <= 0.0) return last;
    std::vector<double> tail(seq.end() - std::min<std::ptrdiff_t>(seq.size(), 12), seq.end());
    auto w = wynn_epsilon(tail);
    double r = ev.ratios.empty() || !std::isfinite(ev.ratios.back()) ? 0.5 : ev.ratios.back();
    r = std::clamp(r, 0.0, 0.95);
    const double cap = last + 2.0 * d * r / (1.0 - r) + 4 * std::numeric_limits<double>::epsilon() * std::abs(last);
    if (w && std::isfinite(*w) && *w >= last - 1e-15 * std::abs(last) && *w <= cap)
      return std::max(*w, last);
    return last;
  };

  // plateau
  if (rel(m - 1) < rule.tol_conv && rel(m - 2) < rule.tol_conv) {
    v.state = VerdictState::converged;
    v.limit = limit_estimate();
    v.reason = "relative increments below tolerance on the last two windows";
    return v;
  }

  const std::size_t w = static_cast<std::size_t>(std::max(1, rule.div_windows));
  if (m >= w) {
    bool growing = true;
    for (std::size_t j = m - w; j < m; ++j) {
      if (ev.increments[j] < rule.tol_div) growing = false;
      if (j > m - w && ev.increments[j] < ev.increments[j - 1] * (1.0 - 1e-9)) growing = false;
    }
    if (growing) {
      double r = 1.0;
      std::size_t cnt = 0;
      for (std::size_t j = m - w; j + 1 < m; ++j, ++cnt) r *= ev.ratios[j];
      r = cnt ? std::pow(r, 1.0 / cnt) : 1.0;
      v.state = VerdictState::diverging;
      v.growth = r >= 1.9 ? Growth::geometric : (r > 1.05 ? Growth::power : Growth::logarithmic);
      std::ostringstream os;
      os << "increments >= " << rule.tol_div << " and non-shrinking over " << w << " windows";
      v.reason = os.str();
      return v;
    }
  }

  if (rule.tail_rule && m >= w && w >= 2) {
    bool fast = true, slow = true;
    for (std::size_t j = m - w; j + 1 < m; ++j) {
      const double r = ev.ratios[j], p = ev.powers[j];
      if (!(r <= rule.ratio_max && p >= rule.power_min)) fast = false;
      if (!(std::isfinite(p) && p <= rule.slow_power_max)) slow = false;
    }
    for (std::size_t j = m - w; j < m; ++j)
      if (ev.increments[j] < rule.tol_div) slow = false;
    if (fast) {
      v.state = VerdictState::converged;
      v.limit = limit_estimate();
      v.reason = "increments shrink at least like a power >= " + std::to_string(rule.power_min) +
                 " of the window position";
      return v;
    }
    if (slow) {
      v.state = VerdictState::diverging;
      v.growth = Growth::iterated_log;
      v.reason = "increments decay no faster than a power <= " + std::to_string(rule.slow_power_max) +
                 " of the window position";
      return v;
    }
  }

  v.reason = "neither plateau nor sustained growth";
  v.limit = seq.back();
  return v;
}

}  // namespace ergo
