#include "ergo/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ergo/parallel.hpp"

namespace ergo {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Stats {
  double mean = 0.0, se = 0.0;
};

// pairwise sums in index order keep the reduction independent of threads
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += v[k];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

Stats stats(const std::vector<double>& v) {
  Stats s;
  const std::size_t n = v.size();
  if (n == 0) return s;
  s.mean = pairwise_sum(v.data(), n) / double(n);
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = (v[k] - s.mean) * (v[k] - s.mean);
  const double var = n > 1 ? pairwise_sum(d.data(), n) / double(n - 1) : 0.0;
  s.se = std::sqrt(var / double(n));
  return s;
}

}  // namespace

SplitMix64 SplitMix64::substream(std::uint64_t seed, std::uint64_t k) {
  return SplitMix64(mix(seed + 0x9e3779b97f4a7c15ULL * (k + 1)) ^ mix(k));
}

std::uint64_t SplitMix64::next() {
  s_ += 0x9e3779b97f4a7c15ULL;
  return mix(s_);
}

double SplitMix64::uniform() { return (double(next() >> 11) + 1.0) * 0x1.0p-53; }

ReturnTimeSample sample_return_time(const GeneratorSpec& spec, const TargetSet& H, StateIndex start,
                                    std::uint64_t seed, const SimOptions& opt) {
  SplitMix64 rng(seed);
  const bool discrete = spec.kind() == ChainKind::discrete;
  ReturnTimeSample s;
  StateIndex x = start;
  while (true) {
    if (s.jumps >= opt.max_jumps) {
      s.censored = true;
      return s;
    }
    const Row r = spec.row(x);
    double q = 0.0;
    for (const auto& t : r) q += t.rate;
    if (!(q > 0.0)) throw ModelError("state " + std::to_string(x) + " is absorbing");
    if (discrete) {
      s.value += 1.0;
    } else {
      s.value += -std::log(rng.uniform()) / q;
    }
    double u = rng.uniform() * q;
    StateIndex next = r.back().to;
    for (const auto& t : r) {
      if (u <= t.rate) {
        next = t.to;
        break;
      }
      u -= t.rate;
    }
    ++s.jumps;
    x = next;
    if (x > opt.capacity) {
      s.censored = s.truncation_hit = true;
      return s;
    }
    if (H.contains(x)) return s;
  }
}

SimulationReport estimate_moments(const GeneratorSpec& spec, const TargetSet& H, StateIndex start,
                                  const std::vector<int>& orders, const std::vector<double>& lambdas,
                                  std::size_t n_samples, std::uint64_t seed, const SimOptions& opt) {
  if (n_samples < 100) throw ModelError("at least 100 samples are needed");
  for (int l : orders)
    if (l < 1) throw ModelError("moment orders must be >= 1");
  for (double l : lambdas)
    if (!(l > 0.0)) throw ModelError("lambda must be positive");

  std::vector<ReturnTimeSample> all(n_samples);
  const std::size_t blocks = std::min<std::size_t>(n_samples, 256);
  parallel_for(blocks, [&](std::size_t b) {
    for (std::size_t k = b; k < n_samples; k += blocks) {
      SplitMix64 sub = SplitMix64::substream(seed, k);
      all[k] = sample_return_time(spec, H, start, sub.next(), opt);
    }
  });

  SimulationReport rep;
  rep.start = start;
  rep.samples = n_samples;
  rep.seed = seed;
  std::vector<double> t;
  t.reserve(n_samples);
  for (const auto& s : all) {
    if (s.censored) ++rep.censored;
    else t.push_back(s.value);
  }
  rep.censored_fraction = double(rep.censored) / double(n_samples);
  rep.censoring_flag = rep.censored_fraction > 0.01;

  auto base = [&](std::string quantity) {
    MomentEstimate e;
    e.quantity = std::move(quantity);
    e.samples = t.size();
    e.censored = rep.censored;
    if (t.empty()) e.note = "every sample was censored";
    else if (rep.censoring_flag) e.note = "more than 1% of samples censored; the estimate is biased low";
    return e;
  };

  for (int l : orders) {
    MomentEstimate e = base("moment");
    e.order = l;
    if (!t.empty()) {
      std::vector<double> v(t.size());
      for (std::size_t k = 0; k < t.size(); ++k) v[k] = std::pow(t[k], l);
      const Stats st = stats(v);
      e.mean = st.mean;
      e.se = st.se;
      e.available = true;
      // halves disagreeing by more than 4 combined SE point at a heavy tail
      const std::size_t h = v.size() / 2;
      const Stats a = stats(std::vector<double>(v.begin(), v.begin() + h));
      const Stats b = stats(std::vector<double>(v.begin() + h, v.end()));
      if (l >= 2 && std::abs(a.mean - b.mean) > 4.0 * std::hypot(a.se, b.se)) {
        e.unstable = true;
        e.note = "sample halves disagree; heavy tail suspected";
      }
    }
    rep.estimates.push_back(std::move(e));
  }
  for (double lambda : lambdas) {
    MomentEstimate e = base("exp_functional");
    e.lambda = lambda;
    if (!t.empty()) {
      std::vector<double> v(t.size());
      double top = 0.0, sum = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) {
        const double w = std::exp(lambda * t[k]);
        top = std::max(top, w);
        sum += w;
        v[k] = std::expm1(lambda * t[k]) / lambda;
      }
      if (!std::isfinite(sum) || top > 0.05 * sum) {
        e.unstable = true;
        e.note = "largest sample carries more than 5% of the sum; lambda refused";
      } else {
        const Stats st = stats(v);
        e.mean = st.mean;
        e.se = st.se;
        e.available = true;
      }
    }
    rep.estimates.push_back(std::move(e));
  }
  return rep;
}

}  // namespace ergo
