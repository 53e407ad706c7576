#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergo/chain_model.hpp"

namespace ergo {

// SplitMix64; substream k of seed s starts from mix(s, k) so samples do not
// depend on how they are spread over threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : s_(state) {}
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t k);

  std::uint64_t next();
  // uniform on (0, 1]
  double uniform();

 private:
  std::uint64_t s_;
};

struct SimOptions {
  std::size_t max_jumps = 10'000'000;
  // states above this index count as leaving the enumeration
  std::size_t capacity = std::size_t(1) << 40;
};

struct ReturnTimeSample {
  double value = 0.0;  // time (continuous) or steps (discrete)
  std::size_t jumps = 0;
  bool censored = false;
  bool truncation_hit = false;
};

/// sigma_H from `start`: the first visit to H at or after the first jump.
ReturnTimeSample sample_return_time(const GeneratorSpec& spec, const TargetSet& H, StateIndex start,
                                    std::uint64_t seed, const SimOptions& opt = {});

struct MomentEstimate {
  std::string quantity;  // "moment" or "exp_functional"
  int order = 0;
  double lambda = 0.0;
  double mean = 0.0;
  double se = 0.0;
  std::size_t samples = 0;  // uncensored samples used
  std::size_t censored = 0;
  bool available = false;
  // moments: the two sample halves disagree; exponential: refused because
  // the largest sample dominates the sum
  bool unstable = false;
  std::string note;
};

struct SimulationReport {
  StateIndex start = 0;
  std::size_t samples = 0;
  std::size_t censored = 0;
  double censored_fraction = 0.0;
  bool censoring_flag = false;  // more than 1% censored
  std::uint64_t seed = 0;
  std::vector<MomentEstimate> estimates;
};

/// E sigma_H^l for each l and (E e^{lambda sigma_H} - 1)/lambda for each
/// lambda. Throws ModelError below 100 samples.
SimulationReport estimate_moments(const GeneratorSpec& spec, const TargetSet& H, StateIndex start,
                                  const std::vector<int>& orders, const std::vector<double>& lambdas,
                                  std::size_t n_samples, std::uint64_t seed, const SimOptions& opt = {});

}  // namespace ergo
