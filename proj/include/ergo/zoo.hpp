#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ergo/chain_model.hpp"
#include "ergo/lattice.hpp"
#include "ergo/single_birth.hpp"

namespace ergo {

/// Class asserted for a model by the literature; unset fields are unknown.
struct AssertedClass {
  std::optional<bool> recurrent;
  std::optional<bool> ergodic;
  std::optional<bool> exponential;
  std::optional<bool> strong;
  std::string label;
};

struct ZooModel {
  std::string name;
  std::string params;  // compact JSON of the parameters
  GeneratorPtr spec;
  std::shared_ptr<const SingleBirthSpec> single_birth;  // null unless single birth
  AssertedClass asserted;
};

// b_0 = 1, b_i = a_i = i^gamma.
ZooModel birth_death_gamma(double gamma);

enum class CatastropheFamily { power, log_power, loglog_power, alternating, constant, custom };

CatastropheFamily parse_catastrophe_family(const std::string& s);
const char* to_string(CatastropheFamily f);

struct CatastropheParams {
  CatastropheFamily family = CatastropheFamily::constant;
  double gamma = 1.0;
  double c = 1.0;
  std::vector<double> custom;  // alpha_1, alpha_2, ...; the last value repeats
};

/// alpha_i for i >= 1. Logarithms use max(i, 3) and log log uses
/// max(i, 16) so that every rate is finite and positive.
double catastrophe_alpha(const CatastropheParams& p, std::size_t i);

// q_{i,i+1} = i+1, q_{i,0} = alpha_i.
ZooModel catastrophe(const CatastropheParams& p);

/// Single birth chain with rates to n+1, n-1 and 0; arrays extend by
/// repeating their last entry.
struct CustomSingleBirthParams {
  std::vector<double> up;
  std::vector<double> down_one;
  std::vector<double> down_to_zero;
};
ZooModel single_birth_custom(const CustomSingleBirthParams& p);

struct BrusselParams {
  std::size_t sites = 1;
  double lambda1 = 1, lambda2 = 1, lambda3 = 1, lambda4 = 1;
  std::vector<double> a, b;  // per site, default 1
  std::vector<std::vector<double>> p1, p2;  // default uniform over other sites
};
ZooModel brussel(const BrusselParams& p);

struct MultiGammaParams {
  std::size_t sites = 2;
  double gamma = 1.0;
  std::vector<std::vector<double>> p;  // default uniform over other sites
};
ZooModel multi_gamma(const MultiGammaParams& p);

/// Lattice-valued model (Brussel, multi-gamma); exposes the codec.
class LatticeModel : public GeneratorSpec {
 public:
  explicit LatticeModel(std::size_t dim) : codec_(dim) {}
  std::size_t level(StateIndex i) const override { return codec_.level_of(i); }
  std::size_t level_size(std::size_t level) const override { return codec_.level_size(level); }
  const LatticeCodec& codec() const { return codec_; }
  /// Largest index whose level is <= L.
  StateIndex last_index_of_level(std::size_t L) const { return codec_.level_offset(L + 1) - 1; }

 protected:
  LatticeCodec codec_;
};

/// Named instances with asserted classes, used by regression tests and
/// `zoo list`.
std::vector<ZooModel> zoo_catalog();

}  // namespace ergo
