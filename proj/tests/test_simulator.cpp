#include "doctest.h"

#include <cmath>

#include "ergo/simulator.hpp"
#include "ergo/single_birth.hpp"

using namespace ergo;

namespace {
ExplicitGenerator two_state() {
  return ExplicitGenerator(2, {{0, 1, 1.0}, {1, 0, 1.0}}, ChainKind::continuous, "two_state");
}
}  // namespace

TEST_CASE("SplitMix64 reference output") {
  // first outputs of the reference generator seeded with 0
  SplitMix64 r(0);
  CHECK(r.next() == 0xe220a8397b1dcdafULL);
  CHECK(r.next() == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("uniform lies in (0, 1]") {
  SplitMix64 r(7);
  for (int k = 0; k < 10000; ++k) {
    const double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("two-state return time: mean 2, second moment 6, exponential functional") {
  const auto g = two_state();
  const auto rep = estimate_moments(g, TargetSet{}, 0, {1, 2}, {0.2}, 100000, 42);
  REQUIRE(rep.estimates.size() == 3);
  CHECK(rep.censored == 0);
  CHECK(std::abs(rep.estimates[0].mean - 2.0) <= 4 * rep.estimates[0].se);
  CHECK(std::abs(rep.estimates[1].mean - 6.0) <= 4 * rep.estimates[1].se);
  // (E e^{0.2 sigma} - 1)/0.2 with sigma ~ Gamma(2, 1)
  const double want = (1.0 / 0.64 - 1.0) / 0.2;
  REQUIRE(rep.estimates[2].available);
  CHECK(std::abs(rep.estimates[2].mean - want) <= 4 * rep.estimates[2].se);
}

TEST_CASE("same seed, same report") {
  const auto g = two_state();
  const auto a = estimate_moments(g, TargetSet{}, 0, {1}, {}, 5000, 9);
  const auto b = estimate_moments(g, TargetSet{}, 0, {1}, {}, 5000, 9);
  const auto c = estimate_moments(g, TargetSet{}, 0, {1}, {}, 5000, 10);
  CHECK(a.estimates[0].mean == b.estimates[0].mean);
  CHECK(a.estimates[0].se == b.estimates[0].se);
  CHECK(a.estimates[0].mean != c.estimates[0].mean);
}

TEST_CASE("censoring is reported for a null-recurrent walk") {
  const FunctionalSingleBirth w(
      "walk", [](StateIndex) { return 1.0; }, [](StateIndex n) { return n == 0 ? Row{} : Row{{n - 1, 1.0}}; });
  SimOptions opt;
  opt.max_jumps = 100;
  const auto rep = estimate_moments(w, TargetSet{}, 0, {1}, {}, 2000, 3, opt);
  CHECK(rep.censored > 0);
  CHECK(rep.censoring_flag);
  CHECK_FALSE(rep.estimates[0].note.empty());
}

TEST_CASE("argument checks") {
  const auto g = two_state();
  CHECK_THROWS_AS(estimate_moments(g, TargetSet{}, 0, {1}, {}, 50, 1), ModelError);
  CHECK_THROWS_AS(estimate_moments(g, TargetSet{}, 0, {0}, {}, 500, 1), ModelError);
  CHECK_THROWS_AS(estimate_moments(g, TargetSet{}, 0, {1}, {-1.0}, 500, 1), ModelError);
}

TEST_CASE("discrete chains count steps") {
  // from 0 go to 1, from 1 return with probability 1/2: sigma = 1 + Geom(1/2)
  const ExplicitGenerator d(2, {{0, 1, 1.0}, {1, 0, 0.5}, {1, 1, 0.5}}, ChainKind::discrete);
  const auto rep = estimate_moments(d, TargetSet{}, 0, {1}, {}, 50000, 5);
  CHECK(std::abs(rep.estimates[0].mean - 3.0) <= 4 * rep.estimates[0].se);
}
