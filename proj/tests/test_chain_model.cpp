#include "doctest.h"

#include "ergo/chain_model.hpp"
#include "ergo/zoo.hpp"

using namespace ergo;

namespace {
ExplicitGenerator two_state() {
  return ExplicitGenerator(2, {{0, 1, 1.0}, {1, 0, 1.0}}, ChainKind::continuous, "two_state");
}
}  // namespace

TEST_CASE("explicit generator rows and validation") {
  const auto g = two_state();
  CHECK(g.state_count() == 2u);
  REQUIRE(g.row(0).size() == 1);
  CHECK(g.row(0)[0].to == 1u);
  CHECK(g.total_rate(1) == 1.0);
  CHECK_NOTHROW(validate_row(g, 0));
  CHECK_THROWS_AS(g.row(2), ModelError);
}

TEST_CASE("invalid explicit models are rejected") {
  CHECK_THROWS_AS(ExplicitGenerator(0, {}, ChainKind::continuous), ModelError);
  CHECK_THROWS_AS(ExplicitGenerator(2, {{0, 5, 1.0}}, ChainKind::continuous), ModelError);
  // rows are validated on construction
  CHECK_THROWS_AS(ExplicitGenerator(2, {{0, 1, 0.5}, {1, 0, 1.0}}, ChainKind::discrete), ModelError);
  CHECK_THROWS_AS(ExplicitGenerator(2, {{0, 1, 1.0}}, ChainKind::continuous), ModelError);
  CHECK_THROWS_AS(ExplicitGenerator(2, {{0, 1, -1.0}, {1, 0, 1.0}}, ChainKind::continuous), ModelError);
}

TEST_CASE("target set membership") {
  const TargetSet H({0, 3});
  CHECK(H.contains(3));
  CHECK_FALSE(H.contains(1));
  CHECK(H.max_member() == 3u);
  CHECK_THROWS_AS(TargetSet(std::vector<StateIndex>{}), ModelError);
}

TEST_CASE("truncated system of a birth-death chain") {
  // b_i = a_i = i^gamma with gamma = 1: from i the jump goes up or down
  // with probability 1/2 and the mean holding time is 1/(2i)
  const auto m = birth_death_gamma(1.0);
  const auto sys = build_truncated_system(*m.spec, TargetSet{}, 4, OrdinarySource{});
  REQUIRE(sys.size() == 4);
  CHECK(sys.unknowns.front() == 1u);
  CHECK(sys.g[1] == doctest::Approx(1.0 / 4.0));
  CHECK(sys.A.coeff(1, 0) == doctest::Approx(0.5));
  CHECK(sys.A.coeff(1, 2) == doctest::Approx(0.5));
  // the top row loses its upward mass
  CHECK(sys.A.row(3).sum() == doctest::Approx(0.5));
  // H row: q_01 = 1, so h_const = 1 and the only coefficient is on state 1
  CHECK(sys.h_const[0] == doctest::Approx(1.0));
  CHECK(sys.h_rows.coeff(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("exponential systems need lambda below every rate") {
  const auto m = birth_death_gamma(1.0);
  CHECK_NOTHROW(build_truncated_system(*m.spec, TargetSet{}, 8, ExponentialSource{0.5}));
  CHECK_THROWS_AS(build_truncated_system(*m.spec, TargetSet{}, 8, ExponentialSource{1.5}), ModelError);
  CHECK_THROWS_AS(build_truncated_system(*m.spec, TargetSet{}, 8, ExponentialSource{0.0}), ModelError);
  CHECK(min_total_rate(*m.spec, 8) == doctest::Approx(1.0));
}

TEST_CASE("truncation must contain H") {
  const auto m = birth_death_gamma(1.0);
  CHECK_THROWS_AS(build_truncated_system(*m.spec, TargetSet({0, 9}), 4, OrdinarySource{}), ModelError);
}

TEST_CASE("embedded kernel of a continuous chain") {
  const auto m = birth_death_gamma(2.0);
  const auto k = embedded_kernel(m.spec);
  // from 3: up 9, down 9
  double up = 0.0, total = 0.0;
  for (const auto& t : k.row(3)) {
    total += t.rate;
    if (t.to == 4) up = t.rate;
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(up == doctest::Approx(0.5));
  const auto discrete = std::make_shared<ExplicitGenerator>(
      2, std::vector<ExplicitGenerator::Triplet>{{0, 1, 1.0}, {1, 0, 1.0}}, ChainKind::discrete);
  CHECK_THROWS_AS(embedded_kernel(discrete), ModelError);
}

TEST_CASE("lattice enumeration is deterministic") {
  const auto a = enumerate_states(*brussel({}).spec, 50);
  const auto b = enumerate_states(*brussel({}).spec, 50);
  CHECK(a.states == b.states);
  CHECK(a.labels == b.labels);
}
