#include "doctest.h"

#include "ergo/witness.hpp"
#include "ergo/zoo.hpp"

using namespace ergo;

TEST_CASE("generated non-ergodic witness passes on gamma = 0.5") {
  const auto m = birth_death_gamma(0.5);
  const auto w = gen_nonergodic_witness(*m.spec, TargetSet{}, 10, Schedule::pow2(4, 13));
  REQUIRE(w.terms.size() == 10);
  const auto r = verify_witness(*m.spec, TargetSet{}, w);
  CHECK(r.inequalities_hold);
  CHECK(r.max_violation <= 1e-9);
  CHECK(r.divergence.diverging());
  CHECK(r.pass);
}

TEST_CASE("generated non-strong witness passes on gamma = 2") {
  const auto m = birth_death_gamma(2.0);
  const auto w = gen_nonstrong_witness(*m.spec, TargetSet{}, 10, Schedule::pow2(4, 13));
  const auto r = verify_witness(*m.spec, TargetSet{}, w);
  CHECK(r.inequalities_hold);
  CHECK(r.divergence.diverging());
  CHECK(r.pass);
}

TEST_CASE("a non-ergodic witness on an ergodic chain cannot diverge") {
  // truncated solutions are valid sub-solutions but stay bounded
  const auto m = birth_death_gamma(2.5);
  const auto w = gen_nonergodic_witness(*m.spec, TargetSet{}, 10, Schedule::pow2(4, 13));
  const auto r = verify_witness(*m.spec, TargetSet{}, w);
  CHECK(r.inequalities_hold);
  CHECK_FALSE(r.divergence.diverging());
  CHECK_FALSE(r.pass);
}

TEST_CASE("tampered witness is caught") {
  const auto m = birth_death_gamma(0.5);
  auto w = gen_nonergodic_witness(*m.spec, TargetSet{}, 6, Schedule::pow2(4, 9));
  w.terms[3].support[2].second *= 1.5;
  const auto r = verify_witness(*m.spec, TargetSet{}, w);
  CHECK_FALSE(r.inequalities_hold);
  CHECK(r.terms[3].max_violation > 1e-9);
  CHECK_FALSE(r.pass);
}

TEST_CASE("structural errors") {
  const auto m = birth_death_gamma(0.5);
  WitnessSequence w;
  w.kind = WitnessKind::non_exponential;
  w.terms.resize(3);
  CHECK_THROWS_AS(verify_witness(*m.spec, TargetSet{}, w), ModelError);
  CHECK_THROWS_AS(parse_witness_kind("sideways"), ModelError);
  CHECK(parse_witness_kind("non_strong") == WitnessKind::non_strong);
}

TEST_CASE("non-exponential generator: no witness on the constant catastrophe") {
  CatastropheParams p;
  p.family = CatastropheFamily::constant;
  NonexpOptions opt;
  opt.max_level = 1 << 14;
  const auto r = gen_nonexp_witness(*catastrophe(p).spec, TargetSet{}, 5, opt);
  CHECK(r.status == NonexpStatus::no_witness);
}

TEST_CASE("non-exponential generator on 1/log i: early terms meet the contract") {
  CatastropheParams p;
  p.family = CatastropheFamily::log_power;
  NonexpOptions opt;
  opt.max_level = 1 << 14;
  const auto r = gen_nonexp_witness(*catastrophe(p).spec, TargetSet{}, 4, opt);
  REQUIRE(r.info.size() >= 3);
  for (const auto& t : r.info) {
    CHECK(t.lambda <= 1.0 / double(t.n));
    if (!t.reduced) CHECK(t.relative_gap <= 1e-6);
  }
  // the terms that were produced check out as inequalities
  if (!r.sequence.terms.empty()) {
    const auto v = verify_witness(*catastrophe(p).spec, TargetSet{}, r.sequence);
    CHECK(v.inequalities_hold);
    CHECK(v.lambdas_ok);
  }
}
