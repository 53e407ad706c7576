#include "doctest.h"

#include <cmath>
#include <limits>

#include "ergo/report_json.hpp"

using namespace ergo;

TEST_CASE("envelope carries the schema version") {
  const json e = envelope("zoo list", json::object());
  CHECK(e["schema"] == 1);
  CHECK(e["command"] == "zoo list");
  CHECK(e.contains("result"));
}

TEST_CASE("non-finite numbers become null") {
  BoundednessVerdict v = infinite_verdict("overflow");
  v.evidence.increments = {1.0, std::numeric_limits<double>::infinity()};
  const json j = to_json(v);
  CHECK(j["state"] == "Diverging");
  CHECK(j["limit"].is_null());
  CHECK(j["evidence"]["increments"][1].is_null());
  CHECK_NOTHROW(j.dump());
}

TEST_CASE("witness round trip") {
  WitnessSequence w;
  w.kind = WitnessKind::non_exponential;
  w.lambdas = {0.5, 0.25};
  w.terms.resize(2);
  w.terms[0].support = {{0, 1.0}, {3, 2.5}};
  w.terms[1].support = {{0, 2.0}};
  w.terms[1].N = 64;
  const WitnessSequence back = witness_from_json(to_json(w));
  CHECK(back.kind == w.kind);
  CHECK(back.lambdas == w.lambdas);
  REQUIRE(back.terms.size() == 2);
  CHECK(back.terms[0].support == w.terms[0].support);
  CHECK(back.terms[1].N == std::optional<std::size_t>(64));
  // gen output wraps the sequence
  const json wrapped = envelope("witness gen", json{{"witness", to_json(w)}, {"status", "complete"}});
  CHECK(witness_from_json(wrapped).terms.size() == 2);
}

TEST_CASE("malformed witness files") {
  CHECK_THROWS_AS(witness_from_json(json{{"kind", "non_ergodic"}}), ModelError);
  CHECK_THROWS_AS(witness_from_json(json::parse(R"({"kind":"non_ergodic","terms":[{"support":[[1]]}]})")),
                  ModelError);
  CHECK_THROWS_AS(witness_from_json(json::parse(R"({"kind":"non_ergodic","terms":[{"support":[[-1, 2]]}]})")),
                  ModelError);
}

TEST_CASE("builtin models from JSON") {
  const auto m = model_from_json(json::parse(R"({"builtin":"catastrophe","params":{"family":"power","gamma":2}})"));
  CHECK(m.spec->id() == "catastrophe(power,gamma=2)");
  CHECK(builtin_model("birth_death_gamma", json{{"gamma", 1.5}}).single_birth != nullptr);
  CHECK(builtin_model("brussel", json{{"lambda", {1, 2, 3, 4}}}).spec->id().find("brussel") == 0);
  CHECK_THROWS_AS(builtin_model("nonesuch", json::object()), ModelError);
  CHECK_THROWS_AS(builtin_model("brussel", json{{"lambda", {1, 2}}}), ModelError);
  CHECK_THROWS_AS(builtin_model("birth_death_gamma", json{{"gamma", "high"}}), ModelError);
}

TEST_CASE("explicit models from JSON") {
  const auto m = model_from_json(
      json::parse(R"({"explicit":{"states":2,"triplets":[[0,1,1.0],[1,0,2.0]],"kind":"continuous"}})"));
  CHECK(m.spec->state_count() == 2u);
  CHECK(m.spec->total_rate(1) == 2.0);
  CHECK_THROWS_AS(model_from_json(json::parse(R"({"explicit":{"states":2,"triplets":[[0,1]]}})")), ModelError);
  CHECK_THROWS_AS(model_from_json(json::object()), ModelError);
}

TEST_CASE("zoo entries serialize") {
  for (const auto& m : zoo_catalog()) {
    const json j = zoo_entry(m);
    CHECK(j["name"] == m.name);
    CHECK(j["params"].is_object());
  }
}
