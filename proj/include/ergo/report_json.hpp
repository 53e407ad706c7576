#pragma once

#include <string>

#include "json.hpp"

#include "ergo/classifier.hpp"
#include "ergo/level_checks.hpp"
#include "ergo/moments.hpp"
#include "ergo/simulator.hpp"
#include "ergo/single_birth.hpp"
#include "ergo/witness.hpp"
#include "ergo/zoo.hpp"

namespace ergo {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// {"schema": 1, "command": ..., "result": body}
json envelope(const std::string& command, json body);

json to_json(const BoundednessVerdict& v);
json to_json(const Tier& t);
json to_json(const ErgodicityReport& r);
json to_json(const MomentSweep& s);
json to_json(const MomentTable& t);
json to_json(const ExpMomentCurve& c);
json to_json(const WitnessSequence& w);
json to_json(const WitnessReport& r);
json to_json(const NonexpResult& r);
json to_json(const SimulationReport& r);
json to_json(const LevelCheckReport& r);
json to_json(const AssertedClass& a);
json zoo_entry(const ZooModel& m);

/// Explicit single-birth summary: d, recurrence and the strong functional
/// at the doubling checkpoints.
json single_birth_json(const SingleBirthTableau& t, const ErgodicityExplicit& erg,
                       const std::optional<StrongExplicit>& strong, const BoundednessVerdict& recurrence);

/// Witness file: {"kind", "order"?, "terms": [{"support": [[i, y_i], ...]}],
/// "lambdas"?}. Throws ModelError on malformed input.
WitnessSequence witness_from_json(const json& j);

/// Model file: {"builtin": name, "params": {...}} or
/// {"explicit": {"states": n, "triplets": [[i, j, rate], ...], "kind": ...}}.
ZooModel model_from_json(const json& j);
ZooModel builtin_model(const std::string& name, const json& params);

}  // namespace ergo
