#include "ergo/report_json.hpp"

#include <cmath>

namespace ergo {

namespace {

// JSON has no infinity; non-finite numbers become null
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

json opt_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace

json envelope(const std::string& command, json body) {
  return json{{"schema", kSchemaVersion}, {"command", command}, {"result", std::move(body)}};
}

json to_json(const BoundednessVerdict& v) {
  json j{{"state", to_string(v.state)}, {"growth", to_string(v.growth)}, {"reason", v.reason}};
  j["limit"] = v.converged() ? num(v.limit) : json(nullptr);
  j["evidence"] = {{"increments", nums(v.evidence.increments)},
                   {"last_relative_increment", num(v.evidence.last_relative_increment)}};
  return j;
}

json to_json(const Tier& t) {
  return json{{"name", t.name},         {"holds", to_string(t.holds)},  {"grade", to_string(t.grade)},
              {"source", t.source},     {"verdict", to_json(t.verdict)}, {"levels", t.levels},
              {"sequence", nums(t.sequence)}, {"note", t.note}};
}

json to_json(const ErgodicityReport& r) {
  json j;
  j["model"] = r.model;
  j["H"] = r.H.members;
  j["L"] = r.L;
  j["schedule"] = r.schedule.levels;
  json tiers = json::object();
  for (const Tier* t : r.ladder()) tiers[t->name] = to_json(*t);
  j["tiers"] = tiers;
  if (r.single_birth) {
    const auto& x = *r.single_birth;
    json s{{"K", x.K},
           {"d_hat", num(x.ergodic.d_hat)},
           {"d_hat_tol", num(x.ergodic.d_hat_tol)},
           {"ergodic", to_json(x.ergodic.verdict)},
           {"recurrence", to_json(x.recurrence)},
           {"ergodic_agrees", x.ergodic_agrees},
           {"strong_agrees", x.strong_agrees},
           {"max_dual_gap", num(x.max_dual_gap)}};
    if (x.strong) {
      s["strong"] = to_json(x.strong->verdict);
      s["strong_robust"] = x.strong->robust;
      s["recurrent_fast_path"] = x.strong->recurrent_fast_path;
    }
    j["single_birth"] = s;
  }
  if (r.decay) {
    json d = json::array();
    for (const auto& l : r.decay->levels)
      d.push_back({{"N", l.N}, {"lambda_star", num(l.lambda_star)}, {"capped", l.capped}});
    j["decay_rates"] = d;
  }
  if (r.exp_curve) {
    json pts = json::array();
    for (const auto& p : r.exp_curve->points)
      pts.push_back({{"lambda", p.lambda}, {"state", to_string(p.verdict.state)}});
    j["exp_scan"] = {{"lambda_prime", num(r.exp_curve->lambda_prime)},
                     {"inf_q_certified", r.exp_curve->inf_q_certified},
                     {"points", pts}};
  }
  if (r.catastrophe) j["catastrophe_tail"] = to_json(r.catastrophe->verdict);
  j["monotonicity_violation"] = num(r.monotonicity_violation);
  j["consistent"] = r.consistent();
  j["consistency_errors"] = r.consistency_errors;
  j["notes"] = r.notes;
  return j;
}

json to_json(const MomentSweep& s) {
  json lv = json::array();
  for (const auto& l : s.levels)
    lv.push_back({{"N", l.N},
                  {"h_values", nums(l.h_values)},
                  {"h_max", num(l.h_max)},
                  {"interior_max", num(l.interior_max)},
                  {"status", l.status == SolveStatus::finite     ? "finite"
                             : l.status == SolveStatus::infinite ? "infinite"
                                                                 : "inconclusive"}});
  return json{{"kind", describe(s.kind)},
              {"levels", lv},
              {"monotonicity_violation", num(s.monotonicity_violation)},
              {"aborted", s.aborted},
              {"error", s.error}};
}

json to_json(const MomentTable& t) {
  return json{{"order", t.order},
              {"N", t.N},
              {"h_values", nums(t.h_values)},
              {"interior_max", num(t.interior_max)},
              {"values", nums(t.by_state)}};
}

json to_json(const ExpMomentCurve& c) {
  json pts = json::array();
  for (const auto& p : c.points) {
    json x0 = json::array();
    for (const auto& l : p.sweep.levels) x0.push_back(num(l.h_max));
    pts.push_back({{"lambda", p.lambda}, {"x0", x0}, {"verdict", to_json(p.verdict)}});
  }
  json z = json::array();
  for (const auto& c0 : c.lambda0_checks)
    z.push_back({{"N", c0.N},
                 {"lambda", c0.lambda},
                 {"x0_lambda", num(c0.x0_lambda)},
                 {"x0_ordinary", num(c0.x0_ordinary)},
                 {"consistent", c0.consistent}});
  std::vector<std::size_t> levels;
  if (!c.points.empty())
    for (const auto& l : c.points.front().sweep.levels) levels.push_back(l.N);
  return json{{"inf_q", num(c.inf_q)},
              {"inf_q_certified", c.inf_q_certified},
              {"lambda_prime", num(c.lambda_prime)},
              {"levels", levels},
              {"points", pts},
              {"lambda_zero_checks", z},
              {"lambda_monotone", c.lambda_monotone}};
}

json to_json(const WitnessSequence& w) {
  json terms = json::array();
  for (const auto& t : w.terms) {
    json sup = json::array();
    for (auto [i, v] : t.support) sup.push_back(json::array({i, v}));
    json jt{{"support", sup}};
    if (t.N) jt["N"] = *t.N;
    if (t.x0) jt["x0"] = num(*t.x0);
    terms.push_back(jt);
  }
  json j{{"kind", to_string(w.kind)}, {"provenance", w.provenance}, {"terms", terms}};
  if (w.kind == WitnessKind::non_algebraic) j["order"] = w.order;
  if (w.kind == WitnessKind::non_exponential) j["lambdas"] = w.lambdas;
  return j;
}

WitnessSequence witness_from_json(const json& in) {
  try {
    // accept the output of `witness gen` as well as a bare sequence
    const json* p = &in;
    if (p->is_object() && p->contains("result")) p = &p->at("result");
    if (p->is_object() && p->contains("witness")) p = &p->at("witness");
    const json& j = *p;
    WitnessSequence w;
    w.kind = parse_witness_kind(j.at("kind").get<std::string>());
    w.order = get_or<int>(j, "order", 0);
    w.provenance = get_or<std::string>(j, "provenance", "user");
    for (const auto& jt : j.at("terms")) {
      WitnessTerm t;
      for (const auto& p : jt.at("support")) {
        if (!p.is_array() || p.size() != 2) throw ModelError("support entries are [state, value] pairs");
        const auto i = p[0].get<long long>();
        if (i < 0) throw ModelError("states are nonnegative");
        if (p[1].is_null()) throw ModelError("witness values must be finite");
        t.support.emplace_back(static_cast<StateIndex>(i), p[1].get<double>());
      }
      std::sort(t.support.begin(), t.support.end());
      if (jt.contains("N")) t.N = jt.at("N").get<std::size_t>();
      if (jt.contains("x0") && !jt.at("x0").is_null()) t.x0 = jt.at("x0").get<double>();
      w.terms.push_back(std::move(t));
    }
    if (j.contains("lambdas")) w.lambdas = j.at("lambdas").get<std::vector<double>>();
    return w;
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed witness file: ") + e.what());
  }
}

json to_json(const WitnessReport& r) {
  json terms = json::array();
  for (const auto& t : r.terms)
    terms.push_back({{"max_violation", num(t.max_violation)},
                     {"worst_state", t.worst_state},
                     {"checked", t.checked},
                     {"region_hi", t.region_hi},
                     {"statistic", num(t.statistic)}});
  return json{{"kind", to_string(r.kind)},
              {"pass", r.pass},
              {"inequalities_hold", r.inequalities_hold},
              {"max_violation", num(r.max_violation)},
              {"lambdas_ok", r.lambdas_ok},
              {"statistic_name", r.statistic_name},
              {"statistic", nums(r.statistic)},
              {"divergence", to_json(r.divergence)},
              {"truncated_source", r.truncated_source},
              {"reduction", r.reduction},
              {"terms", terms},
              {"notes", r.notes}};
}

json to_json(const NonexpResult& r) {
  json info = json::array();
  for (const auto& t : r.info)
    info.push_back({{"n", t.n},
                    {"N", t.N},
                    {"lambda", t.lambda},
                    {"lambda_cap", t.lambda_cap},
                    {"x0", num(t.x0)},
                    {"relative_gap", num(t.relative_gap)},
                    {"contract_met", t.contract_met},
                    {"reduced", t.reduced}});
  json j{{"status", to_string(r.status)},
         {"lambda_prime", num(r.lambda_prime)},
         {"terms", info},
         {"reason", r.reason}};
  if (r.status != NonexpStatus::complete)
    j["stop"] = {{"levels", r.stop_levels}, {"x0", nums(r.stop_evidence)}, {"verdict", to_json(r.stop_verdict)}};
  return j;
}

json to_json(const SimulationReport& r) {
  json est = json::array();
  for (const auto& e : r.estimates) {
    json x{{"quantity", e.quantity}, {"available", e.available}, {"samples", e.samples},
           {"censored", e.censored}, {"unstable", e.unstable},   {"note", e.note}};
    if (e.quantity == "moment") x["order"] = e.order;
    else x["lambda"] = e.lambda;
    x["mean"] = e.available ? num(e.mean) : json(nullptr);
    x["se"] = e.available ? num(e.se) : json(nullptr);
    est.push_back(x);
  }
  return json{{"start", r.start},
              {"samples", r.samples},
              {"censored", r.censored},
              {"censored_fraction", r.censored_fraction},
              {"censoring_flag", r.censoring_flag},
              {"seed", r.seed},
              {"estimates", est}};
}

json to_json(const LevelCheckReport& r) {
  return json{{"family", r.family},
              {"n_max", r.n_max},
              {"i_max", r.i_max},
              {"rows_checked", r.rows_checked},
              {"violations", r.violations},
              {"max_violation", num(r.max_violation)},
              {"worst", {{"n", r.worst_n}, {"i", r.worst_i}, {"l", r.worst_l}}},
              {"statistic_n", r.stat_n},
              {"statistic", nums(r.statistic)},
              {"divergence", to_json(r.divergence)},
              {"pass", r.pass}};
}

json to_json(const AssertedClass& a) {
  return json{{"recurrent", opt_bool(a.recurrent)},
              {"ergodic", opt_bool(a.ergodic)},
              {"exponentially_ergodic", opt_bool(a.exponential)},
              {"strongly_ergodic", opt_bool(a.strong)},
              {"label", a.label}};
}

json zoo_entry(const ZooModel& m) {
  return json{{"name", m.name},
              {"id", m.spec->id()},
              {"params", json::parse(m.params)},
              {"single_birth", m.single_birth != nullptr},
              {"asserted", to_json(m.asserted)}};
}

json single_birth_json(const SingleBirthTableau& t, const ErgodicityExplicit& erg,
                       const std::optional<StrongExplicit>& strong, const BoundednessVerdict& recurrence) {
  const auto cps = t.checkpoints();
  json S = json::array(), D = json::array(), sup = json::array();
  for (auto k : cps) {
    S.push_back(num(double(t.S[k])));
    D.push_back(num(double(t.D[k])));
    sup.push_back(num(t.d_sup[k]));
  }
  json j{{"K", t.K},
         {"rows_valid", t.rows_valid},
         {"overflow", t.overflow},
         {"checkpoints", cps},
         {"sum_F0", S},
         {"sum_d", D},
         {"d_sup", sup},
         {"d_sup_K", t.rows_valid ? num(t.d_sup[t.rows_valid - 1]) : json(nullptr)},
         {"cross_checked_rows", t.cross_checked_rows},
         {"max_dual_gap", num(t.max_dual_gap)},
         {"inf_down_to_zero", num(t.inf_down_to_zero)},
         {"recurrence", to_json(recurrence)},
         {"ergodicity", to_json(erg.verdict)},
         {"d_hat", erg.verdict.converged() ? num(erg.d_hat) : json(nullptr)},
         {"d_hat_tol", num(erg.d_hat_tol)}};
  if (strong) {
    j["strong"] = {{"verdict", to_json(strong->verdict)},
                   {"d_used", num(strong->d_used)},
                   {"low", to_string(strong->verdict_low.state)},
                   {"high", to_string(strong->verdict_high.state)},
                   {"robust", strong->robust},
                   {"partial_sums", nums(strong->partial_sums)},
                   {"recurrent_fast_path", strong->recurrent_fast_path}};
  }
  return j;
}

ZooModel builtin_model(const std::string& name, const json& p) {
  try {
    if (name == "birth_death_gamma") return birth_death_gamma(get_or<double>(p, "gamma", 1.0));
    if (name == "catastrophe") {
      CatastropheParams c;
      c.family = parse_catastrophe_family(get_or<std::string>(p, "family", "constant"));
      c.gamma = get_or<double>(p, "gamma", 1.0);
      c.c = get_or<double>(p, "c", 1.0);
      c.custom = get_or<std::vector<double>>(p, "alpha", {});
      return catastrophe(c);
    }
    if (name == "single_birth_custom") {
      CustomSingleBirthParams c;
      c.up = get_or<std::vector<double>>(p, "up", {});
      c.down_one = get_or<std::vector<double>>(p, "down_one", {});
      c.down_to_zero = get_or<std::vector<double>>(p, "down_to_zero", {});
      return single_birth_custom(c);
    }
    if (name == "brussel") {
      BrusselParams b;
      b.sites = get_or<std::size_t>(p, "sites", 1);
      if (p.contains("lambda")) {
        const auto l = p.at("lambda").get<std::vector<double>>();
        if (l.size() != 4) throw ModelError("brussel lambda needs four rates");
        b.lambda1 = l[0], b.lambda2 = l[1], b.lambda3 = l[2], b.lambda4 = l[3];
      }
      b.a = get_or<std::vector<double>>(p, "a", {});
      b.b = get_or<std::vector<double>>(p, "b", {});
      b.p1 = get_or<std::vector<std::vector<double>>>(p, "p1", {});
      b.p2 = get_or<std::vector<std::vector<double>>>(p, "p2", {});
      return brussel(b);
    }
    if (name == "multi_gamma") {
      MultiGammaParams m;
      m.sites = get_or<std::size_t>(p, "sites", 2);
      m.gamma = get_or<double>(p, "gamma", 1.0);
      m.p = get_or<std::vector<std::vector<double>>>(p, "p", {});
      return multi_gamma(m);
    }
  } catch (const json::exception& e) {
    throw ModelError(std::string("bad parameters for ") + name + ": " + e.what());
  }
  throw ModelError("unknown model: " + name);
}

ZooModel model_from_json(const json& j) {
  if (j.contains("builtin")) return builtin_model(j.at("builtin").get<std::string>(), j.value("params", json::object()));
  if (!j.contains("explicit")) throw ModelError("model file needs \"builtin\" or \"explicit\"");
  try {
    const auto& e = j.at("explicit");
    const auto n = e.at("states").get<std::size_t>();
    const std::string kind = get_or<std::string>(e, "kind", "continuous");
    if (kind != "continuous" && kind != "discrete") throw ModelError("kind must be continuous or discrete");
    std::vector<ExplicitGenerator::Triplet> trip;
    for (const auto& t : e.at("triplets")) {
      if (!t.is_array() || t.size() != 3) throw ModelError("triplets are [i, j, rate]");
      trip.push_back({t[0].get<StateIndex>(), t[1].get<StateIndex>(), t[2].get<double>()});
    }
    ZooModel m;
    m.name = "explicit";
    m.params = e.dump();
    m.spec = std::make_shared<ExplicitGenerator>(n, std::move(trip),
                                                 kind == "discrete" ? ChainKind::discrete : ChainKind::continuous,
                                                 get_or<std::string>(e, "id", "explicit"));
    return m;
  } catch (const json::exception& ex) {
    throw ModelError(std::string("malformed explicit model: ") + ex.what());
  }
}

}  // namespace ergo
