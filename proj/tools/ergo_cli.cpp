// ergo: command-line front end for the ergodicity toolkit.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ergo/level_checks.hpp"
#include "ergo/report_json.hpp"

using namespace ergo;

namespace {

struct Shared {
  std::string model = "birth_death_gamma";
  std::string model_file;
  std::string params;
  std::string H = "0";
  std::string schedule = "pow2:4..17";
  int L = 1;
  std::string lambda_grid;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string out;
  // per-model shortcuts, merged under --params
  std::optional<double> gamma, c;
  std::string family;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_arg(const std::string& text) {
  const std::string body = !text.empty() && text[0] == '@' ? slurp(text.substr(1)) : text;
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ModelError(std::string("invalid JSON: ") + e.what());
  }
}

ZooModel load_model(const Shared& s) {
  if (!s.model_file.empty()) return model_from_json(parse_json_arg("@" + s.model_file));
  json p = s.params.empty() ? json::object() : parse_json_arg(s.params);
  if (!p.is_object()) throw ModelError("--params must be a JSON object");
  if (s.gamma) p["gamma"] = *s.gamma;
  if (s.c) p["c"] = *s.c;
  if (!s.family.empty()) p["family"] = s.family;
  return builtin_model(s.model, p);
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ModelError("not a number: " + item);
    }
  }
  return v;
}

TargetSet parse_H(const std::string& text) {
  std::vector<StateIndex> m;
  for (double d : parse_doubles(text)) {
    if (d < 0 || d != std::floor(d)) throw ModelError("--H takes nonnegative state indices");
    m.push_back(static_cast<StateIndex>(d));
  }
  if (m.empty()) throw ModelError("--H is empty");
  return TargetSet(m);
}

Schedule parse_schedule(const Shared& s, const GeneratorSpec& spec) {
  Schedule sch;
  try {
    sch = Schedule::parse(s.schedule);
  } catch (const std::invalid_argument& e) {
    throw ModelError(e.what());
  }
  return sch.clipped(spec.state_count());
}

// CSV: header line plus rows, fields already formatted
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string fmt(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

template <class T>
std::string fmt(const T& v) {
  std::ostringstream o;
  o << v;
  return o.str();
}

void emit(const Shared& s, const std::string& command, const json& body, const Csv& csv) {
  std::ostringstream o;
  if (s.format == "csv") {
    auto line = [&](const std::vector<std::string>& f) {
      for (std::size_t k = 0; k < f.size(); ++k) o << (k ? "," : "") << f[k];
      o << '\n';
    };
    line(csv.header);
    for (const auto& r : csv.rows) line(r);
  } else {
    o << envelope(command, body).dump(2) << '\n';
  }
  if (s.out.empty()) {
    std::cout << o.str();
  } else {
    std::ofstream f(s.out);
    if (!f) throw ModelError("cannot write " + s.out);
    f << o.str();
  }
}

void add_shared(CLI::App* app, Shared& s, bool model_flags = true) {
  if (model_flags) {
    app->add_option("--model", s.model, "builtin model name");
    app->add_option("--model-file", s.model_file, "model file (builtin or explicit JSON)");
    app->add_option("--params", s.params, "model parameters, inline JSON or @file");
    app->add_option("--gamma", s.gamma, "shortcut for params.gamma");
    app->add_option("--c", s.c, "shortcut for params.c");
    app->add_option("--family", s.family, "shortcut for params.family");
    app->add_option("--H", s.H, "target set, comma list");
    app->add_option("--schedule", s.schedule, "truncation levels, pow2:a..b or comma list");
  }
  app->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app->add_option("--out", s.out, "write output here instead of stdout");
}

// ---- commands ----

void cmd_classify(const Shared& s, const std::string& transience) {
  const ZooModel m = load_model(s);
  ClassifyConfig cfg;
  cfg.schedule = parse_schedule(s, *m.spec);
  if (!s.lambda_grid.empty()) cfg.lambda_grid = parse_doubles(s.lambda_grid);
  // lattice models: the reduced level checks outrank the sweeps
  cfg.certificates = level_certificates(m);
  if (!transience.empty()) {
    const json z = parse_json_arg(transience);
    cfg.transience_certificate = z.get<std::vector<double>>();
  }
  const ErgodicityReport r = classify(*m.spec, parse_H(s.H), s.L, cfg);
  json body = to_json(r);
  body["asserted"] = to_json(m.asserted);
  Csv csv{{"tier", "holds", "grade", "state", "growth", "limit"}, {}};
  for (const Tier* t : r.ladder())
    csv.rows.push_back({t->name, to_string(t->holds), to_string(t->grade), to_string(t->verdict.state),
                        to_string(t->verdict.growth), t->verdict.converged() ? fmt(t->verdict.limit) : ""});
  emit(s, "classify", body, csv);
}

void cmd_moments(const Shared& s) {
  const ZooModel m = load_model(s);
  const Schedule sch = parse_schedule(s, *m.spec);
  const TargetSet H = parse_H(s.H);
  if (s.L < 1) throw ModelError("--L must be >= 1");
  json sweeps = json::array();
  Csv csv{{"kind", "N", "h_max", "interior_max", "status"}, {}};
  for (int l = 1; l <= s.L; ++l) {
    SweepKind kind = l == 1 ? SweepKind(OrdinaryKind{}) : SweepKind(LadderKind{l});
    const MomentSweep sw = truncation_sweep(*m.spec, H, kind, sch);
    json j = to_json(sw);
    if (sw.levels.size() >= 3) {
      j["h_verdict"] = to_json(h_verdict(sw));
      j["interior_verdict"] = to_json(interior_verdict(sw));
    }
    sweeps.push_back(j);
    for (std::size_t k = 0; k < sw.levels.size(); ++k) {
      const auto& lv = sw.levels[k];
      csv.rows.push_back({describe(kind), fmt(lv.N), fmt(lv.h_max), fmt(lv.interior_max),
                          j["levels"][k]["status"].get<std::string>()});
    }
  }
  emit(s, "moments", json{{"model", m.spec->id()}, {"H", H.members}, {"sweeps", sweeps}}, csv);
}

void cmd_expmoment(const Shared& s) {
  const ZooModel m = load_model(s);
  if (m.spec->kind() == ChainKind::discrete) throw ModelError("exponential moments need a continuous chain");
  const Schedule sch = parse_schedule(s, *m.spec);
  const TargetSet H = parse_H(s.H);
  std::vector<double> grid = parse_doubles(s.lambda_grid);
  if (grid.empty()) grid = default_lambda_grid(inf_total_rate(*m.spec, sch.levels.back()).value);
  const ExpMomentCurve c = exp_moment_scan(*m.spec, H, grid, sch);
  Csv csv{{"lambda", "N", "x0"}, {}};
  for (const auto& p : c.points)
    for (const auto& lv : p.sweep.levels) csv.rows.push_back({fmt(p.lambda), fmt(lv.N), fmt(lv.h_max)});
  json body = to_json(c);
  body["model"] = m.spec->id();
  emit(s, "expmoment", body, csv);
}

void cmd_sbp(const Shared& s, std::size_t K) {
  const ZooModel m = load_model(s);
  if (!m.single_birth) throw ModelError(m.name + " is not a single birth model");
  const SingleBirthTableau t = build_tableau(*m.single_birth, K);
  const ErgodicityExplicit erg = ergodicity_explicit(t);
  std::optional<StrongExplicit> strong;
  if (erg.verdict.converged()) strong = strong_explicit(t, erg);
  const BoundednessVerdict rec = recurrence_explicit(t);
  json body = single_birth_json(t, erg, strong, rec);
  body["model"] = m.spec->id();
  Csv csv{{"k", "sum_F0", "sum_d", "d_sup"}, {}};
  for (auto k : t.checkpoints())
    csv.rows.push_back({fmt(k), fmt(double(t.S[k])), fmt(double(t.D[k])), fmt(t.d_sup[k])});
  emit(s, "sbp", body, csv);
}

Csv witness_csv(const WitnessSequence& w) {
  Csv csv{{"term", "state", "value"}, {}};
  for (std::size_t n = 0; n < w.terms.size(); ++n)
    for (auto [i, v] : w.terms[n].support) csv.rows.push_back({fmt(n), fmt(i), fmt(v)});
  return csv;
}

int cmd_witness_gen(const Shared& s, const std::string& kind_name, std::size_t count) {
  const ZooModel m = load_model(s);
  const TargetSet H = parse_H(s.H);
  const WitnessKind kind = parse_witness_kind(kind_name);
  if (count == 0) throw ModelError("--count must be positive");
  switch (kind) {
    case WitnessKind::non_ergodic:
    case WitnessKind::non_strong: {
      const Schedule sch = parse_schedule(s, *m.spec);
      const WitnessSequence w = kind == WitnessKind::non_ergodic ? gen_nonergodic_witness(*m.spec, H, count, sch)
                                                                 : gen_nonstrong_witness(*m.spec, H, count, sch);
      emit(s, "witness gen", json{{"witness", to_json(w)}}, witness_csv(w));
      return 0;
    }
    case WitnessKind::non_exponential: {
      const NonexpResult r = gen_nonexp_witness(*m.spec, H, count);
      json body = to_json(r);
      body["witness"] = to_json(r.sequence);
      Csv csv{{"n", "N", "lambda", "x0", "relative_gap", "reduced"}, {}};
      for (const auto& t : r.info)
        csv.rows.push_back({fmt(t.n), fmt(t.N), fmt(t.lambda), fmt(t.x0), fmt(t.relative_gap), t.reduced ? "1" : "0"});
      emit(s, "witness gen", body, csv);
      return 0;
    }
    case WitnessKind::non_algebraic:
      throw ModelError("non_algebraic witnesses are checked, not generated");
  }
  return 0;
}

void cmd_witness_check(const Shared& s, const std::string& file) {
  const ZooModel m = load_model(s);
  const WitnessSequence w = witness_from_json(parse_json_arg("@" + file));
  WitnessOptions opt;
  opt.tol = s.tol;
  const WitnessReport r = verify_witness(*m.spec, parse_H(s.H), w, opt);
  Csv csv{{"term", "max_violation", "worst_state", "statistic"}, {}};
  for (std::size_t n = 0; n < r.terms.size(); ++n)
    csv.rows.push_back({fmt(n), fmt(r.terms[n].max_violation), fmt(r.terms[n].worst_state), fmt(r.terms[n].statistic)});
  emit(s, "witness check", to_json(r), csv);
}

void cmd_simulate(const Shared& s, StateIndex start, std::size_t samples, const std::string& orders,
                  std::size_t max_jumps) {
  const ZooModel m = load_model(s);
  std::vector<int> ord;
  for (double d : parse_doubles(orders)) ord.push_back(int(d));
  SimOptions opt;
  opt.max_jumps = max_jumps;
  const SimulationReport r =
      estimate_moments(*m.spec, parse_H(s.H), start, ord, parse_doubles(s.lambda_grid), samples, s.seed, opt);
  Csv csv{{"quantity", "order", "lambda", "mean", "se", "samples", "unstable"}, {}};
  for (const auto& e : r.estimates)
    csv.rows.push_back({e.quantity, fmt(e.order), fmt(e.lambda), e.available ? fmt(e.mean) : "",
                        e.available ? fmt(e.se) : "", fmt(e.samples), e.unstable ? "1" : "0"});
  json body = to_json(r);
  body["model"] = m.spec->id();
  emit(s, "simulate", body, csv);
}

void cmd_zoo_list(const Shared& s) {
  json list = json::array();
  Csv csv{{"name", "id", "recurrent", "ergodic", "exponential", "strong"}, {}};
  auto b = [](const std::optional<bool>& x) { return x ? (*x ? "yes" : "no") : "?"; };
  for (const auto& m : zoo_catalog()) {
    list.push_back(zoo_entry(m));
    csv.rows.push_back({m.name, m.spec->id(), b(m.asserted.recurrent), b(m.asserted.ergodic),
                        b(m.asserted.exponential), b(m.asserted.strong)});
  }
  emit(s, "zoo list", json{{"models", list}}, csv);
}

void cmd_zoo_levels(const Shared& s, const std::string& which, const std::string& family, std::size_t n_max,
                    std::size_t i_max) {
  LevelCheckReport r;
  const json p = s.params.empty() ? json::object() : parse_json_arg(s.params);
  if (which == "brussel") {
    const double la = p.value("lambda1_atilde", 1.0), l4 = p.value("lambda4", 1.0);
    if (family != "log_level" && family != "increment") throw ModelError("brussel families: log_level, increment");
    r = brussel_level_check(la, l4, family == "log_level" ? BrusselFamily::log_level : BrusselFamily::increment,
                            n_max, i_max, s.tol);
  } else if (which == "multi_gamma") {
    MultiGammaFamily f;
    if (family == "power") f = MultiGammaFamily::power;
    else if (family == "loglog") f = MultiGammaFamily::loglog;
    else if (family == "harmonic") f = MultiGammaFamily::harmonic;
    else throw ModelError("multi_gamma families: power, loglog, harmonic");
    const double gamma = s.gamma.value_or(f == MultiGammaFamily::harmonic ? 1.0 : 2.0);
    r = multi_gamma_level_check(gamma, f, n_max, i_max, s.tol);
  } else {
    throw ModelError("level checks exist for brussel and multi_gamma");
  }
  Csv csv{{"n", "statistic"}, {}};
  for (std::size_t k = 0; k < r.stat_n.size(); ++k) csv.rows.push_back({fmt(r.stat_n[k]), fmt(r.statistic[k])});
  json body = to_json(r);
  body.erase("seconds");
  emit(s, "zoo levels", body, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergo: ergodicity classification of countable Markov chains"};
  app.require_subcommand(1);
  Shared s;

  auto* classify_cmd = app.add_subcommand("classify", "run the hierarchy classifier");
  add_shared(classify_cmd, s);
  classify_cmd->add_option("--L", s.L, "highest algebraic order");
  classify_cmd->add_option("--lambda-grid", s.lambda_grid, "comma list of lambdas for the exponential tier");
  std::string transience;
  classify_cmd->add_option("--transience-certificate", transience, "z vector, inline JSON or @file");

  auto* moments_cmd = app.add_subcommand("moments", "truncation sweeps of return-time moments");
  add_shared(moments_cmd, s);
  moments_cmd->add_option("--L", s.L, "moments of order 1..L");

  auto* exp_cmd = app.add_subcommand("expmoment", "exponential functional over a lambda grid");
  add_shared(exp_cmd, s);
  exp_cmd->add_option("--lambda-grid", s.lambda_grid, "comma list of lambdas");

  auto* sbp_cmd = app.add_subcommand("sbp", "explicit single birth criteria");
  add_shared(sbp_cmd, s);
  std::size_t K = 1 << 16;
  sbp_cmd->add_option("--K", K, "tableau rows");

  auto* witness_cmd = app.add_subcommand("witness", "generate or check witness sequences");
  witness_cmd->require_subcommand(1);
  auto* gen_cmd = witness_cmd->add_subcommand("gen", "generate a witness");
  add_shared(gen_cmd, s);
  std::string kind = "non_ergodic";
  std::size_t count = 10;
  gen_cmd->add_option("--kind", kind, "non_ergodic, non_strong or non_exponential");
  gen_cmd->add_option("--count", count, "number of terms");
  auto* check_cmd = witness_cmd->add_subcommand("check", "verify a witness file");
  add_shared(check_cmd, s);
  std::string witness_file;
  check_cmd->add_option("--witness", witness_file, "witness JSON file")->required();
  check_cmd->add_option("--tol", s.tol, "normalized violation tolerance");

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo return-time moments");
  add_shared(sim_cmd, s);
  StateIndex start = 0;
  std::size_t samples = 10000, max_jumps = 10'000'000;
  std::string orders = "1";
  sim_cmd->add_option("--start", start, "initial state");
  sim_cmd->add_option("--samples", samples, "number of samples (>= 100)");
  sim_cmd->add_option("--orders", orders, "moment orders, comma list");
  sim_cmd->add_option("--lambda-grid", s.lambda_grid, "lambdas for the exponential functional");
  sim_cmd->add_option("--seed", s.seed, "RNG seed");
  sim_cmd->add_option("--max-jumps", max_jumps, "censoring threshold");

  auto* zoo_cmd = app.add_subcommand("zoo", "model catalog");
  zoo_cmd->require_subcommand(1);
  auto* list_cmd = zoo_cmd->add_subcommand("list", "list catalog models");
  add_shared(list_cmd, s, false);
  auto* levels_cmd = zoo_cmd->add_subcommand("levels", "level-reduction inequality checks");
  add_shared(levels_cmd, s, false);
  std::string which = "brussel", lfamily = "log_level";
  std::size_t n_max = 1000, i_max = 10000;
  levels_cmd->add_option("--model", which, "brussel or multi_gamma");
  levels_cmd->add_option("--family", lfamily, "test-function family");
  levels_cmd->add_option("--params", s.params, "rates, inline JSON or @file");
  levels_cmd->add_option("--gamma", s.gamma, "multi_gamma exponent");
  levels_cmd->add_option("--n-max", n_max);
  levels_cmd->add_option("--i-max", i_max);
  levels_cmd->add_option("--tol", s.tol);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*classify_cmd) cmd_classify(s, transience);
    else if (*moments_cmd) cmd_moments(s);
    else if (*exp_cmd) cmd_expmoment(s);
    else if (*sbp_cmd) cmd_sbp(s, K);
    else if (*gen_cmd) return cmd_witness_gen(s, kind, count);
    else if (*check_cmd) cmd_witness_check(s, witness_file);
    else if (*sim_cmd) cmd_simulate(s, start, samples, orders, max_jumps);
    else if (*list_cmd) cmd_zoo_list(s);
    else if (*levels_cmd) cmd_zoo_levels(s, which, lfamily, n_max, i_max);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
