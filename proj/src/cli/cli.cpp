#include "modae/cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "modae/assess/front.hpp"
#include "modae/assess/hitting.hpp"
#include "modae/core/error.hpp"
#include "modae/pddl/pddl.hpp"
#include "modae/planner/planner.hpp"
#include "modae/tuner/tuner.hpp"
#include "modae/zeno/zeno.hpp"

namespace modae::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t parse_seed(const std::string& s) {
  std::uint64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw Error("invalid seed '" + s + "'");
  return v;
}

// ---- instances ----

struct InstanceSpec {
  std::string variant = "lin";
  int passengers = 3;
  std::string mode = "cost";
  std::string domain;
  std::string problem;

  bool external() const { return !domain.empty() || !problem.empty(); }

  json to_json() const {
    if (!external()) return {{"variant", variant}, {"passengers", passengers}, {"mode", mode}};
    return {{"domain", domain},
            {"problem", problem},
            {"domain_fnv1a", hex64(fnv1a(read_file(domain)))},
            {"problem_fnv1a", hex64(fnv1a(read_file(problem)))}};
  }

  static InstanceSpec from_json(const json& j) {
    InstanceSpec s;
    if (j.contains("domain")) {
      s.domain = j.at("domain").get<std::string>();
      s.problem = j.at("problem").get<std::string>();
      if (hex64(fnv1a(read_file(s.domain))) != j.at("domain_fnv1a").get<std::string>() ||
          hex64(fnv1a(read_file(s.problem))) != j.at("problem_fnv1a").get<std::string>()) {
        throw Error("PDDL files changed since the manifest was written");
      }
    } else {
      s.variant = j.at("variant").get<std::string>();
      s.passengers = j.at("passengers").get<int>();
      s.mode = j.at("mode").get<std::string>();
    }
    return s;
  }

  zeno::ZenoConfig zeno_config() const {
    auto v = zeno::variant_from_string(variant);
    if (v == zeno::Variant::Custom) throw Error("the custom variant has no command-line form");
    auto cfg = zeno::default_config(v, passengers, planning::objective_mode_from_string(mode));
    zeno::validate(cfg);
    return cfg;
  }

  planning::GroundedTask load() const {
    std::string d, p;
    if (external()) {
      if (domain.empty() || problem.empty()) throw Error("--domain and --problem go together");
      d = read_file(domain);
      p = read_file(problem);
    } else {
      auto pair = zeno::generate(zeno_config());
      d = std::move(pair.domain);
      p = std::move(pair.problem);
    }
    auto dom = pddl::parse_domain(d);
    return pddl::ground(dom, pddl::parse_problem(p, dom));
  }
};

void add_instance_options(CLI::App* app, InstanceSpec& s) {
  app->add_option("--variant", s.variant, "MultiZeno variant: lin, cvx or ccve")->capture_default_str();
  app->add_option("--passengers", s.passengers, "MultiZeno passengers")->capture_default_str();
  app->add_option("--mode", s.mode, "cost or risk")->capture_default_str();
  app->add_option("--domain", s.domain, "PDDL domain file (instead of a MultiZeno instance)");
  app->add_option("--problem", s.problem, "PDDL problem file");
}

// Exact front of a MultiZeno instance; the makespan bound grows until the
// whole front fits under it.
zeno::ExactFront oracle_front(const InstanceSpec& s, const planning::GroundedTask& task,
                              planning::Ticks bound) {
  if (s.external()) throw Error("the oracle only handles MultiZeno instances");
  const auto cfg = s.zeno_config();
  if (bound <= 0) bound = 12 * static_cast<planning::Ticks>(cfg.passengers);
  for (;;) {
    try {
      return zeno::exact_front(cfg, task, bound);
    } catch (const zeno::IncompleteFrontError&) {
      bound *= 2;
    }
  }
}

// ---- engine settings ----

struct RunSpec {
  InstanceSpec instance;
  dae::EvoParams params;
  std::int64_t budget = 0;  // evolve: per run; aggregate: per repetition (all α-runs)
  double seconds = 0;
  planner::SearchBudget per_call;
  int reps = 11;
  std::uint64_t seed = 0;
  std::vector<double> alphas;
  std::vector<ObjectiveVector> stop_at;

  json to_json() const {
    json j{{"instance", instance.to_json()},
           {"params", json::parse(write_params(params))},
           {"budget_nodes", budget},
           {"budget_seconds", seconds},
           {"per_call", {{"nodes", per_call.max_expanded_nodes}, {"states", per_call.max_evaluated_states}}},
           {"reps", reps},
           {"seed", std::to_string(seed)}};
    if (!alphas.empty()) j["alphas"] = alphas;
    if (!stop_at.empty()) {
      json a = json::array();
      for (const auto& v : stop_at) a.push_back({v.makespan, v.secondary});
      j["stop_at"] = a;
    }
    return j;
  }

  static RunSpec from_json(const json& j) {
    RunSpec s;
    s.instance = InstanceSpec::from_json(j.at("instance"));
    s.params = read_params(j.at("params").dump());
    s.budget = j.at("budget_nodes").get<std::int64_t>();
    s.seconds = j.at("budget_seconds").get<double>();
    s.per_call.max_expanded_nodes = j.at("per_call").at("nodes").get<std::int64_t>();
    s.per_call.max_evaluated_states = j.at("per_call").at("states").get<std::int64_t>();
    s.reps = j.at("reps").get<int>();
    s.seed = parse_seed(j.at("seed").get<std::string>());
    if (j.contains("alphas")) s.alphas = j.at("alphas").get<std::vector<double>>();
    if (j.contains("stop_at")) {
      for (const auto& v : j.at("stop_at")) s.stop_at.push_back({v[0].get<planning::Ticks>(), v[1].get<planning::Ticks>()});
    }
    return s;
  }

  void validate() const {
    if (reps < 1) throw Error("--reps must be at least 1");
    if (budget <= 0 && seconds <= 0) throw Error("a node budget or a wall-clock budget is required");
    if (budget < 0 || seconds < 0) throw Error("budgets must be non-negative");
    params.validate();
  }

  moea::EngineConfig engine(std::int64_t nodes, double secs) const {
    moea::EngineConfig c;
    c.params = params;
    c.budget = nodes > 0 ? nodes : std::numeric_limits<std::int64_t>::max();
    c.wall_seconds = secs;
    c.per_call = per_call;
    c.stop_when_found = stop_at;
    return c;
  }
};

struct RunOptions {
  std::string params_file;
  std::int64_t budget = 0;
  double seconds = 0;
  std::int64_t per_call_nodes = 2000;
  std::int64_t per_call_states = 20000;
  int reps = 11;
  std::string seed;
  std::string manifest;
  std::string out = ".";
  int workers = 0;
};

void add_run_options(CLI::App* app, RunOptions& o, bool reps) {
  app->add_option("--seed", o.seed, "master seed (mandatory unless --manifest)");
  app->add_option("--params", o.params_file, "JSON file of EvoParams values");
  app->add_option("--seconds", o.seconds, "wall-clock budget (not reproducible)");
  app->add_option("--call-nodes", o.per_call_nodes, "expanded-node limit per planner call")->capture_default_str();
  app->add_option("--call-states", o.per_call_states, "evaluated-state limit per planner call")->capture_default_str();
  if (reps) app->add_option("--reps", o.reps, "repetitions")->capture_default_str();
  app->add_option("--manifest", o.manifest, "rerun exactly what a manifest describes");
  app->add_option("--out", o.out, "output directory")->capture_default_str();
  app->add_option("--workers", o.workers, "worker threads (default: MODAE_WORKERS or 1)");
}

int worker_count(const RunOptions& o) { return o.workers > 0 ? o.workers : moea::workers_from_env(); }

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

// Fills a RunSpec from the command line, or from a manifest of the given command.
RunSpec resolve(const InstanceSpec& inst, const RunOptions& o, const std::string& command) {
  if (!o.manifest.empty()) {
    auto m = read_json_file(o.manifest);
    if (m.at("command").get<std::string>() != command) {
      throw Error("manifest was written by '" + m.at("command").get<std::string>() + "', not '" + command + "'");
    }
    return RunSpec::from_json(m.at("spec"));
  }
  if (o.seed.empty()) throw Error("--seed is required");
  RunSpec s;
  s.instance = inst;
  if (!o.params_file.empty()) s.params = read_params(read_file(o.params_file));
  s.budget = o.budget;
  s.seconds = o.seconds;
  s.per_call = {o.per_call_nodes, o.per_call_states};
  s.reps = o.reps;
  s.seed = parse_seed(o.seed);
  return s;
}

std::string rep_name(int r) {
  std::ostringstream os;
  os << "run-" << std::setw(2) << std::setfill('0') << r;
  return os.str();
}

void write_manifest(const fs::path& dir, const std::string& command, const RunSpec& spec,
                    const std::string& digest, const json& runs, const json& extra = {}) {
  json m{{"command", command},
         {"version", std::string(kVersion)},
         {"spec", spec.to_json()},
         {"config_digest", digest},
         {"reproducible", spec.seconds <= 0},
         {"runs", runs}};
  for (const auto& [k, v] : extra.items()) m[k] = v;
  write_file((dir / "manifest.json").string(), m.dump(2) + "\n");
}

// ---- subcommands ----

int cmd_generate(const InstanceSpec& inst, const std::string& out, std::ostream& os) {
  if (inst.external()) throw Error("generate builds MultiZeno instances only");
  auto pair = zeno::generate(inst.zeno_config());
  fs::create_directories(out);
  write_file((fs::path(out) / "domain.pddl").string(), pair.domain);
  write_file((fs::path(out) / "problem.pddl").string(), pair.problem);
  os << "wrote " << (fs::path(out) / "domain.pddl").string() << " and "
     << (fs::path(out) / "problem.pddl").string() << '\n';
  return 0;
}

int cmd_oracle(const InstanceSpec& inst, planning::Ticks bound, const std::string& out,
               bool with_plans, std::ostream& os) {
  const auto task = inst.load();
  const auto units = Units::of(task);
  const auto f = oracle_front(inst, task, bound);
  for (const auto& p : f.points) {
    os << format_makespan(p.objectives.makespan, units) << ' '
       << format_secondary(p.objectives.secondary, units) << '\n';
    if (with_plans) {
      for (const auto& st : p.plan.steps) {
        os << "  " << format_makespan(st.start, units) << ": " << task.action(st.action).name << '\n';
      }
    }
  }
  if (!out.empty()) write_file(out, write_front(f.vectors(), units));
  return 0;
}

int cmd_solve(const InstanceSpec& inst, const std::string& strategy, std::int64_t nodes,
              std::uint64_t seed, const std::string& dump, std::ostream& os) {
  const auto task = inst.load();
  if (!dump.empty()) write_file(dump, pddl::dump_grounding(task));
  planner::Strategy s;
  if (strategy == "makespan") s = planner::Strategy::makespan();
  else if (strategy == "cost" || strategy == "risk") s = planner::Strategy::cost();
  else throw Error("unknown strategy '" + strategy + "'");
  auto r = planner::solve(task, s, {nodes, nodes * 10}, seed);
  os << "expanded " << r.expanded << '\n';
  if (!r.plan) {
    os << (r.proven_unreachable ? "unsolvable (relaxation fails)\n" : "no plan within the budget\n");
    return 2;
  }
  const auto units = Units::of(task);
  auto plan = planning::compress(task, *r.plan);
  plan.objectives = planning::validate_and_score(task, plan);
  for (const auto& st : plan.steps) {
    const auto& a = task.action(st.action);
    os << format_makespan(st.start, units) << ": " << a.name << " ["
       << format_makespan(a.duration, units) << "]\n";
  }
  os << "makespan " << format_makespan(plan.objectives.makespan, units) << '\n'
     << planning::to_string(task.mode()) << ' ' << format_secondary(plan.objectives.secondary, units) << '\n';
  return 0;
}

int cmd_evolve(const InstanceSpec& inst, const RunOptions& o, const std::string& stop_front,
               std::ostream& os) {
  RunSpec spec = resolve(inst, o, "evolve");
  if (o.manifest.empty() && !stop_front.empty()) spec.stop_at = read_front(read_file(stop_front)).points;
  spec.validate();
  const auto task = spec.instance.load();
  const auto units = Units::of(task);
  const auto cfg = spec.engine(spec.budget, spec.seconds);
  const int workers = worker_count(o);
  const auto reps = static_cast<std::size_t>(spec.reps);
  std::vector<moea::RunTrace> traces(reps);
  moea::parallel_for(reps, std::min<int>(workers, spec.reps), [&](std::size_t r, int) {
    auto c = cfg;
    c.workers = reps == 1 ? workers : 1;
    traces[r] = moea::evolve_pareto(task, c, moea::derive_seed(spec.seed, 0xe7, r));
  });
  const fs::path dir(o.out);
  fs::create_directories(dir);
  json runs = json::array();
  std::vector<ObjectiveVector> merged;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto file = rep_name(static_cast<int>(r)) + ".jsonl";
    write_file((dir / file).string(), write_trace(traces[r], units));
    runs.push_back({{"rep", r}, {"seed", std::to_string(traces[r].seed)}, {"files", {file}}});
    merged.insert(merged.end(), traces[r].final_population.begin(), traces[r].final_population.end());
    os << rep_name(static_cast<int>(r)) << ": consumed " << traces[r].consumed << ", archive";
    for (const auto& v : traces[r].archive) {
      os << " (" << format_makespan(v.makespan, units) << ',' << format_secondary(v.secondary, units) << ')';
    }
    os << '\n';
  }
  write_file((dir / "front.json").string(), write_front(assess::nondominated(merged), units));
  write_manifest(dir, "evolve", spec, cfg.digest(), runs, {{"kind", "pareto"}});
  return 0;
}

int cmd_aggregate(const InstanceSpec& inst, const RunOptions& o, std::int64_t per_alpha,
                  const std::vector<double>& alphas, std::ostream& os) {
  RunSpec spec = resolve(inst, o, "aggregate");
  if (o.manifest.empty()) {
    spec.alphas = alphas.empty() ? moea::AggregationConfig{}.alphas : alphas;
    if (per_alpha > 0) {
      if (spec.budget > 0) throw Error("give either --budget or --per-alpha-budget");
      spec.budget = per_alpha * static_cast<std::int64_t>(spec.alphas.size());
    }
  }
  spec.validate();
  moea::AggregationConfig agg;
  agg.alphas = spec.alphas;
  agg.validate();
  const auto n = static_cast<std::int64_t>(agg.alphas.size());
  if (spec.budget > 0 && spec.budget % n != 0) {
    throw Error("the total budget must be a multiple of the number of alphas");
  }
  const auto task = spec.instance.load();
  const auto units = Units::of(task);
  const auto cfg = spec.engine(spec.budget / n, spec.seconds / static_cast<double>(n));
  const int workers = worker_count(o);
  const auto reps = static_cast<std::size_t>(spec.reps);
  std::vector<moea::CampaignResult> results(reps);
  moea::parallel_for(reps, std::min<int>(workers, spec.reps), [&](std::size_t r, int) {
    auto c = cfg;
    c.workers = reps == 1 ? workers : 1;
    results[r] = moea::aggregate_campaign(task, c, agg, moea::derive_seed(spec.seed, 0xa9, r));
  });
  const fs::path dir(o.out);
  fs::create_directories(dir);
  json runs = json::array();
  std::vector<ObjectiveVector> merged;
  for (std::size_t r = 0; r < reps; ++r) {
    json files = json::array();
    for (std::size_t k = 0; k < results[r].runs.size(); ++k) {
      std::ostringstream name;
      name << rep_name(static_cast<int>(r)) << "-alpha-" << k << ".jsonl";
      write_file((dir / name.str()).string(), write_trace(results[r].runs[k], units));
      files.push_back(name.str());
    }
    const auto& b = results[r].bounds;
    runs.push_back({{"rep", r},
                    {"files", files},
                    {"bounds", {b.makespan_min, b.makespan_max, b.secondary_min, b.secondary_max}}});
    merged.insert(merged.end(), results[r].front.begin(), results[r].front.end());
    os << rep_name(static_cast<int>(r)) << ": consumed " << results[r].consumed << ", front";
    for (const auto& v : results[r].front) {
      os << " (" << format_makespan(v.makespan, units) << ',' << format_secondary(v.secondary, units) << ')';
    }
    os << '\n';
  }
  write_file((dir / "front.json").string(), write_front(assess::nondominated(merged), units));
  write_manifest(dir, "aggregate", spec, cfg.digest(), runs,
                 {{"kind", "aggregate"}, {"per_alpha_budget", spec.budget / n}});
  return 0;
}

struct TuneArgs {
  int evals = 100;
  int runs_per_eval = 3;
  std::vector<std::string> names;
  std::string front;
  planning::Ticks bound = 0;
};

int cmd_tune(const InstanceSpec& inst, RunOptions o, const TuneArgs& t, std::ostream& os) {
  json extra;
  TuneArgs ta = t;
  if (!o.manifest.empty()) {
    auto m = read_json_file(o.manifest);
    const auto& tj = m.at("tune");
    ta.evals = tj.at("evals").get<int>();
    ta.runs_per_eval = tj.at("runs_per_eval").get<int>();
    ta.names = tj.at("parameters").get<std::vector<std::string>>();
  }
  o.reps = 1;
  RunSpec spec = resolve(inst, o, "tune");
  spec.validate();
  if (ta.evals < 1) throw Error("--evals must be at least 1");
  const auto task = spec.instance.load();
  const auto units = Units::of(task);

  std::vector<ObjectiveVector> front;
  if (!o.manifest.empty()) {
    auto m = read_json_file(o.manifest);
    for (const auto& v : m.at("tune").at("front")) front.push_back({v[0].get<planning::Ticks>(), v[1].get<planning::Ticks>()});
  } else if (!ta.front.empty()) {
    front = read_front(read_file(ta.front)).points;
  } else {
    front = oracle_front(spec.instance, task, ta.bound).vectors();
  }
  if (front.empty()) throw Error("empty reference front");

  const auto space = ta.names.empty() ? tuner::ParamSpace::defaults() : tuner::ParamSpace::subset(ta.names);
  space.validate();
  std::vector<std::string> names;
  for (const auto& p : space.parameters) names.push_back(p.name);

  const auto cfg = spec.engine(spec.budget, spec.seconds);
  const int workers = worker_count(o);
  tuner::TuneOptions opt;
  opt.budget = ta.evals;
  opt.allowed = [&](const tuner::ParamConfig& c) {
    auto p = tuner::to_params(space, c, spec.params);
    return p.w_makespan + p.w_cost > 0;
  };
  auto score = [&](const tuner::ParamConfig& c) {
    auto e = cfg;
    e.params = tuner::to_params(space, c, spec.params);
    return tuner::score_config(task, front, e, ta.runs_per_eval, moea::derive_seed(spec.seed, 0x7a), workers);
  };
  const auto initial = tuner::nearest(space, spec.params);
  const auto result = tuner::tune(space, initial, score, opt, moea::derive_seed(spec.seed, 0x75));

  const fs::path dir(o.out);
  fs::create_directories(dir);
  std::ostringstream hist;
  for (const auto& e : result.history) {
    json c;
    for (std::size_t i = 0; i < names.size(); ++i) c[names[i]] = space.parameters[i].values[e.config.index[i]];
    hist << json{{"config", c}, {"score", e.score}}.dump() << '\n';
  }
  write_file((dir / "tune-history.jsonl").string(), hist.str());
  const auto best = tuner::to_params(space, result.best, spec.params);
  write_file((dir / "best.json").string(), write_params(best));
  json fr = json::array();
  for (const auto& v : front) fr.push_back({v.makespan, v.secondary});
  write_manifest(dir, "tune", spec, cfg.digest(), json::array(),
                 {{"tune", {{"evals", ta.evals}, {"runs_per_eval", ta.runs_per_eval}, {"parameters", names}, {"front", fr}}}});
  os << "evaluated " << result.history.size() << " configurations, best mean I_H- " << num(result.best_score) << '\n';
  for (const auto& n : names) os << "  " << n << " = " << num(tuner::get_parameter(best, n)) << '\n';
  (void)units;
  return 0;
}

std::vector<moea::RunTrace> load_traces(const std::vector<std::string>& files, Units& units) {
  std::vector<moea::RunTrace> out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto t = read_trace(read_file(files[i]));
    if (i == 0) units = t.units;
    else if (!(t.units == units)) throw Error(files[i] + ": objective units differ from " + files[0]);
    out.push_back(std::move(t.trace));
  }
  return out;
}

LoadedFront load_front_for(const std::string& path, const Units& units) {
  auto f = read_front(read_file(path));
  if (!(f.units == units)) throw Error(path + ": objective units differ from the traces");
  return f;
}

std::string hitting_csv(const assess::HittingCdf& cdf) {
  std::ostringstream os;
  os << "budget,target,fraction\n";
  auto put = [&](const assess::HittingCurve& c) {
    for (const auto& [b, f] : c.steps) os << b << ",\"" << c.label << "\"," << num(f) << '\n';
  };
  for (const auto& c : cdf.points) put(c);
  put(cdf.whole_front);
  return os.str();
}

int cmd_assess_hv(const std::vector<std::string>& files, const std::string& front_path,
                  const std::string& out, std::ostream& os) {
  Units units;
  auto traces = load_traces(files, units);
  auto front = load_front_for(front_path, units).points;
  std::ostringstream csv;
  csv << "trace,consumed,final_ihv\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    csv << files[i] << ',' << traces[i].consumed << ','
        << num(assess::unary_hv_diff(traces[i].archive, front)) << '\n';
  }
  if (out.empty()) os << csv.str();
  else write_file(out, csv.str());
  return 0;
}

int cmd_assess_hitting(const std::vector<std::string>& files, const std::string& front_path,
                       const std::string& out, std::ostream& os) {
  Units units;
  auto traces = load_traces(files, units);
  auto front = load_front_for(front_path, units).points;
  const auto csv = hitting_csv(assess::hitting_cdf(traces, front));
  if (out.empty()) os << csv;
  else write_file(out, csv);
  return 0;
}

int cmd_report(const std::string& run_dir, const std::string& compare_dir,
               const std::string& front_path, const std::string& out, std::ostream& os) {
  if (front_path.empty()) throw Error("report needs --front");
  const auto runs = load_run_set(run_dir);
  const auto front = load_front_for(front_path, runs.units).points;
  std::optional<RunSet> other;
  if (!compare_dir.empty()) {
    other = load_run_set(compare_dir);
    if (!(other->units == runs.units)) throw Error("compared run sets use different objective units");
  }
  const auto rep = make_report(runs, front, other ? &*other : nullptr);
  const fs::path dir(out);
  fs::create_directories(dir);
  write_file((dir / "hv.csv").string(), rep.hv_csv);
  write_file((dir / "hitting.csv").string(), rep.hitting_csv);
  write_file((dir / "scatter.csv").string(), rep.scatter_csv);
  write_file((dir / "merged.csv").string(), rep.merged_csv);
  write_file((dir / "summary.json").string(), rep.summary_json);
  double mean = 0;
  for (double v : rep.final_ihv) mean += v;
  mean /= static_cast<double>(rep.final_ihv.size());
  os << "runs " << rep.final_ihv.size() << ", whole front found in " << rep.front_hits
     << ", mean final I_H- " << num(mean) << '\n';
  if (rep.wilcoxon_p) os << "wilcoxon p " << num(*rep.wilcoxon_p) << '\n';
  return 0;
}

}  // namespace

// ---- reports ----

moea::RunTrace combine_alpha_runs(const std::vector<moea::RunTrace>& runs) {
  if (runs.empty()) throw ContractViolation("no runs to combine");
  if (runs.size() == 1) return runs[0];
  const auto n = static_cast<std::int64_t>(runs.size());
  moea::RunTrace out;
  out.seed = runs[0].seed;
  out.config_digest = runs[0].config_digest;
  out.engine = "aggregate";
  std::vector<moea::TraceEvent> all;
  for (const auto& r : runs) {
    for (const auto& e : r.events) all.push_back({e.budget * n, e.point});
    out.consumed += r.consumed;
    out.generations += r.generations;
    out.evaluations += r.evaluations;
    out.final_population.insert(out.final_population.end(), r.final_population.begin(), r.final_population.end());
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.budget < b.budget; });
  for (const auto& e : all) {
    const bool covered = std::any_of(out.archive.begin(), out.archive.end(), [&](const ObjectiveVector& a) {
      return a == e.point || moea::dominates(a, e.point);
    });
    if (covered) continue;
    std::erase_if(out.archive, [&](const ObjectiveVector& a) { return moea::dominates(e.point, a); });
    out.archive.push_back(e.point);
    out.events.push_back(e);
  }
  std::sort(out.archive.begin(), out.archive.end());
  out.stopped_early = std::all_of(runs.begin(), runs.end(), [](const auto& r) { return r.stopped_early; });
  return out;
}

RunSet load_run_set(const std::string& dir) {
  const fs::path base(dir);
  const auto m = read_json_file((base / "manifest.json").string());
  RunSet set;
  set.kind = m.at("kind").get<std::string>();
  bool first = true;
  for (const auto& r : m.at("runs")) {
    std::vector<moea::RunTrace> parts;
    for (const auto& f : r.at("files")) {
      auto t = read_trace(read_file((base / f.get<std::string>()).string()));
      if (first) set.units = t.units;
      else if (!(t.units == set.units)) throw Error(dir + ": traces use different objective units");
      first = false;
      parts.push_back(std::move(t.trace));
    }
    set.runs.push_back(combine_alpha_runs(parts));
  }
  if (set.runs.empty()) throw Error(dir + ": manifest lists no runs");
  return set;
}

Report make_report(const RunSet& set, const std::vector<ObjectiveVector>& front, const RunSet* compare) {
  if (front.empty()) throw Error("empty reference front");
  if (set.runs.empty()) throw Error("no runs to report");
  Report rep;
  const auto& units = set.units;

  std::vector<std::int64_t> budgets{0};
  for (const auto& r : set.runs) {
    for (const auto& e : r.events) budgets.push_back(e.budget);
    budgets.push_back(r.consumed);
  }
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());

  std::ostringstream hv;
  hv << "budget";
  for (std::size_t i = 0; i < set.runs.size(); ++i) hv << ',' << rep_name(static_cast<int>(i));
  hv << ",mean\n";
  for (auto b : budgets) {
    hv << b;
    double sum = 0;
    for (const auto& r : set.runs) {
      const double d = assess::unary_hv_diff(r.archive_at(b), front);
      sum += d;
      hv << ',' << num(d);
    }
    hv << ',' << num(sum / static_cast<double>(set.runs.size())) << '\n';
  }
  rep.hv_csv = hv.str();

  rep.hitting_csv = hitting_csv(assess::hitting_cdf(set.runs, front));

  std::ostringstream sc;
  sc << "run,makespan,secondary\n";
  std::vector<ObjectiveVector> merged;
  for (std::size_t i = 0; i < set.runs.size(); ++i) {
    for (const auto& v : set.runs[i].final_population) {
      sc << rep_name(static_cast<int>(i)) << ',' << format_makespan(v.makespan, units) << ','
         << format_secondary(v.secondary, units) << '\n';
      merged.push_back(v);
    }
  }
  rep.scatter_csv = sc.str();
  std::ostringstream mc;
  mc << "makespan,secondary\n";
  for (const auto& v : assess::nondominated(merged)) {
    mc << format_makespan(v.makespan, units) << ',' << format_secondary(v.secondary, units) << '\n';
  }
  rep.merged_csv = mc.str();

  auto finals = [&](const RunSet& s, int& hits) {
    std::vector<double> v;
    hits = 0;
    for (const auto& r : s.runs) {
      v.push_back(assess::unary_hv_diff(r.archive, front));
      hits += std::all_of(front.begin(), front.end(), [&](const ObjectiveVector& p) {
        return std::find(r.archive.begin(), r.archive.end(), p) != r.archive.end();
      });
    }
    return v;
  };
  auto summary = [&](const RunSet& s, const std::vector<double>& v, int hits) {
    json runs = json::array();
    double sum = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      runs.push_back({{"run", rep_name(static_cast<int>(i))}, {"final_ihv", num(v[i])}, {"consumed", s.runs[i].consumed}});
      sum += v[i];
    }
    return json{{"kind", s.kind},
                {"runs", runs},
                {"mean_final_ihv", num(sum / static_cast<double>(v.size()))},
                {"front_hits", hits}};
  };
  rep.final_ihv = finals(set, rep.front_hits);
  json j = summary(set, rep.final_ihv, rep.front_hits);
  if (compare != nullptr) {
    if (compare->runs.size() != set.runs.size()) throw Error("compared run sets differ in size");
    int hits = 0;
    const auto other = finals(*compare, hits);
    rep.wilcoxon_p = assess::wilcoxon_signed_rank(rep.final_ihv, other);
    j["compare"] = summary(*compare, other, hits);
    j["wilcoxon_p"] = num(*rep.wilcoxon_p);
  }
  rep.summary_json = j.dump(2) + "\n";
  return rep;
}

// ---- command line ----

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-objective Divide-and-Evolve planning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  InstanceSpec inst;
  RunOptions ro;
  std::string out_path, front_path, compare_dir, strategy = "makespan", dump, stop_front;
  planning::Ticks bound = 0;
  std::int64_t nodes = 100000, per_alpha = 0;
  std::string seed_text = "0";
  bool plans = false;
  std::vector<double> alphas;
  std::vector<std::string> files;
  std::string run_dir;
  TuneArgs ta;

  auto* gen = app.add_subcommand("generate", "write a MultiZeno domain and problem");
  add_instance_options(gen, inst);
  gen->add_option("--out", out_path, "output directory")->required();

  auto* orc = app.add_subcommand("oracle", "exact Pareto front of a MultiZeno instance");
  add_instance_options(orc, inst);
  orc->add_option("--bound", bound, "initial makespan bound in ticks (doubled until sufficient)");
  orc->add_option("--out", out_path, "write the front as JSON");
  orc->add_flag("--plans", plans, "print a witness plan per point");

  auto* sol = app.add_subcommand("solve", "run the embedded planner on a whole instance");
  add_instance_options(sol, inst);
  sol->add_option("--strategy", strategy, "makespan or cost")->capture_default_str();
  sol->add_option("--nodes", nodes, "expanded-node limit")->capture_default_str();
  sol->add_option("--seed", seed_text, "tie-breaking seed")->capture_default_str();
  sol->add_option("--dump-ground", dump, "write the grounded task listing");

  auto* evo = app.add_subcommand("evolve", "Pareto-based runs");
  add_instance_options(evo, inst);
  add_run_options(evo, ro, true);
  evo->add_option("--budget", ro.budget, "expanded nodes per run");
  evo->add_option("--stop-at-front", stop_front, "stop a run once its archive holds this front");

  auto* agg = app.add_subcommand("aggregate", "aggregation-based runs (one α-run per alpha)");
  add_instance_options(agg, inst);
  add_run_options(agg, ro, true);
  agg->add_option("--budget", ro.budget, "expanded nodes per repetition, split evenly over the alphas");
  agg->add_option("--per-alpha-budget", per_alpha, "expanded nodes per α-run");
  agg->add_option("--alphas", alphas, "alpha values")->delimiter(',');

  auto* tun = app.add_subcommand("tune", "iterated local search over the parameter grid");
  add_instance_options(tun, inst);
  add_run_options(tun, ro, false);
  tun->add_option("--budget", ro.budget, "expanded nodes per run");
  tun->add_option("--evals", ta.evals, "distinct configurations to score")->capture_default_str();
  tun->add_option("--runs-per-eval", ta.runs_per_eval, "runs per configuration")->capture_default_str();
  tun->add_option("--parameters", ta.names, "parameters to tune (default: all)")->delimiter(',');
  tun->add_option("--front", ta.front, "reference front JSON (default: the oracle front)");
  tun->add_option("--bound", ta.bound, "initial oracle makespan bound");

  auto* ass = app.add_subcommand("assess", "indicators from trace files");
  ass->require_subcommand(1);
  auto* ahv = ass->add_subcommand("hv", "final unary hypervolume difference per trace");
  ahv->add_option("--front", front_path, "true front JSON")->required();
  ahv->add_option("--out", out_path, "CSV file (default: stdout)");
  ahv->add_option("traces,--runs", files, "trace files")->required();
  auto* ahit = ass->add_subcommand("hitting", "hitting-time CDFs as CSV");
  ahit->add_option("--front", front_path, "true front JSON")->required();
  ahit->add_option("--out", out_path, "CSV file (default: stdout)");
  ahit->add_option("traces,--runs", files, "trace files")->required();

  auto* rpt = app.add_subcommand("report", "CSV/JSON tables for a run directory");
  rpt->add_option("runs", run_dir, "evolve or aggregate output directory")->required();
  rpt->add_option("--front", front_path, "true front JSON");
  rpt->add_option("--compare", compare_dir, "second run directory for the rank test");
  rpt->add_option("--out", out_path, "output directory")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (app.got_subcommand(gen)) return cmd_generate(inst, out_path, out);
    if (app.got_subcommand(orc)) return cmd_oracle(inst, bound, out_path, plans, out);
    if (app.got_subcommand(sol)) return cmd_solve(inst, strategy, nodes, parse_seed(seed_text), dump, out);
    if (app.got_subcommand(evo)) return cmd_evolve(inst, ro, stop_front, out);
    if (app.got_subcommand(agg)) return cmd_aggregate(inst, ro, per_alpha, alphas, out);
    if (app.got_subcommand(tun)) return cmd_tune(inst, ro, ta, out);
    if (app.got_subcommand(ass)) {
      if (ass->got_subcommand(ahv)) return cmd_assess_hv(files, front_path, out_path, out);
      return cmd_assess_hitting(files, front_path, out_path, out);
    }
    if (app.got_subcommand(rpt)) return cmd_report(run_dir, compare_dir, front_path, out_path, out);
  } catch (const std::exception& e) {
    err << "modae: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace modae::cli
