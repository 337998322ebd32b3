#include "modae/cli/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "modae/core/decimal.hpp"
#include "modae/core/error.hpp"
#include "modae/tuner/tuner.hpp"

namespace modae::cli {

using nlohmann::json;

Units Units::of(const planning::GroundedTask& task) {
  const auto& s = task.scales();
  Units u;
  u.mode = task.mode();
  u.time_denominator = s.time_denominator;
  u.secondary_denominator =
      task.mode() == ObjectiveMode::CostSum ? s.cost_denominator : s.risk_denominator;
  return u;
}

std::string format_makespan(planning::Ticks t, const Units& u) {
  return format_scaled(t, u.time_denominator);
}

std::string format_secondary(planning::Ticks t, const Units& u) {
  return format_scaled(t, u.secondary_denominator);
}

namespace {

json units_json(const Units& u) {
  return {{"time_denominator", u.time_denominator},
          {"secondary_denominator", u.secondary_denominator},
          {"mode", std::string(planning::to_string(u.mode))}};
}

Units units_from(const json& j) {
  Units u;
  u.time_denominator = j.at("time_denominator").get<std::int64_t>();
  u.secondary_denominator = j.at("secondary_denominator").get<std::int64_t>();
  u.mode = planning::objective_mode_from_string(j.at("mode").get<std::string>());
  if (u.time_denominator <= 0 || u.secondary_denominator <= 0) throw Error("denominators must be positive");
  return u;
}

json vec(const ObjectiveVector& v) { return json::array({v.makespan, v.secondary}); }

ObjectiveVector vec_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("objective vector must be a pair of integers");
  return {j[0].get<planning::Ticks>(), j[1].get<planning::Ticks>()};
}

json vecs(const std::vector<ObjectiveVector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec(v));
  return a;
}

std::vector<ObjectiveVector> vecs_from(const json& j) {
  std::vector<ObjectiveVector> out;
  for (const auto& e : j) out.push_back(vec_from(e));
  return out;
}

}  // namespace

std::string write_trace(const moea::RunTrace& t, const Units& units) {
  std::ostringstream os;
  json h = units_json(units);
  h["kind"] = "header";
  h["format"] = 1;
  h["seed"] = std::to_string(t.seed);
  h["engine"] = t.engine;
  h["config_digest"] = t.config_digest;
  os << h.dump() << '\n';
  for (const auto& e : t.events) {
    os << json{{"kind", "event"}, {"budget", e.budget}, {"point", vec(e.point)}}.dump() << '\n';
  }
  json f{{"kind", "final"},
         {"consumed", t.consumed},
         {"generations", t.generations},
         {"evaluations", t.evaluations},
         {"stopped_early", t.stopped_early},
         {"archive", vecs(t.archive)},
         {"final_population", vecs(t.final_population)}};
  os << f.dump() << '\n';
  return os.str();
}

LoadedTrace read_trace(std::string_view text) {
  LoadedTrace out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  bool header = false, final = false;
  try {
    while (std::getline(in, line)) {
      ++n;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const auto kind = j.at("kind").get<std::string>();
      if (final) throw Error("content after the final line");
      if (kind == "header") {
        if (header) throw Error("duplicate header");
        header = true;
        out.units = units_from(j);
        out.trace.seed = std::stoull(j.at("seed").get<std::string>());
        out.trace.engine = j.at("engine").get<std::string>();
        out.trace.config_digest = j.at("config_digest").get<std::string>();
      } else if (!header) {
        throw Error("missing header");
      } else if (kind == "event") {
        moea::TraceEvent e{j.at("budget").get<std::int64_t>(), vec_from(j.at("point"))};
        if (!out.trace.events.empty() && e.budget < out.trace.events.back().budget) {
          throw Error("event budgets decrease");
        }
        out.trace.events.push_back(e);
      } else if (kind == "final") {
        final = true;
        auto& t = out.trace;
        t.consumed = j.at("consumed").get<std::int64_t>();
        t.generations = j.at("generations").get<int>();
        t.evaluations = j.at("evaluations").get<int>();
        t.stopped_early = j.at("stopped_early").get<bool>();
        t.archive = vecs_from(j.at("archive"));
        t.final_population = vecs_from(j.at("final_population"));
      } else {
        throw Error("unknown line kind '" + kind + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error("trace line " + std::to_string(n) + ": " + e.what());
  } catch (const Error& e) {
    throw Error("trace line " + std::to_string(n) + ": " + e.what());
  }
  if (!final) throw Error("trace is truncated (no final line)");
  return out;
}

std::string write_front(const std::vector<ObjectiveVector>& front, const Units& units) {
  json j = units_json(units);
  json pts = json::array();
  for (const auto& v : front) {
    pts.push_back({{"makespan", format_makespan(v.makespan, units)},
                   {"secondary", format_secondary(v.secondary, units)},
                   {"ticks", vec(v)}});
  }
  j["points"] = std::move(pts);
  return j.dump(2) + "\n";
}

LoadedFront read_front(std::string_view text) {
  try {
    const json j = json::parse(text);
    LoadedFront f;
    f.units = units_from(j);
    for (const auto& p : j.at("points")) f.points.push_back(vec_from(p.at("ticks")));
    return f;
  } catch (const json::exception& e) {
    throw Error(std::string("front: ") + e.what());
  }
}

std::string write_params(const dae::EvoParams& p) {
  json j;
  for (const auto& name : tuner::parameter_names()) j[name] = tuner::get_parameter(p, name);
  j["max-length"] = p.max_length;
  j["max-atoms"] = p.max_atoms;
  j["crossover-retries"] = p.crossover_retries;
  return j.dump(2) + "\n";
}

dae::EvoParams read_params(std::string_view text, dae::EvoParams base) {
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw Error("parameters must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "max-length") base.max_length = value.get<int>();
      else if (key == "max-atoms") base.max_atoms = value.get<int>();
      else if (key == "crossover-retries") base.crossover_retries = value.get<int>();
      else tuner::set_parameter(base, key, value.get<double>());
    }
  } catch (const json::exception& e) {
    throw Error(std::string("parameters: ") + e.what());
  }
  base.validate();
  return base;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace modae::cli
