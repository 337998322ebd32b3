#include <queue>

#include "modae/pddl/pddl.hpp"
#include "modae/zeno/zeno.hpp"

namespace modae::zeno {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Lin:
      return "lin";
    case Variant::Cvx:
      return "cvx";
    case Variant::Ccve:
      return "ccve";
    case Variant::Custom:
      return "custom";
  }
  return "custom";
}

Variant variant_from_string(std::string_view text) {
  if (text == "lin" || text == "linear") return Variant::Lin;
  if (text == "cvx" || text == "convex") return Variant::Cvx;
  if (text == "ccve" || text == "concave") return Variant::Ccve;
  if (text == "custom") return Variant::Custom;
  throw Error("unknown MultiZeno variant '" + std::string(text) + "'");
}

std::string person_name(int i) { return "person" + std::to_string(i + 1); }
std::string plane_name(int i) { return "plane" + std::to_string(i + 1); }
std::string city_name(int c) { return "city" + std::to_string(c); }

Ticks ZenoConfig::landing(int city) const {
  const auto& table = mode == ObjectiveMode::CostSum ? central_costs : central_risks;
  auto it = table.find(city);
  return it == table.end() ? 0 : it->second;
}

void validate(const ZenoConfig& c) {
  if (c.passengers < 1) throw Error("at least one passenger is required");
  if (c.planes < 1) throw Error("at least one plane is required");
  if (c.cities < 2) throw Error("at least two cities are required");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(c.cities));
  for (const auto& e : c.edges) {
    if (e.from < 0 || e.to < 0 || e.from >= c.cities || e.to >= c.cities || e.from == e.to) {
      throw Error("edge " + std::to_string(e.from) + "-" + std::to_string(e.to) + " is invalid");
    }
    if (e.duration <= 0) throw Error("edge durations must be positive");
    adj[static_cast<std::size_t>(e.from)].push_back(e.to);
    adj[static_cast<std::size_t>(e.to)].push_back(e.from);
  }
  for (const auto* table : {&c.central_costs, &c.central_risks}) {
    for (const auto& [city, value] : *table) {
      if (city < 0 || city >= c.cities) throw Error("landing value for unknown city");
      if (value <= 0) throw Error("central costs and risks must be positive");
    }
  }
  std::vector<bool> seen(static_cast<std::size_t>(c.cities), false);
  std::queue<int> open;
  open.push(c.origin());
  seen[0] = true;
  while (!open.empty()) {
    int u = open.front();
    open.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        open.push(v);
      }
    }
  }
  if (!seen[static_cast<std::size_t>(c.destination())]) {
    throw Error("the route graph does not connect the origin to the destination");
  }
}

ZenoConfig default_config(Variant variant, int passengers, ObjectiveMode mode) {
  ZenoConfig c;
  c.passengers = passengers;
  c.mode = mode;
  c.variant = variant;
  const bool concave = variant == Variant::Ccve;
  const std::vector<Ticks> durations = concave ? std::vector<Ticks>{2, 3, 4, 1, 2, 1, 2, 3, 4}
                                               : std::vector<Ticks>{2, 4, 6, 3, 5, 3, 2, 4, 6};
  const std::vector<std::pair<int, int>> ends{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3},
                                              {2, 3}, {1, 4}, {2, 4}, {3, 4}};
  for (std::size_t i = 0; i < ends.size(); ++i) {
    c.edges.push_back(Edge{ends[i].first, ends[i].second, durations[i]});
  }
  const Ticks middle = variant == Variant::Cvx ? 11 : concave ? 29 : 20;
  c.central_costs = {{1, 30}, {2, middle}, {3, 10}};
  c.central_risks = c.central_costs;
  return c;
}

PddlPair generate(const ZenoConfig& config) {
  validate(config);
  using pddl::Application;
  using pddl::NumericExpr;
  using pddl::TypedName;

  pddl::DomainAst d;
  d.name = "multizeno";
  d.requirements = {":typing", ":durative-actions", ":numeric-fluents"};
  d.types = {{"person", "locatable"}, {"plane", "locatable"}, {"locatable", "object"},
             {"city", "object"}};
  d.predicates = {{"at", {{"?x", "locatable"}, {"?c", "city"}}},
                  {"in", {{"?p", "person"}, {"?a", "plane"}}},
                  {"route", {{"?from", "city"}, {"?to", "city"}}}};
  d.functions = {{"flight-time", {{"?from", "city"}, {"?to", "city"}}},
                 {"landing-cost", {{"?c", "city"}}},
                 {"landing-risk", {{"?c", "city"}}},
                 {pddl::kCostFluent, {}},
                 {pddl::kRiskFluent, {}}};

  auto fly = [](bool carry) {
    pddl::ActionSchema a;
    a.name = carry ? "fly-carry" : "fly-empty";
    a.durative = true;
    a.params = {{"?a", "plane"}};
    if (carry) a.params.push_back({"?p", "person"});
    a.params.push_back({"?from", "city"});
    a.params.push_back({"?to", "city"});
    a.duration = NumericExpr{std::nullopt, {"flight-time", {"?from", "?to"}}};
    a.preconditions = {{"route", {"?from", "?to"}}, {"at", {"?a", "?from"}}};
    a.del_effects = {{"at", {"?a", "?from"}}};
    a.add_effects = {{"at", {"?a", "?to"}}};
    if (carry) {
      a.preconditions.push_back({"at", {"?p", "?from"}});
      a.del_effects.push_back({"at", {"?p", "?from"}});
      a.add_effects.push_back({"at", {"?p", "?to"}});
      // Pickup and drop are folded into the flight: the passenger ends up out of the plane.
      a.del_effects.push_back({"in", {"?p", "?a"}});
    }
    a.cost = NumericExpr{std::nullopt, {"landing-cost", {"?to"}}};
    a.risk = NumericExpr{std::nullopt, {"landing-risk", {"?to"}}};
    return a;
  };
  d.actions = {fly(true), fly(false)};

  pddl::ProblemAst p;
  p.name = "multizeno" + std::to_string(config.passengers) + "-" +
           std::string(to_string(config.variant));
  p.domain_name = d.name;
  p.metric = config.mode;
  for (int i = 0; i < config.passengers; ++i) p.objects.push_back({person_name(i), "person"});
  for (int i = 0; i < config.planes; ++i) p.objects.push_back({plane_name(i), "plane"});
  for (int c = 0; c < config.cities; ++c) p.objects.push_back({city_name(c), "city"});

  for (int i = 0; i < config.passengers; ++i) {
    p.init.push_back({"at", {person_name(i), city_name(config.origin())}});
  }
  for (int i = 0; i < config.planes; ++i) {
    p.init.push_back({"at", {plane_name(i), city_name(config.origin())}});
  }
  for (const auto& e : config.edges) {
    for (auto [a, b] : {std::pair{e.from, e.to}, std::pair{e.to, e.from}}) {
      p.init.push_back({"route", {city_name(a), city_name(b)}});
      p.numeric_init.push_back(
          {{"flight-time", {city_name(a), city_name(b)}}, std::to_string(e.duration)});
    }
  }
  for (int c = 0; c < config.cities; ++c) {
    auto cost = config.central_costs.find(c);
    auto risk = config.central_risks.find(c);
    p.numeric_init.push_back({{"landing-cost", {city_name(c)}},
                              std::to_string(cost == config.central_costs.end() ? 0 : cost->second)});
    p.numeric_init.push_back({{"landing-risk", {city_name(c)}},
                              std::to_string(risk == config.central_risks.end() ? 0 : risk->second)});
  }
  p.numeric_init.push_back({{pddl::kCostFluent, {}}, "0"});
  p.numeric_init.push_back({{pddl::kRiskFluent, {}}, "0"});
  for (int i = 0; i < config.passengers; ++i) {
    p.goal.push_back({"at", {person_name(i), city_name(config.destination())}});
  }
  return PddlPair{pddl::print_domain(d), pddl::print_problem(p)};
}

}  // namespace modae::zeno
