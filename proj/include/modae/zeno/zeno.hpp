#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modae/core/error.hpp"
#include "modae/planning/plan.hpp"

namespace modae::zeno {

using planning::ObjectiveMode;
using planning::ObjectiveVector;
using planning::Ticks;

enum class Variant { Lin, Cvx, Ccve, Custom };

std::string_view to_string(Variant v);
Variant variant_from_string(std::string_view text);

struct Edge {
  int from = 0;
  int to = 0;
  Ticks duration = 1;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A MultiZeno instance. Cities are numbered 0..cities-1; every passenger and
/// plane starts in city 0 and all passengers must reach the last city. Edges
/// are undirected. Landing in a city listed in central_costs / central_risks
/// incurs that cost / risk.
struct ZenoConfig {
  int passengers = 3;
  int planes = 2;
  int cities = 5;
  std::vector<Edge> edges;
  std::map<int, Ticks> central_costs;
  std::map<int, Ticks> central_risks;
  ObjectiveMode mode = ObjectiveMode::CostSum;
  Variant variant = Variant::Lin;

  int origin() const { return 0; }
  int destination() const { return cities - 1; }
  Ticks landing(int city) const;  // cost or risk of landing in `city` under `mode`

  friend bool operator==(const ZenoConfig&, const ZenoConfig&) = default;
};

// Throws modae::Error describing the first violated invariant.
void validate(const ZenoConfig& config);

/// Edges 1-3 join city0 to cities 1,2,3; edges 4-6 join 1-2, 1-3, 2-3;
/// edges 7-9 join cities 1,2,3 to city4.
ZenoConfig default_config(Variant variant, int passengers, ObjectiveMode mode);

struct PddlPair {
  std::string domain;
  std::string problem;
};

PddlPair generate(const ZenoConfig& config);

// Object names used by the generator.
std::string person_name(int i);  // 0-based index → "person1"
std::string plane_name(int i);   // → "plane1"
std::string city_name(int c);    // → "city0"

class IncompleteFrontError : public Error {
 public:
  using Error::Error;
};

struct FrontPoint {
  ObjectiveVector objectives;
  planning::Plan plan;  // a concrete schedule on the generated task realizing `objectives`
};

struct ExactFront {
  std::vector<FrontPoint> points;  // ascending makespan, descending secondary
  std::size_t expanded_labels = 0;

  std::vector<ObjectiveVector> vectors() const;
};

/// Exact bi-objective front by label-correcting search over passenger-
/// symmetric states. `task` must be the grounding of generate(config); it is
/// used to name the actions of the witness plans. Throws IncompleteFrontError
/// when the makespan bound cuts off the minimum-secondary end of the front.
ExactFront exact_front(const ZenoConfig& config, const planning::GroundedTask& task,
                       Ticks makespan_bound);

/// Lowest achievable secondary objective ignoring time.
Ticks min_secondary(const ZenoConfig& config);

}  // namespace modae::zeno
