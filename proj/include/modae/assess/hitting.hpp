#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modae/moea/moea.hpp"

namespace modae::assess {

using planning::ObjectiveVector;

struct HittingCurve {
  std::string label;  // "(m,s)" for a front point, "front" for the whole front
  std::optional<ObjectiveVector> point;
  // (budget, fraction of runs having discovered it by then). Starts at budget 0
  // and has one entry per distinct later discovery budget.
  std::vector<std::pair<std::int64_t, double>> steps;
};

struct HittingCdf {
  std::vector<HittingCurve> points;  // in true-front order
  HittingCurve whole_front;
};

/// Budget at which a run first recorded `point` in its archive, if ever.
std::optional<std::int64_t> discovery_budget(const moea::RunTrace& trace,
                                             const ObjectiveVector& point);

/// Empirical CDF over runs of each point's discovery budget; the whole-front
/// curve uses, per run, the latest of its points' discovery budgets.
HittingCdf hitting_cdf(const std::vector<moea::RunTrace>& traces,
                       const std::vector<ObjectiveVector>& true_front);

std::string point_label(const ObjectiveVector& v);

}  // namespace modae::assess
