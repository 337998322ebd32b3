#include "modae/assess/hitting.hpp"

#include <algorithm>

#include "modae/core/error.hpp"

namespace modae::assess {

std::optional<std::int64_t> discovery_budget(const moea::RunTrace& trace,
                                             const ObjectiveVector& point) {
  for (const auto& e : trace.events) {
    if (e.point == point) return e.budget;
  }
  return std::nullopt;
}

std::string point_label(const ObjectiveVector& v) {
  return "(" + std::to_string(v.makespan) + "," + std::to_string(v.secondary) + ")";
}

namespace {

HittingCurve curve(std::string label, const std::vector<std::optional<std::int64_t>>& found) {
  HittingCurve c;
  c.label = std::move(label);
  std::vector<std::int64_t> budgets;
  for (const auto& f : found) {
    if (f) budgets.push_back(*f);
  }
  std::sort(budgets.begin(), budgets.end());
  const double n = static_cast<double>(found.size());
  auto fraction = [&](std::int64_t b) {
    auto k = std::upper_bound(budgets.begin(), budgets.end(), b) - budgets.begin();
    return static_cast<double>(k) / n;
  };
  c.steps.emplace_back(0, fraction(0));
  for (std::int64_t b : budgets) {
    if (b > c.steps.back().first) c.steps.emplace_back(b, fraction(b));
  }
  return c;
}

}  // namespace

HittingCdf hitting_cdf(const std::vector<moea::RunTrace>& traces,
                       const std::vector<ObjectiveVector>& true_front) {
  if (traces.empty()) throw ContractViolation("hitting_cdf needs at least one trace");
  HittingCdf out;
  std::vector<std::optional<std::int64_t>> whole(traces.size(), std::int64_t{0});
  for (const auto& p : true_front) {
    std::vector<std::optional<std::int64_t>> found;
    for (std::size_t r = 0; r < traces.size(); ++r) {
      found.push_back(discovery_budget(traces[r], p));
      if (!found.back()) {
        whole[r].reset();
      } else if (whole[r]) {
        whole[r] = std::max(*whole[r], *found.back());
      }
    }
    out.points.push_back(curve(point_label(p), found));
    out.points.back().point = p;
  }
  if (true_front.empty()) whole.assign(traces.size(), std::nullopt);
  out.whole_front = curve("front", whole);
  return out;
}

}  // namespace modae::assess
