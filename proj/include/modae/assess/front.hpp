#pragma once

#include <vector>

#include "modae/planning/task.hpp"

namespace modae::assess {

using planning::ObjectiveVector;

/// Maximal non-dominated subset, duplicates collapsed, sorted by makespan.
std::vector<ObjectiveVector> nondominated(std::vector<ObjectiveVector> points);

struct Point2 {
  double x = 0;
  double y = 0;
};

/// Area of the union of boxes [p, reference]; points not strictly better than
/// the reference on both axes contribute only their clipped part.
double hypervolume(const std::vector<Point2>& points, Point2 reference);

/// HV(front) − HV(nondominated(approx)) after scaling both by the true front's
/// bounding box, reference (1.1, 1.1) in scaled space.
double unary_hv_diff(const std::vector<ObjectiveVector>& approx,
                     const std::vector<ObjectiveVector>& true_front);

/// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero differences
/// are dropped and tied ranks averaged; exact null distribution up to 20 pairs,
/// normal approximation with continuity and tie correction beyond.
double wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace modae::assess
