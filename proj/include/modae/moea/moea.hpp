#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modae/dae/dae.hpp"

namespace modae::moea {

using planning::ObjectiveVector;
using planning::Ticks;

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

using Point = std::array<double, 2>;

/// IBEA fitness under the hypervolume-difference indicator, objectives scaled
/// to [0,1] over `points`, reference (2,2).
std::vector<double> ibea_fitness(const std::vector<Point>& points, double kappa);

/// Environmental selection: repeatedly drops the worst-fitness point and updates
/// the others until `out_size` remain. Returns kept indices in ascending order.
/// With preserve_extremes, the current best point on each objective is never
/// dropped (when out_size >= 2).
std::vector<std::size_t> ibea_select(const std::vector<Point>& points, double kappa,
                                     std::size_t out_size, bool preserve_extremes = false);
std::vector<std::size_t> ibea_select(const std::vector<ObjectiveVector>& points, double kappa,
                                     std::size_t out_size, bool preserve_extremes = false);

struct Bounds {
  double makespan_min = 0;
  double makespan_max = 1;
  double secondary_min = 0;
  double secondary_max = 1;

  void validate() const;
};

/// α·m̂ + (1−α)·ŝ with each objective scaled (and clamped) to [0,1] by bounds.
double f_alpha(const ObjectiveVector& v, double alpha, const Bounds& bounds);

struct EngineConfig {
  dae::EvoParams params;
  std::int64_t budget = 2000000;      // embedded-planner expanded nodes, whole run
  planner::SearchBudget per_call{2000, 20000};
  double kappa = 0.05;
  int tournament_size = 2;
  bool preserve_extremes = true;
  int workers = 1;
  // Optional wall-clock limit, checked between generations; 0 disables it.
  // Runs limited this way are not reproducible.
  double wall_seconds = 0;
  // Stops as soon as the archive contains every listed vector. Such a run ends
  // with the same archive as the full-budget run would.
  std::vector<ObjectiveVector> stop_when_found;

  std::string digest() const;  // stable text summary of everything that affects a run
};

struct TraceEvent {
  std::int64_t budget = 0;
  ObjectiveVector point;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct RunTrace {
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string engine;            // "pareto" or "alpha=<value>"
  std::vector<TraceEvent> events;  // archive additions, budget non-decreasing
  std::vector<ObjectiveVector> archive;
  std::vector<ObjectiveVector> final_population;  // feasible members only
  std::int64_t consumed = 0;
  int generations = 0;
  int evaluations = 0;
  bool stopped_early = false;

  /// Non-dominated set of the points added up to `budget` (inclusive).
  std::vector<ObjectiveVector> archive_at(std::int64_t budget) const;
};

RunTrace evolve_pareto(const planning::GroundedTask& task, const EngineConfig& config,
                       std::uint64_t seed);

RunTrace evolve_single(const planning::GroundedTask& task, const EngineConfig& config,
                       double alpha, const Bounds& bounds, std::uint64_t seed);

struct AggregationConfig {
  std::vector<double> alphas{0, 0.1, 0.3, 0.5, 0.7, 0.9, 1};
  std::optional<Bounds> bounds;
  void validate() const;
};

struct CampaignResult {
  std::vector<ObjectiveVector> front;  // non-dominated union of final populations
  std::vector<RunTrace> runs;          // one per alpha, in alpha order
  Bounds bounds;
  std::int64_t consumed = 0;
};

/// Runs one α-run per alpha, each with config.budget. Without given bounds the
/// α=1 and α=0 runs go first (they do not depend on bounds) and their final
/// populations provide the bounds for the others.
CampaignResult aggregate_campaign(const planning::GroundedTask& task, const EngineConfig& config,
                                  const AggregationConfig& agg, std::uint64_t seed);

/// Deterministic seed derivation (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

/// Runs fn(i, worker) for i in [0, n) on up to `workers` threads; `worker` is
/// the index of the executing thread, for per-thread scratch objects.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t, int)>& fn);

/// Worker count from the MODAE_WORKERS environment variable (default 1).
int workers_from_env();

}  // namespace modae::moea
