#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "modae/moea/moea.hpp"

namespace modae::tuner {

struct Parameter {
  std::string name;            // one of parameter_names()
  std::vector<double> values;  // ordered grid
};

/// Discretized parameter space. Parameters not listed keep their base value.
struct ParamSpace {
  std::vector<Parameter> parameters;

  static ParamSpace defaults();
  /// Restriction of defaults() to the named parameters, in the given order.
  static ParamSpace subset(const std::vector<std::string>& names);
  void validate() const;  // non-empty grids, known names, values inside the allowed ranges
  std::size_t size() const;  // number of configurations
};

const std::vector<std::string>& parameter_names();

/// One grid index per parameter of the space.
struct ParamConfig {
  std::vector<std::size_t> index;

  friend bool operator==(const ParamConfig&, const ParamConfig&) = default;
  friend auto operator<=>(const ParamConfig&, const ParamConfig&) = default;
};

/// Grid point closest to the values in `base` (first on ties).
ParamConfig nearest(const ParamSpace& space, const dae::EvoParams& base);
dae::EvoParams to_params(const ParamSpace& space, const ParamConfig& c, dae::EvoParams base);
void set_parameter(dae::EvoParams& p, const std::string& name, double value);
double get_parameter(const dae::EvoParams& p, const std::string& name);

/// Every configuration differing from `c` in exactly one parameter.
std::vector<ParamConfig> neighbors(const ParamSpace& space, const ParamConfig& c);

struct Evaluated {
  ParamConfig config;
  double score = 0;
};

struct TuneResult {
  ParamConfig best;
  double best_score = 0;
  std::vector<Evaluated> history;  // distinct configurations, in evaluation order
};

struct TuneOptions {
  int budget = 100;  // distinct configuration evaluations
  int perturbation = 3;
  double restart = 0.01;
  // Configurations rejected here are never scored (e.g. both strategy weights zero).
  std::function<bool(const ParamConfig&)> allowed;
};

/// Lower scores are better. Each configuration is scored once; repeats hit a cache.
using Scorer = std::function<double(const ParamConfig&)>;

/// BasicILS: first-improvement local search in the one-exchange neighbourhood
/// from `initial`, then perturb / re-descend / accept-if-better, restarting
/// from a random configuration with probability `restart`. Returns the best
/// configuration scored.
TuneResult tune(const ParamSpace& space, const ParamConfig& initial, const Scorer& score,
                const TuneOptions& options, std::uint64_t seed);

/// Mean unary hypervolume difference to `true_front` over `runs_per_eval`
/// Pareto runs. Every configuration uses the same derived run seeds.
double score_config(const planning::GroundedTask& task,
                    const std::vector<planning::ObjectiveVector>& true_front,
                    const moea::EngineConfig& engine, int runs_per_eval, std::uint64_t seed,
                    int workers);

}  // namespace modae::tuner
