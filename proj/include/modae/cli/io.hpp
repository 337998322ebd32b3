#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "modae/dae/dae.hpp"
#include "modae/moea/moea.hpp"

namespace modae::cli {

using planning::ObjectiveMode;
using planning::ObjectiveVector;

/// Objective units of a task: vectors are stored as integer ticks and read as
/// ticks / denominator.
struct Units {
  std::int64_t time_denominator = 1;
  std::int64_t secondary_denominator = 1;
  ObjectiveMode mode = ObjectiveMode::CostSum;

  static Units of(const planning::GroundedTask& task);
  friend bool operator==(const Units&, const Units&) = default;
};

// Decimal strings, exact.
std::string format_makespan(planning::Ticks t, const Units& u);
std::string format_secondary(planning::Ticks t, const Units& u);

/// JSONL: a header line, one line per archive addition, a closing summary line.
std::string write_trace(const moea::RunTrace& trace, const Units& units);

struct LoadedTrace {
  moea::RunTrace trace;
  Units units;
};
LoadedTrace read_trace(std::string_view jsonl);  // throws modae::Error on malformed input

std::string write_front(const std::vector<ObjectiveVector>& front, const Units& units);
struct LoadedFront {
  std::vector<ObjectiveVector> points;
  Units units;
};
LoadedFront read_front(std::string_view json);

/// Parameter names as in tuner::parameter_names(), plus max-length, max-atoms
/// and crossover-retries.
std::string write_params(const dae::EvoParams& p);
// Keys not present keep the value from `base`; unknown keys are errors.
dae::EvoParams read_params(std::string_view json, dae::EvoParams base = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace modae::cli
