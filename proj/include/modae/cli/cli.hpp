#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modae/cli/io.hpp"
#include "modae/moea/moea.hpp"

namespace modae::cli {

inline constexpr std::string_view kVersion = "1.0.0";

/// The modae command line; `args` excludes the program name. Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Merges the α-runs of one aggregation repetition into a single trace. The
/// α-runs share the repetition's budget equally, so an event at budget b of
/// one α-run happens at n·b of the repetition (n α-runs).
moea::RunTrace combine_alpha_runs(const std::vector<moea::RunTrace>& runs);

/// The repetitions of an `evolve` or `aggregate` output directory, one
/// (combined) trace per repetition.
struct RunSet {
  std::string kind;  // "pareto" or "aggregate"
  Units units;
  std::vector<moea::RunTrace> runs;
};
RunSet load_run_set(const std::string& dir);

struct Report {
  std::string hv_csv;       // budget, one column per run, mean
  std::string hitting_csv;  // budget, target, fraction
  std::string scatter_csv;  // run, makespan, secondary of final populations
  std::string merged_csv;   // non-dominated union of final populations
  std::string summary_json;
  std::vector<double> final_ihv;  // per run, unary hypervolume difference of the archive
  int front_hits = 0;             // runs whose archive contains the whole front
  std::optional<double> wilcoxon_p;
};

/// Pure function of the traces. With `compare`, run i of both sets is paired
/// for the signed-rank test on final I_H⁻ (the sets must have equal sizes).
Report make_report(const RunSet& runs, const std::vector<ObjectiveVector>& front,
                   const RunSet* compare = nullptr);

}  // namespace modae::cli
