#include "modae/tuner/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "modae/assess/front.hpp"
#include "modae/core/error.hpp"

namespace modae::tuner {

namespace {

struct Range {
  double lo, hi;
};

const std::map<std::string, Range>& ranges() {
  static const std::map<std::string, Range> r{
      {"pop-size", {10, 300}},    {"proba-cross", {0, 1}},   {"proba-mut", {0, 1}},
      {"w-addgoal", {1, 10}},     {"w-delgoal", {1, 10}},    {"w-addatom", {1, 10}},
      {"w-delatom", {1, 10}},     {"proba-change", {0, 1}},  {"proba-delatom", {0, 1}},
      {"radius", {1, 10}},        {"w-makespan", {0, 5}},    {"w-cost", {0, 5}}};
  return r;
}

}  // namespace

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names{
      "pop-size",  "proba-cross",  "proba-mut",     "w-addgoal", "w-delgoal",  "w-addatom",
      "w-delatom", "proba-change", "proba-delatom", "radius",    "w-makespan", "w-cost"};
  return names;
}

ParamSpace ParamSpace::defaults() {
  const std::vector<double> weights{1, 2, 3, 5, 7, 10};
  const std::vector<double> probas{0, 0.2, 0.4, 0.5, 0.6, 0.8, 1};
  const std::vector<double> fine{0, 0.1, 0.3, 0.5, 0.7, 0.9, 1};
  const std::vector<double> strategy{0, 1, 2, 3, 4, 5};
  return ParamSpace{{{"pop-size", {10, 20, 30, 50, 100, 200, 300}},
                     {"proba-cross", probas},
                     {"proba-mut", probas},
                     {"w-addgoal", weights},
                     {"w-delgoal", weights},
                     {"w-addatom", weights},
                     {"w-delatom", weights},
                     {"proba-change", fine},
                     {"proba-delatom", fine},
                     {"radius", {1, 2, 3, 5, 7, 10}},
                     {"w-makespan", strategy},
                     {"w-cost", strategy}}};
}

ParamSpace ParamSpace::subset(const std::vector<std::string>& names) {
  const auto all = defaults();
  ParamSpace out;
  for (const auto& n : names) {
    auto it = std::find_if(all.parameters.begin(), all.parameters.end(),
                           [&](const Parameter& p) { return p.name == n; });
    if (it == all.parameters.end()) throw Error("unknown parameter '" + n + "'");
    out.parameters.push_back(*it);
  }
  return out;
}

void ParamSpace::validate() const {
  if (parameters.empty()) throw Error("parameter space is empty");
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    const auto& p = parameters[i];
    auto r = ranges().find(p.name);
    if (r == ranges().end()) throw Error("unknown parameter '" + p.name + "'");
    for (std::size_t j = 0; j < i; ++j) {
      if (parameters[j].name == p.name) throw Error("parameter '" + p.name + "' listed twice");
    }
    if (p.values.empty()) throw Error("empty grid for '" + p.name + "'");
    for (double v : p.values) {
      if (!(v >= r->second.lo && v <= r->second.hi)) {
        throw Error("grid value out of range for '" + p.name + "'");
      }
    }
  }
}

std::size_t ParamSpace::size() const {
  std::size_t n = 1;
  for (const auto& p : parameters) n *= p.values.size();
  return n;
}

void set_parameter(dae::EvoParams& p, const std::string& name, double v) {
  if (name == "pop-size") p.pop_size = static_cast<int>(std::lround(v));
  else if (name == "proba-cross") p.proba_cross = v;
  else if (name == "proba-mut") p.proba_mut = v;
  else if (name == "w-addgoal") p.w_addgoal = v;
  else if (name == "w-delgoal") p.w_delgoal = v;
  else if (name == "w-addatom") p.w_addatom = v;
  else if (name == "w-delatom") p.w_delatom = v;
  else if (name == "proba-change") p.proba_change = v;
  else if (name == "proba-delatom") p.proba_delatom = v;
  else if (name == "radius") p.radius = static_cast<int>(std::lround(v));
  else if (name == "w-makespan") p.w_makespan = v;
  else if (name == "w-cost") p.w_cost = v;
  else throw Error("unknown parameter '" + name + "'");
}

double get_parameter(const dae::EvoParams& p, const std::string& name) {
  if (name == "pop-size") return p.pop_size;
  if (name == "proba-cross") return p.proba_cross;
  if (name == "proba-mut") return p.proba_mut;
  if (name == "w-addgoal") return p.w_addgoal;
  if (name == "w-delgoal") return p.w_delgoal;
  if (name == "w-addatom") return p.w_addatom;
  if (name == "w-delatom") return p.w_delatom;
  if (name == "proba-change") return p.proba_change;
  if (name == "proba-delatom") return p.proba_delatom;
  if (name == "radius") return p.radius;
  if (name == "w-makespan") return p.w_makespan;
  if (name == "w-cost") return p.w_cost;
  throw Error("unknown parameter '" + name + "'");
}

ParamConfig nearest(const ParamSpace& space, const dae::EvoParams& base) {
  ParamConfig c;
  for (const auto& p : space.parameters) {
    const double want = get_parameter(base, p.name);
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.values.size(); ++i) {
      if (std::abs(p.values[i] - want) < std::abs(p.values[best] - want)) best = i;
    }
    c.index.push_back(best);
  }
  return c;
}

dae::EvoParams to_params(const ParamSpace& space, const ParamConfig& c, dae::EvoParams base) {
  if (c.index.size() != space.parameters.size()) throw ContractViolation("config does not fit the space");
  for (std::size_t i = 0; i < c.index.size(); ++i) {
    const auto& p = space.parameters[i];
    if (c.index[i] >= p.values.size()) throw ContractViolation("grid index out of range");
    set_parameter(base, p.name, p.values[c.index[i]]);
  }
  return base;
}

std::vector<ParamConfig> neighbors(const ParamSpace& space, const ParamConfig& c) {
  std::vector<ParamConfig> out;
  for (std::size_t i = 0; i < space.parameters.size(); ++i) {
    for (std::size_t v = 0; v < space.parameters[i].values.size(); ++v) {
      if (v == c.index[i]) continue;
      ParamConfig n = c;
      n.index[i] = v;
      out.push_back(std::move(n));
    }
  }
  return out;
}

namespace {

class Ils {
 public:
  Ils(const ParamSpace& space, const Scorer& score, const TuneOptions& opt, std::uint64_t seed)
      : space_(space), score_(score), opt_(opt), rng_(seed) {}

  TuneResult run(const ParamConfig& initial) {
    if (!allowed(initial)) throw Error("the initial configuration is not allowed");
    ParamConfig cur = initial;
    evaluate(cur);
    cur = descend(cur);
    int idle = 0;
    while (!exhausted() && idle < 1000) {
      const std::size_t before = cache_.size();
      ParamConfig next = cur;
      if (std::uniform_real_distribution<double>(0, 1)(rng_) < opt_.restart) {
        next = random_config();
      } else {
        for (int k = 0; k < opt_.perturbation; ++k) next = random_neighbor(next);
      }
      if (!evaluate(next)) {
        ++idle;
        continue;
      }
      next = descend(next);
      if (cache_.at(next) < cache_.at(cur)) cur = next;
      idle = cache_.size() == before ? idle + 1 : 0;
    }
    return result_;
  }

 private:
  bool allowed(const ParamConfig& c) const { return !opt_.allowed || opt_.allowed(c); }

  bool exhausted() const {
    return static_cast<int>(cache_.size()) >= opt_.budget || cache_.size() >= space_.size();
  }

  // Scores `c` unless cached; false when it cannot be scored (budget or disallowed).
  bool evaluate(const ParamConfig& c) {
    if (cache_.count(c)) return true;
    if (exhausted() || !allowed(c)) return false;
    const double s = score_(c);
    cache_[c] = s;
    result_.history.push_back({c, s});
    if (result_.history.size() == 1 || s < result_.best_score) {
      result_.best = c;
      result_.best_score = s;
    }
    return true;
  }

  ParamConfig descend(ParamConfig cur) {
    for (bool improved = true; improved;) {
      improved = false;
      auto ns = neighbors(space_, cur);
      std::shuffle(ns.begin(), ns.end(), rng_);
      for (const auto& n : ns) {
        if (!evaluate(n)) {
          if (exhausted()) return cur;
          continue;
        }
        if (cache_.at(n) < cache_.at(cur)) {
          cur = n;
          improved = true;
          break;
        }
      }
    }
    return cur;
  }

  ParamConfig random_neighbor(const ParamConfig& c) {
    auto ns = neighbors(space_, c);
    if (ns.empty()) return c;
    return ns[std::uniform_int_distribution<std::size_t>(0, ns.size() - 1)(rng_)];
  }

  ParamConfig random_config() {
    ParamConfig c;
    for (const auto& p : space_.parameters) {
      c.index.push_back(std::uniform_int_distribution<std::size_t>(0, p.values.size() - 1)(rng_));
    }
    return c;
  }

  const ParamSpace& space_;
  const Scorer& score_;
  const TuneOptions& opt_;
  std::mt19937_64 rng_;
  std::map<ParamConfig, double> cache_;
  TuneResult result_;
};

}  // namespace

TuneResult tune(const ParamSpace& space, const ParamConfig& initial, const Scorer& score,
                const TuneOptions& options, std::uint64_t seed) {
  space.validate();
  if (options.budget < 1) throw Error("tuning budget must be at least 1");
  if (initial.index.size() != space.parameters.size()) {
    throw ContractViolation("initial config does not fit the space");
  }
  return Ils(space, score, options, seed).run(initial);
}

double score_config(const planning::GroundedTask& task,
                    const std::vector<planning::ObjectiveVector>& true_front,
                    const moea::EngineConfig& engine, int runs_per_eval, std::uint64_t seed,
                    int workers) {
  if (runs_per_eval < 1) throw Error("runs-per-eval must be at least 1");
  std::vector<double> diffs(static_cast<std::size_t>(runs_per_eval));
  moea::parallel_for(diffs.size(), workers, [&](std::size_t r, int) {
    auto tr = moea::evolve_pareto(task, engine, moea::derive_seed(seed, 0x70e, r));
    diffs[r] = assess::unary_hv_diff(tr.archive, true_front);
  });
  double sum = 0;
  for (double d : diffs) sum += d;
  return sum / static_cast<double>(diffs.size());
}

}  // namespace modae::tuner
