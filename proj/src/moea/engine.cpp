#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "modae/assess/front.hpp"
#include "modae/core/error.hpp"
#include "modae/moea/moea.hpp"

namespace modae::moea {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t, int)>& fn) {
  const auto w = static_cast<std::size_t>(std::max(1, workers));
  if (w == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(w);
  const std::size_t used = std::min(w, n);
  for (std::size_t t = 0; t < used; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += used) fn(i, static_cast<int>(t));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

int workers_from_env() {
  const char* v = std::getenv("MODAE_WORKERS");
  if (v == nullptr || *v == '\0') return 1;
  try {
    return std::max(1, std::stoi(v));
  } catch (const std::exception&) {
    throw Error("MODAE_WORKERS must be a positive integer");
  }
}

std::string EngineConfig::digest() const {
  std::ostringstream os;
  const auto& p = params;
  os << "pop=" << p.pop_size << ";pc=" << p.proba_cross << ";pm=" << p.proba_mut
     << ";wag=" << p.w_addgoal << ";wdg=" << p.w_delgoal << ";waa=" << p.w_addatom
     << ";wda=" << p.w_delatom << ";pch=" << p.proba_change << ";pda=" << p.proba_delatom
     << ";radius=" << p.radius << ";wm=" << p.w_makespan << ";wc=" << p.w_cost
     << ";lmax=" << p.max_length << ";amax=" << p.max_atoms << ";retries=" << p.crossover_retries
     << ";budget=" << budget << ";call=" << per_call.max_expanded_nodes << "/"
     << per_call.max_evaluated_states << ";kappa=" << kappa << ";tour=" << tournament_size
     << ";extremes=" << preserve_extremes;
  if (wall_seconds > 0) os << ";wall=" << wall_seconds;
  if (!stop_when_found.empty()) os << ";stop=" << stop_when_found.size();
  return os.str();
}

std::vector<ObjectiveVector> RunTrace::archive_at(std::int64_t budget) const {
  std::vector<ObjectiveVector> pts;
  for (const auto& e : events) {
    if (e.budget <= budget) pts.push_back(e.point);
  }
  return assess::nondominated(std::move(pts));
}

namespace {

struct Member {
  dae::Individual ind;
  dae::EvaluationResult eval;
};

class Engine {
 public:
  // alpha < 0 selects the Pareto engine.
  Engine(const planning::GroundedTask& task, const EngineConfig& cfg, std::uint64_t seed,
         double alpha, Bounds bounds)
      : task_(task), cfg_(cfg), seed_(seed), alpha_(alpha), bounds_(bounds), heur_(task),
        rng_(derive_seed(seed, 0x5eed)) {
    cfg.params.validate();
    if (cfg.budget < 0) throw Error("budget must be non-negative");
    if (cfg.tournament_size < 1) throw Error("tournament size must be positive");
    if (!(cfg.wall_seconds >= 0)) throw Error("wall-clock limit must be non-negative");
    workers_ = std::max(1, cfg.workers);
    for (int i = 0; i < workers_; ++i) solvers_.emplace_back(task);
    trace_.seed = seed;
    trace_.config_digest = cfg.digest();
    if (alpha < 0) {
      trace_.engine = "pareto";
    } else {
      std::ostringstream os;
      os << "alpha=" << alpha;
      trace_.engine = os.str();
    }
    if (alpha >= 0) bounds_.validate();
  }

  RunTrace run() {
    const auto& p = cfg_.params;
    const auto started = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
      if (cfg_.wall_seconds <= 0) return false;
      const std::chrono::duration<double> d = std::chrono::steady_clock::now() - started;
      return d.count() >= cfg_.wall_seconds;
    };
    std::vector<dae::Individual> initial;
    for (int i = 0; i < p.pop_size; ++i) initial.push_back(dae::init_individual(heur_, p, rng_));
    population_ = evaluate_batch(std::move(initial), 0, /*always=*/true);
    trace_.generations = 0;

    int gen = 0;
    while (!done_ && trace_.consumed < cfg_.budget && !out_of_time()) {
      ++gen;
      std::vector<dae::Individual> offspring;
      const auto ranks = mating_keys();
      for (int i = 0; i < p.pop_size; ++i) {
        const auto& a = population_[tournament(ranks)].ind;
        dae::Individual child;
        if (chance(p.proba_cross)) {
          const auto& b = population_[tournament(ranks)].ind;
          child = dae::crossover(a, b, p, rng_);
        } else {
          child.states = a.states;
        }
        if (chance(p.proba_mut)) child = dae::mutate(child, heur_, p, rng_);
        offspring.push_back(std::move(child));
      }
      auto evaluated = evaluate_batch(std::move(offspring), gen, false);
      if (evaluated.empty()) break;
      std::vector<Member> pool = std::move(population_);
      for (auto& m : evaluated) pool.push_back(std::move(m));
      population_ = survivors(std::move(pool));
      trace_.generations = gen;
    }
    for (const auto& m : population_) {
      if (m.eval.feasible) trace_.final_population.push_back(m.eval.objectives);
    }
    trace_.archive = archive_;
    return std::move(trace_);
  }

 private:
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

  // Evaluates in parallel, then accounts the results in index order. Outside the
  // initial population an evaluation is kept only if it fits in the budget.
  std::vector<Member> evaluate_batch(std::vector<dae::Individual> inds, int gen, bool always) {
    std::vector<dae::EvaluationResult> results(inds.size());
    parallel_for(inds.size(), workers_, [&](std::size_t i, int w) {
      dae::Rng rng(derive_seed(seed_, static_cast<std::uint64_t>(gen) + 1, i));
      results[i] = dae::evaluate(inds[i], heur_, solvers_[static_cast<std::size_t>(w)],
                                 cfg_.params.w_makespan, cfg_.params.w_cost, cfg_.per_call, rng);
    });
    const dae::Penalty snapshot = penalty_;
    std::vector<Member> out;
    for (std::size_t i = 0; i < inds.size() && !done_; ++i) {
      auto& r = results[i];
      if (!always && trace_.consumed + r.expanded_nodes > cfg_.budget) {
        done_ = true;
        break;
      }
      trace_.consumed += r.expanded_nodes;
      ++trace_.evaluations;
      if (r.feasible) {
        penalty_.observe(r.objectives);
        record(r.objectives);
      } else {
        snapshot.apply(r);
      }
      r.plan.reset();  // plans are not needed past this point
      out.push_back(Member{std::move(inds[i]), std::move(r)});
    }
    return out;
  }

  void record(const ObjectiveVector& v) {
    for (const auto& a : archive_) {
      if (a == v || dominates(a, v)) return;
    }
    std::erase_if(archive_, [&](const ObjectiveVector& a) { return dominates(v, a); });
    archive_.push_back(v);
    std::sort(archive_.begin(), archive_.end());
    trace_.events.push_back({trace_.consumed, v});
    if (!cfg_.stop_when_found.empty()) {
      const bool all = std::all_of(cfg_.stop_when_found.begin(), cfg_.stop_when_found.end(),
                                   [&](const ObjectiveVector& t) {
                                     return std::find(archive_.begin(), archive_.end(), t) !=
                                            archive_.end();
                                   });
      if (all) {
        done_ = true;
        trace_.stopped_early = true;
      }
    }
  }

  // Lower is better. Infeasible members rank after all feasible ones, by the
  // fraction of unsolved subproblems.
  struct Key {
    int infeasible;
    double value;
    bool operator<(const Key& o) const {
      return infeasible != o.infeasible ? infeasible < o.infeasible : value < o.value;
    }
  };

  std::vector<Key> mating_keys() const {
    std::vector<Key> keys(population_.size());
    std::vector<Point> feasible;
    std::vector<std::size_t> where;
    for (std::size_t i = 0; i < population_.size(); ++i) {
      const auto& e = population_[i].eval;
      if (!e.feasible) {
        keys[i] = {1, static_cast<double>(e.total_subproblems - e.solved_subproblems) /
                          std::max(1, e.total_subproblems)};
      } else if (alpha_ >= 0) {
        keys[i] = {0, f_alpha(e.objectives, alpha_, bounds_)};
      } else {
        feasible.push_back({static_cast<double>(e.objectives.makespan),
                            static_cast<double>(e.objectives.secondary)});
        where.push_back(i);
      }
    }
    if (!feasible.empty()) {
      const auto f = ibea_fitness(feasible, cfg_.kappa);
      for (std::size_t j = 0; j < where.size(); ++j) keys[where[j]] = {0, -f[j]};
    }
    return keys;
  }

  std::size_t tournament(const std::vector<Key>& keys) {
    std::uniform_int_distribution<std::size_t> pick(0, population_.size() - 1);
    std::size_t best = pick(rng_);
    for (int i = 1; i < cfg_.tournament_size; ++i) {
      const std::size_t other = pick(rng_);
      if (keys[other] < keys[best]) best = other;
    }
    return best;
  }

  std::vector<Member> survivors(std::vector<Member> pool) {
    const auto size = static_cast<std::size_t>(cfg_.params.pop_size);
    if (pool.size() <= size) return pool;
    std::vector<std::size_t> feas, infeas;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      (pool[i].eval.feasible ? feas : infeas).push_back(i);
    }
    std::vector<std::size_t> keep;
    if (alpha_ >= 0) {
      std::vector<std::size_t> order(pool.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      auto key = [&](std::size_t i) {
        const auto& e = pool[i].eval;
        return e.feasible ? Key{0, f_alpha(e.objectives, alpha_, bounds_)}
                          : Key{1, static_cast<double>(e.objectives.makespan)};
      };
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return key(x) < key(y); });
      keep.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size));
    } else {
      auto pick = [&](const std::vector<std::size_t>& group, std::size_t n) {
        std::vector<ObjectiveVector> objs;
        for (std::size_t i : group) objs.push_back(pool[i].eval.objectives);
        for (std::size_t j : ibea_select(objs, cfg_.kappa, n, cfg_.preserve_extremes)) {
          keep.push_back(group[j]);
        }
      };
      if (feas.size() >= size) {
        pick(feas, size);
      } else {
        keep = feas;
        pick(infeas, size - feas.size());
      }
      std::sort(keep.begin(), keep.end());
    }
    std::vector<Member> next;
    for (std::size_t i : keep) next.push_back(std::move(pool[i]));
    return next;
  }

  const planning::GroundedTask& task_;
  const EngineConfig& cfg_;
  std::uint64_t seed_;
  double alpha_;
  Bounds bounds_;
  dae::Heuristics heur_;
  dae::Rng rng_;
  int workers_ = 1;
  std::vector<planner::Solver> solvers_;
  dae::Penalty penalty_;
  std::vector<ObjectiveVector> archive_;
  std::vector<Member> population_;
  RunTrace trace_;
  bool done_ = false;
};

}  // namespace

RunTrace evolve_pareto(const planning::GroundedTask& task, const EngineConfig& config,
                       std::uint64_t seed) {
  return Engine(task, config, seed, -1.0, Bounds{}).run();
}

RunTrace evolve_single(const planning::GroundedTask& task, const EngineConfig& config,
                       double alpha, const Bounds& bounds, std::uint64_t seed) {
  if (!(alpha >= 0 && alpha <= 1)) throw Error("alpha must lie in [0, 1]");
  return Engine(task, config, seed, alpha, bounds).run();
}

void AggregationConfig::validate() const {
  if (alphas.empty()) throw Error("at least one alpha is required");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] >= 0 && alphas[i] <= 1)) throw Error("alphas must lie in [0, 1]");
    if (i > 0 && !(alphas[i - 1] < alphas[i])) throw Error("alphas must be sorted and distinct");
  }
  if (bounds) bounds->validate();
}

CampaignResult aggregate_campaign(const planning::GroundedTask& task, const EngineConfig& config,
                                  const AggregationConfig& agg, std::uint64_t seed) {
  agg.validate();
  CampaignResult out;
  out.runs.resize(agg.alphas.size());
  std::vector<bool> ran(agg.alphas.size(), false);
  auto run_alpha = [&](std::size_t i, const Bounds& b) {
    out.runs[i] = evolve_single(task, config, agg.alphas[i], b, derive_seed(seed, 0xa1fa, i));
    ran[i] = true;
  };

  if (agg.bounds) {
    out.bounds = *agg.bounds;
  } else {
    // For alpha in {0, 1}, F_alpha is monotone in a single raw objective, so
    // any unclamped bounds give the same run. Objectives are non-negative
    // integers well below 1e15, so dividing by it keeps them distinct.
    constexpr double kWide = 1e15;
    const Bounds wide{0, kWide, 0, kWide};
    std::vector<ObjectiveVector> seen;
    for (std::size_t i = 0; i < agg.alphas.size(); ++i) {
      if (agg.alphas[i] == 0.0 || agg.alphas[i] == 1.0) {
        run_alpha(i, wide);
        for (const auto& v : out.runs[i].final_population) seen.push_back(v);
      }
    }
    Bounds b{0, 1, 0, 1};
    if (!seen.empty()) {
      b.makespan_min = b.makespan_max = static_cast<double>(seen[0].makespan);
      b.secondary_min = b.secondary_max = static_cast<double>(seen[0].secondary);
      for (const auto& v : seen) {
        b.makespan_min = std::min(b.makespan_min, static_cast<double>(v.makespan));
        b.makespan_max = std::max(b.makespan_max, static_cast<double>(v.makespan));
        b.secondary_min = std::min(b.secondary_min, static_cast<double>(v.secondary));
        b.secondary_max = std::max(b.secondary_max, static_cast<double>(v.secondary));
      }
      if (b.makespan_max <= b.makespan_min) b.makespan_max = b.makespan_min + 1;
      if (b.secondary_max <= b.secondary_min) b.secondary_max = b.secondary_min + 1;
    }
    out.bounds = b;
  }
  for (std::size_t i = 0; i < agg.alphas.size(); ++i) {
    if (!ran[i]) run_alpha(i, out.bounds);
  }
  std::vector<ObjectiveVector> all;
  for (const auto& r : out.runs) {
    out.consumed += r.consumed;
    all.insert(all.end(), r.final_population.begin(), r.final_population.end());
  }
  out.front = assess::nondominated(std::move(all));
  return out;
}

}  // namespace modae::moea
