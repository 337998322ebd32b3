#include <algorithm>
#include <set>
#include <unordered_set>

#include "doctest.h"
#include "modae/dae/dae.hpp"
#include "support.hpp"

using namespace modae;
using dae::Individual;
using dae::MutationKind;
using dae::PartialState;
using planning::ObjectiveMode;
using test::atom;

namespace {

const planning::GroundedTask& mz(int n) {
  static const auto t3 = test::zeno_task(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  static const auto t6 = test::zeno_task(zeno::Variant::Lin, 6, ObjectiveMode::RiskMax);
  return n == 3 ? t3 : t6;
}

const dae::Heuristics& heur(int n) {
  static const dae::Heuristics h3(mz(3));
  static const dae::Heuristics h6(mz(6));
  return n == 3 ? h3 : h6;
}

// Plain Bellman-Ford style relaxation until nothing changes.
std::vector<planning::Ticks> h1_oracle(const planning::GroundedTask& t) {
  std::vector<planning::Ticks> h(t.atom_count(), dae::kUnreachable);
  for (auto a : t.init().atoms()) h[a] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& act : t.actions()) {
      planning::Ticks start = 0;
      for (auto p : act.preconditions) start = std::max(start, h[p]);
      if (start == dae::kUnreachable) continue;
      for (auto a : act.add_effects) {
        if (start + act.duration < h[a]) {
          h[a] = start + act.duration;
          changed = true;
        }
      }
    }
  }
  return h;
}

std::vector<planning::State> reachable_states(const planning::GroundedTask& t) {
  std::unordered_set<planning::State, planning::StateHash> seen{t.init()};
  std::vector<planning::State> order{t.init()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& a : t.actions()) {
      if (!planning::applicable(t, order[i], a)) continue;
      auto s = planning::apply(t, order[i], a);
      if (seen.insert(s).second) order.push_back(s);
    }
  }
  return order;
}

PartialState ps(const dae::Heuristics& h, std::vector<planning::AtomId> atoms) {
  std::sort(atoms.begin(), atoms.end());
  planning::Ticks anchor = 0;
  for (auto a : atoms) anchor = std::max(anchor, h.h1(a));
  return {atoms, anchor};
}

Individual ind_of(std::vector<PartialState> states) { return Individual{std::move(states), {}}; }

bool anchors_monotone(const Individual& ind) {
  for (std::size_t i = 1; i < ind.states.size(); ++i) {
    if (ind.states[i].anchor < ind.states[i - 1].anchor) return false;
  }
  return true;
}

// Independent check of the genome invariants against the raw tables.
void check_invariants(const dae::Heuristics& h, const Individual& ind, const dae::EvoParams& p) {
  CHECK(static_cast<int>(ind.states.size()) <= p.max_length);
  CHECK(anchors_monotone(ind));
  for (const auto& s : ind.states) {
    REQUIRE_FALSE(s.atoms.empty());
    CHECK(std::is_sorted(s.atoms.begin(), s.atoms.end()));
    planning::Ticks anchor = 0;
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
      CHECK(h.h1(s.atoms[i]) != dae::kUnreachable);
      anchor = std::max(anchor, h.h1(s.atoms[i]));
      for (std::size_t j = i + 1; j < s.atoms.size(); ++j) {
        CHECK_FALSE(h.mutex().mutex(s.atoms[i], s.atoms[j]));
      }
    }
    CHECK(anchor == s.anchor);
  }
}

}  // namespace

TEST_CASE("h1 earliest times") {
  const auto& t = mz(3);
  auto h = dae::h1_earliest(t);
  CHECK(h == h1_oracle(t));
  for (auto a : t.init().atoms()) CHECK(h[a] == 0);
  CHECK(h[atom(t, "(at plane1 city1)")] == 2);
  CHECK(h[atom(t, "(at person1 city4)")] == 4);
  CHECK(h[atom(t, "(at person1 city3)")] == 6);
  // `in` atoms are only ever deleted.
  CHECK(h[atom(t, "(in person1 plane1)")] == dae::kUnreachable);
  CHECK(dae::h1_earliest(mz(6)) == h1_oracle(mz(6)));
}

TEST_CASE("mutex pairs") {
  const auto& t = mz(3);
  auto m = dae::mutex_pairs(t);
  CHECK(m.mutex(atom(t, "(at person1 city0)"), atom(t, "(at person1 city4)")));
  CHECK(m.mutex(atom(t, "(at plane2 city1)"), atom(t, "(at plane2 city3)")));
  CHECK_FALSE(m.mutex(atom(t, "(at person1 city0)"), atom(t, "(at person2 city0)")));
  for (planning::AtomId a = 0; a < t.atom_count(); ++a) {
    CHECK_FALSE(m.mutex(a, a));
    for (planning::AtomId b = 0; b < t.atom_count(); ++b) CHECK(m.mutex(a, b) == m.mutex(b, a));
  }
  SUBCASE("sound against every reachable state") {
    auto states = reachable_states(t);
    std::set<std::pair<planning::AtomId, planning::AtomId>> together;
    for (const auto& s : states) {
      auto atoms = s.atoms();
      for (auto a : atoms) {
        for (auto b : atoms) together.emplace(a, b);
      }
    }
    std::size_t violations = 0;
    for (const auto& [a, b] : together) violations += m.mutex(a, b);
    CHECK(violations == 0);
    // MultiZeno3 is small enough for the pair fixpoint to be exact.
    std::size_t pairs = 0;
    for (planning::AtomId a = 0; a < t.atom_count(); ++a) {
      for (planning::AtomId b = a + 1; b < t.atom_count(); ++b) pairs += !together.count({a, b});
    }
    CHECK(m.pair_count() == pairs);
  }
}

TEST_CASE("params validation") {
  dae::EvoParams p;
  CHECK_NOTHROW(p.validate());
  p.pop_size = 5;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.w_addgoal = 0.5;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.w_cost = 6;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.radius = 11;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("init_individual") {
  dae::EvoParams p;
  for (int n : {3, 6}) {
    const auto& h = heur(n);
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      dae::Rng rng(seed);
      auto ind = dae::init_individual(h, p, rng);
      CHECK(ind.states.size() >= 1);
      check_invariants(h, ind, p);
      // Anchors are distinct h1 values.
      for (std::size_t i = 1; i < ind.states.size(); ++i) {
        CHECK(ind.states[i - 1].anchor < ind.states[i].anchor);
      }
    }
  }
  SUBCASE("all atoms at h1 = 0 gives single-state individuals") {
    std::vector<planning::GroundedAction> acts{{0, "swap", {0}, {1}, {0}, 1, 0, 0}};
    planning::GroundedTask flat({"p", "q"}, acts, {0, 1}, {1}, ObjectiveMode::CostSum);
    dae::Heuristics h(flat);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      dae::Rng rng(seed);
      CHECK(dae::init_individual(h, p, rng).states.size() == 1);
    }
  }
}

TEST_CASE("crossover_at") {
  const auto& h = heur(3);
  const auto& t = mz(3);
  auto s = [&](const char* a) { return ps(h, {atom(t, a)}); };
  auto p1 = ind_of({s("(at plane1 city1)"), s("(at person1 city4)"), s("(at person2 city3)")});
  auto p2 = ind_of({s("(at plane2 city1)"), s("(at plane2 city2)"), s("(at person3 city4)"),
                    s("(at person2 city4)"), s("(at person1 city3)")});
  REQUIRE(anchors_monotone(p1));
  REQUIRE(anchors_monotone(p2));

  auto same = crossover_at(p1, p2, 3, 5);
  REQUIRE(same);
  CHECK(same->states == p1.states);
  auto other = crossover_at(p1, p2, 0, 0);
  REQUIRE(other);
  CHECK(other->states == p2.states);

  for (std::size_t c1 = 0; c1 <= 3; ++c1) {
    for (std::size_t c2 = 0; c2 <= 5; ++c2) {
      auto child = dae::crossover_at(p1, p2, c1, c2);
      const bool ok = c1 == 0 || c2 == 5 || p1.states[c1 - 1].anchor <= p2.states[c2].anchor;
      CHECK(child.has_value() == ok);
      if (!child) continue;
      CHECK(child->states.size() == c1 + 5 - c2);
      CHECK(child->states.size() <= 8);
      CHECK(anchors_monotone(*child));
    }
  }
  CHECK_FALSE(dae::crossover_at(p1, p2, 1, 0, 5));
  CHECK(dae::crossover_at(p1, p2, 1, 0, 6));
}

TEST_CASE("mutation edge cases") {
  const auto& h = heur(3);
  const auto& t = mz(3);
  dae::EvoParams p;
  dae::Rng rng(1);
  auto one = ind_of({ps(h, {atom(t, "(at plane1 city1)")})});
  CHECK(dae::mutate_with(MutationKind::DelState, one, h, p, rng).states.empty());
  auto grown = dae::mutate_with(MutationKind::AddState, Individual{}, h, p, rng);
  CHECK(grown.states.size() == 1);
  check_invariants(h, grown, p);
  // DelAtom never empties a state.
  for (int i = 0; i < 100; ++i) {
    auto m = dae::mutate_with(MutationKind::DelAtom, one, h, p, rng);
    CHECK(m.states.size() == 1);
  }
}

TEST_CASE("10^4 applications of each operator keep the invariants") {
  const auto& h = heur(6);
  dae::EvoParams p;
  p.proba_change = 0.9;
  p.proba_delatom = 0.9;
  dae::Rng rng(2024);
  std::vector<Individual> pool;
  for (int i = 0; i < 30; ++i) pool.push_back(dae::init_individual(h, p, rng));
  auto pick = [&]() -> const Individual& {
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  };
  for (auto kind : {MutationKind::AddState, MutationKind::DelState, MutationKind::AddChangeAtom,
                    MutationKind::DelAtom}) {
    for (int i = 0; i < 10000; ++i) {
      auto child = dae::mutate_with(kind, pick(), h, p, rng);
      REQUIRE(h.valid(child));
      if (i % 10 == 0) check_invariants(h, child, p);
      pool[static_cast<std::size_t>(i) % pool.size()] = std::move(child);
    }
  }
  for (int i = 0; i < 10000; ++i) {
    auto child = dae::crossover(pick(), pick(), p, rng);
    REQUIRE(h.valid(child));
    if (i % 10 == 0) check_invariants(h, child, p);
    auto m = dae::mutate(child, h, p, rng);
    REQUIRE(h.valid(m));
    pool[static_cast<std::size_t>(i) % pool.size()] = std::move(m);
  }
}

TEST_CASE("evaluate") {
  const auto& t = mz(3);
  const auto& h = heur(3);
  planner::Solver solver(t);
  dae::Rng rng(5);
  SUBCASE("empty individual solves the whole problem") {
    auto r = dae::evaluate(Individual{}, h, solver, 1, 1, {100000, 1000000}, rng);
    CHECK(r.feasible);
    CHECK(r.total_subproblems == 1);
    REQUIRE(r.plan);
    CHECK(planning::validate_and_score(t, *r.plan) == r.objectives);
  }
  SUBCASE("unreachable atom in the first state") {
    auto bad = ind_of({PartialState{{atom(t, "(in person1 plane1)")}, 0}});
    auto r = dae::evaluate(bad, h, solver, 1, 1, {1000, 10000}, rng);
    CHECK_FALSE(r.feasible);
    CHECK(r.solved_subproblems == 0);
    CHECK(r.total_subproblems == 2);
  }
  SUBCASE("degenerate weights fix the strategy") {
    for (int i = 0; i < 50; ++i) {
      CHECK(dae::evaluate(Individual{}, h, solver, 5, 0, {2000, 20000}, rng).makespan_strategy);
      CHECK_FALSE(dae::evaluate(Individual{}, h, solver, 0, 5, {2000, 20000}, rng).makespan_strategy);
    }
  }
  SUBCASE("feasible results re-validate") {
    dae::EvoParams p;
    for (int i = 0; i < 300; ++i) {
      auto ind = dae::init_individual(h, p, rng);
      auto r = dae::evaluate(ind, h, solver, 1, 1, {2000, 20000}, rng);
      if (!r.feasible) {
        CHECK(r.solved_subproblems < r.total_subproblems);
        continue;
      }
      REQUIRE(r.plan);
      CHECK(planning::validate_and_score(t, *r.plan) == r.objectives);
    }
  }
}

TEST_CASE("penalty") {
  dae::Penalty pen;
  CHECK(pen.penalize(0, 2) == planning::ObjectiveVector{2000000, 2000000});
  CHECK(pen.penalize(1, 2) == planning::ObjectiveVector{1500000, 1500000});
  pen.observe({200000, 50});
  CHECK(pen.penalize(2, 2) == planning::ObjectiveVector{2000000, 1000000});
  // Every feasible vector dominates every penalized one.
  for (int solved = 0; solved <= 4; ++solved) {
    auto v = pen.penalize(solved, 4);
    CHECK(v.makespan > 200000);
    CHECK(v.secondary > 50);
  }
  // More solved subproblems rank better.
  CHECK(pen.penalize(3, 4).makespan < pen.penalize(1, 4).makespan);
}
