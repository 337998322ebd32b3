#include <algorithm>
#include <random>

#include "doctest.h"
#include "modae/planner/planner.hpp"
#include "support.hpp"

using namespace modae;
using planner::SearchBudget;
using planner::Strategy;
using planning::ObjectiveMode;
using test::act;
using test::atom;

namespace {

const planning::GroundedTask& mz(int n, ObjectiveMode mode) {
  static const auto c3 = test::zeno_task(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  static const auto r3 = test::zeno_task(zeno::Variant::Lin, 3, ObjectiveMode::RiskMax);
  static const auto c6 = test::zeno_task(zeno::Variant::Lin, 6, ObjectiveMode::CostSum);
  static const auto r6 = test::zeno_task(zeno::Variant::Lin, 6, ObjectiveMode::RiskMax);
  if (n == 3) return mode == ObjectiveMode::CostSum ? c3 : r3;
  return mode == ObjectiveMode::CostSum ? c6 : r6;
}

planning::ObjectiveVector score(const planning::GroundedTask& t, const std::vector<planning::ActionId>& seq) {
  planning::validate_sequential(t, seq);
  auto p = planning::compress(t, seq);
  return planning::validate_and_score(t, p);
}

}  // namespace

TEST_CASE("relaxed plan") {
  const auto& t = mz(3, ObjectiveMode::CostSum);
  SUBCASE("goal already holds") {
    std::vector<planning::AtomId> goal{atom(t, "(at person2 city0)")};
    auto rp = planner::relaxed_plan(t, t.init(), goal);
    REQUIRE(rp);
    CHECK(rp->empty());
  }
  SUBCASE("single passenger ends with a carry into city4") {
    std::vector<planning::AtomId> goal{atom(t, "(at person1 city4)")};
    for (auto s : {Strategy::makespan(), Strategy::cost()}) {
      auto rp = planner::relaxed_plan(t, t.init(), goal, s);
      REQUIRE(rp);
      int into = 0;
      for (auto id : *rp) {
        const auto& name = t.action(id).name;
        if (name.rfind("(fly-carry", 0) == 0 && name.find("person1") != std::string::npos &&
            name.find("city4)") != std::string::npos) {
          ++into;
        }
      }
      CHECK(into == 1);
    }
  }
  SUBCASE("init-true atoms are never unreachable") {
    auto s = planning::apply(t, t.init(), t.action(act(t, "(fly-empty plane1 city0 city1)")));
    std::vector<planning::AtomId> goal{atom(t, "(at plane1 city0)")};
    CHECK(planner::relaxed_plan(t, s, goal).has_value());
  }
  SUBCASE("unreachable goal") {
    std::vector<planning::GroundedAction> acts{{0, "a", {0}, {1}, {}, 1, 0, 0}};
    planning::GroundedTask tiny({"p", "q", "r"}, acts, {0}, {2}, ObjectiveMode::CostSum);
    CHECK_FALSE(planner::relaxed_plan(tiny, tiny.init(), tiny.goal()).has_value());
    auto r = planner::solve(tiny, Strategy::makespan(), {}, 1);
    CHECK_FALSE(r.plan);
    CHECK(r.proven_unreachable);
  }
}

TEST_CASE("goal already true: empty plan, nothing expanded") {
  auto t = test::with_goal(mz(3, ObjectiveMode::CostSum), {});
  auto r = planner::solve(t, Strategy::makespan(), {}, 3);
  REQUIRE(r.plan);
  CHECK(r.plan->empty());
  CHECK(r.expanded == 0);
}

TEST_CASE("full MultiZeno3 problem") {
  SUBCASE("makespan strategy stays within the slowest front point") {
    const auto& t = mz(3, ObjectiveMode::CostSum);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto r = planner::solve(t, Strategy::makespan(), {100000, 1000000}, seed);
      REQUIRE(r.plan);
      CHECK(score(t, *r.plan).makespan <= 24);
    }
  }
  SUBCASE("cost strategy never beats the minimum cost") {
    const auto& t = mz(3, ObjectiveMode::CostSum);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto r = planner::solve(t, Strategy::cost(), {100000, 1000000}, seed);
      REQUIRE(r.plan);
      CHECK(score(t, *r.plan).secondary >= 40);
    }
  }
  SUBCASE("risk mode") {
    const auto& t = mz(3, ObjectiveMode::RiskMax);
    for (auto s : {Strategy::makespan(), Strategy::cost()}) {
      auto r = planner::solve(t, s, {100000, 1000000}, 5);
      REQUIRE(r.plan);
      CHECK(score(t, *r.plan).secondary >= 10);
    }
  }
}

TEST_CASE("determinism and budget monotonicity") {
  const auto& t = mz(6, ObjectiveMode::CostSum);
  for (auto s : {Strategy::makespan(), Strategy::cost()}) {
    auto a = planner::solve(t, s, {1000, 100000}, 11);
    auto b = planner::solve(t, s, {1000, 100000}, 11);
    REQUIRE(a.plan);
    CHECK(*a.plan == *b.plan);
    CHECK(a.expanded == b.expanded);
    auto c = planner::solve(t, s, {100000, 1000000}, 11);
    REQUIRE(c.plan);
    CHECK(*c.plan == *a.plan);
  }
}

TEST_CASE("exhausted budget is a failure value") {
  const auto& t = mz(6, ObjectiveMode::RiskMax);
  auto r = planner::solve(t, Strategy::cost(), {1, 1}, 0);
  CHECK_FALSE(r.plan);
  CHECK_FALSE(r.proven_unreachable);
  CHECK(r.expanded <= 1);
}

TEST_CASE("random subproblems: returned plans are valid") {
  std::mt19937_64 rng(7);
  for (auto mode : {ObjectiveMode::CostSum, ObjectiveMode::RiskMax}) {
    const auto& t = mz(6, mode);
    planner::Solver solver(t);
    for (int trial = 0; trial < 200; ++trial) {
      // Start and goal are taken from a random walk so the goal is reachable.
      auto s = t.init();
      const int warm = std::uniform_int_distribution<int>(0, 10)(rng);
      const int walk = std::uniform_int_distribution<int>(1, 15)(rng);
      planning::State start;
      for (int i = 0; i < warm + walk; ++i) {
        if (i == warm) start = s;
        std::vector<const planning::GroundedAction*> ok;
        for (const auto& a : t.actions()) {
          if (planning::applicable(t, s, a)) ok.push_back(&a);
        }
        s = planning::apply(t, s, *ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)]);
      }
      if (warm + walk == warm) start = s;
      std::vector<planning::AtomId> goal;
      for (auto a : s.atoms()) {
        if (rng() % 3 == 0) goal.push_back(a);
      }
      auto strategy = trial % 2 ? Strategy::cost() : Strategy::makespan();
      auto r = solver.solve(start, goal, strategy, {5000, 50000}, trial);
      CHECK_FALSE(r.proven_unreachable);
      if (!r.plan) continue;
      auto cur = start;
      for (auto id : *r.plan) {
        REQUIRE(planning::applicable(t, cur, t.action(id)));
        cur = planning::apply(t, cur, t.action(id));
      }
      CHECK(cur.contains_all(goal));
    }
  }
}
