#include <algorithm>

#include "doctest.h"
#include "modae/pddl/pddl.hpp"
#include "modae/zeno/zeno.hpp"
#include "support.hpp"

using namespace modae;
using planning::ObjectiveMode;

namespace {

zeno::PddlPair mz(int passengers, ObjectiveMode mode = ObjectiveMode::CostSum) {
  return zeno::generate(zeno::default_config(zeno::Variant::Lin, passengers, mode));
}

const char* kTinyDomain = R"(
(define (domain tiny)
  (:requirements :strips :typing)
  (:types thing)
  (:predicates (hot ?t - thing) (cold ?t - thing))
  (:action heat
    :parameters (?t - thing)
    :precondition (cold ?t)
    :effect (and (hot ?t) (not (cold ?t)))))
)";

int count_type(const pddl::ProblemAst& p, const std::string& type) {
  return static_cast<int>(std::count_if(p.objects.begin(), p.objects.end(),
                                         [&](const auto& o) { return o.type == type; }));
}

void check_parse_error(const std::string& text, const std::string& needle) {
  try {
    pddl::parse_domain(text);
    FAIL("expected a parse error");
  } catch (const pddl::ParseError& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

}  // namespace

TEST_CASE("generated domain parses into two schemas") {
  auto d = pddl::parse_domain(mz(3).domain);
  REQUIRE(d.actions.size() == 2);
  CHECK(d.actions[0].name == "fly-carry");
  CHECK(d.actions[1].name == "fly-empty");
  CHECK(d.actions[0].durative);
}

TEST_CASE("problem object counts") {
  auto pair = mz(3);
  auto d = pddl::parse_domain(pair.domain);
  auto p = pddl::parse_problem(pair.problem, d);
  CHECK(count_type(p, "person") == 3);
  CHECK(count_type(p, "plane") == 2);
  CHECK(count_type(p, "city") == 5);
  auto p6 = pddl::parse_problem(mz(6).problem, d);
  CHECK(count_type(p6, "person") == 6);
}

TEST_CASE("parse errors") {
  SUBCASE("empty input at 1:1") {
    try {
      pddl::parse_domain("");
      FAIL("expected a parse error");
    } catch (const pddl::ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 1);
    }
  }
  SUBCASE("undeclared predicate is named") {
    std::string text = kTinyDomain;
    text.replace(text.find(":precondition (cold ?t)"), 23, ":precondition (warm ?t)");
    check_parse_error(text, "warm");
  }
  SUBCASE("unknown requirement") {
    std::string text = kTinyDomain;
    text.replace(text.find(":strips"), 7, ":fluffy");
    check_parse_error(text, ":fluffy");
  }
  SUBCASE("unbalanced parentheses carry a position") {
    try {
      pddl::parse_domain("(define (domain x)\n  (:types a)");
      FAIL("expected a parse error");
    } catch (const pddl::ParseError& e) {
      CHECK(e.line() >= 1);
    }
  }
  SUBCASE("problem errors") {
    auto pair = mz(3);
    auto d = pddl::parse_domain(pair.domain);
    std::string goal = pair.problem;
    auto pos = goal.find("(at person1 city4)");
    REQUIRE(pos != std::string::npos);
    goal.replace(pos, 18, "(at person7 city4)");
    CHECK_THROWS_AS(pddl::parse_problem(goal, d), pddl::ParseError);

    std::string arity = pair.problem;
    arity.replace(arity.find("(at person1 city4)"), 18, "(at person1)");
    CHECK_THROWS_AS(pddl::parse_problem(arity, d), pddl::ParseError);

    std::string type = pair.problem;
    type.replace(type.find("- person"), 8, "- martian");
    CHECK_THROWS_AS(pddl::parse_problem(type, d), pddl::ParseError);
  }
}

TEST_CASE("print then parse round-trips") {
  for (int n : {3, 6}) {
    for (auto mode : {ObjectiveMode::CostSum, ObjectiveMode::RiskMax}) {
      auto pair = mz(n, mode);
      auto d = pddl::parse_domain(pair.domain);
      auto p = pddl::parse_problem(pair.problem, d);
      CHECK(pddl::parse_domain(pddl::print_domain(d)) == d);
      CHECK(pddl::parse_problem(pddl::print_problem(p), d) == p);
      CHECK(p.metric == mode);
    }
  }
  auto tiny = pddl::parse_domain(kTinyDomain);
  CHECK(pddl::parse_domain(pddl::print_domain(tiny)) == tiny);
}

TEST_CASE("grounding counts") {
  auto t3 = test::zeno_task(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  CHECK(t3.action_count() == 144);
  CHECK(t3.atom_count() == 31);
  auto t9 = test::zeno_task(zeno::Variant::Lin, 9, ObjectiveMode::CostSum);
  CHECK(t9.atom_count() == 73);
  CHECK(t9.action_count() == 2 * 9 * 2 * (1 + 9));
  CHECK(t9.goal().size() == 9);

  const auto& a = t3.action(t3.action_id("(fly-carry plane1 person1 city0 city1)"));
  CHECK(a.duration == 2);
  CHECK(a.cost == 30);
  CHECK(t3.action(t3.action_id("(fly-empty plane2 city3 city4)")).duration == 6);
  CHECK(t3.action(t3.action_id("(fly-empty plane2 city3 city4)")).cost == 0);
}

TEST_CASE("atom ids follow lexicographic name order") {
  auto t = test::zeno_task(zeno::Variant::Lin, 3, ObjectiveMode::RiskMax);
  for (std::size_t i = 1; i < t.atom_count(); ++i) {
    CHECK(t.atoms()[i - 1].name < t.atoms()[i].name);
  }
  for (std::size_t i = 1; i < t.action_count(); ++i) {
    CHECK(t.actions()[i - 1].name < t.actions()[i].name);
  }
}

TEST_CASE("grounding is deterministic") {
  auto a = test::zeno_task(zeno::Variant::Ccve, 6, ObjectiveMode::CostSum);
  auto b = test::zeno_task(zeno::Variant::Ccve, 6, ObjectiveMode::CostSum);
  CHECK(pddl::dump_grounding(a) == pddl::dump_grounding(b));
}

TEST_CASE("goal already true grounds and the empty plan is valid") {
  std::string problem = R"(
(define (problem warm) (:domain tiny)
  (:objects kettle - thing)
  (:init (hot kettle))
  (:goal (and (hot kettle))))
)";
  auto d = pddl::parse_domain(kTinyDomain);
  auto t = pddl::ground(d, pddl::parse_problem(problem, d));
  CHECK(t.action_count() == 0);  // (cold kettle) is unreachable
  CHECK(planning::validate_and_score(t, planning::Plan{}) == planning::ObjectiveVector{0, 0});
}

TEST_CASE("plain actions have unit duration") {
  std::string problem = R"(
(define (problem cool) (:domain tiny)
  (:objects kettle pot - thing)
  (:init (cold kettle) (cold pot))
  (:goal (and (hot kettle) (hot pot))))
)";
  auto d = pddl::parse_domain(kTinyDomain);
  auto t = pddl::ground(d, pddl::parse_problem(problem, d));
  REQUIRE(t.action_count() == 2);
  CHECK(t.action(0).duration == 1);
  auto p = planning::compress(t, std::vector<planning::ActionId>{0, 1});
  CHECK(p.objectives.makespan == 1);
}

TEST_CASE("decimal constants scale exactly") {
  auto cfg = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  auto pair = zeno::generate(cfg);
  auto pos = pair.problem.find("(= (flight-time city0 city1) 2)");
  REQUIRE(pos != std::string::npos);
  pair.problem.replace(pos, 31, "(= (flight-time city0 city1) 2.5)");
  auto d = pddl::parse_domain(pair.domain);
  auto t = pddl::ground(d, pddl::parse_problem(pair.problem, d));
  CHECK(t.scales().time_denominator == 10);
  CHECK(t.action(t.action_id("(fly-empty plane1 city0 city1)")).duration == 25);
  CHECK(t.action(t.action_id("(fly-empty plane1 city1 city2)")).duration == 30);
}

TEST_CASE("dump_grounding lists every atom and action") {
  auto t = test::zeno_task(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  auto text = pddl::dump_grounding(t);
  CHECK(text.find("(at person1 city0)") != std::string::npos);
  CHECK(text.find("(fly-empty plane2 city4 city3)") != std::string::npos);
}
