#include "brute_force.hpp"
#include "doctest.h"
#include "modae/pddl/pddl.hpp"
#include "modae/zeno/zeno.hpp"
#include "support.hpp"

using namespace modae;
using planning::ObjectiveMode;
using planning::ObjectiveVector;
using V = std::vector<ObjectiveVector>;

namespace {

zeno::ExactFront front_of(const zeno::ZenoConfig& cfg, planning::Ticks bound) {
  auto task = test::zeno_task(cfg);
  return zeno::exact_front(cfg, task, bound);
}

void check_witnesses(const zeno::ZenoConfig& cfg, const zeno::ExactFront& f) {
  auto task = test::zeno_task(cfg);
  for (const auto& p : f.points) {
    CHECK(planning::validate_and_score(task, p.plan) == p.objectives);
  }
}

}  // namespace

TEST_CASE("default configs follow the instance table") {
  auto lin = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  CHECK(lin.edges.size() == 9);
  CHECK(lin.edges[0] == zeno::Edge{0, 1, 2});
  CHECK(lin.central_costs.at(1) == 30);
  CHECK(lin.central_costs.at(2) == 20);
  CHECK(lin.central_costs.at(3) == 10);

  auto cvx = zeno::default_config(zeno::Variant::Cvx, 6, ObjectiveMode::CostSum);
  CHECK(cvx.central_costs.at(2) == 11);
  for (std::size_t i = 0; i < 9; ++i) CHECK(cvx.edges[i].duration == lin.edges[i].duration);

  auto ccve = zeno::default_config(zeno::Variant::Ccve, 6, ObjectiveMode::CostSum);
  CHECK(ccve.edges[3].duration == 1);
  CHECK(ccve.central_costs.at(2) == 29);
}

TEST_CASE("config validation") {
  auto c = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  c.edges[0].duration = 0;
  CHECK_THROWS_AS(zeno::validate(c), Error);
  c = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  c.edges.resize(6);  // nothing reaches city4
  CHECK_THROWS_AS(zeno::validate(c), Error);
  c = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  c.central_risks[2] = -1;
  CHECK_THROWS_AS(zeno::validate(c), Error);
}

TEST_CASE("generated problems") {
  for (auto v : {zeno::Variant::Lin, zeno::Variant::Cvx, zeno::Variant::Ccve}) {
    for (int n : {3, 6, 9}) {
      auto cfg = zeno::default_config(v, n, ObjectiveMode::RiskMax);
      auto task = test::zeno_task(cfg);
      CHECK(task.goal().size() == static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        CHECK(task.init().test(task.atom_id("(at " + zeno::person_name(i) + " city0)")));
      }
      CHECK(task.init().count() == static_cast<std::size_t>(n + 2));
    }
  }
}

TEST_CASE("exact fronts, MultiZeno3") {
  auto risk = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::RiskMax);
  auto fr = front_of(risk, 60);
  CHECK(fr.vectors() == V{{8, 30}, {16, 20}, {24, 10}});
  check_witnesses(risk, fr);

  auto cost = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  auto fc = front_of(cost, 60);
  REQUIRE(!fc.points.empty());
  CHECK(fc.points.front().objectives == ObjectiveVector{8, 120});
  CHECK(fc.points.back().objectives == ObjectiveVector{24, 40});
  CHECK(fc.vectors() == V{{8, 120}, {12, 100}, {16, 80}, {20, 60}, {24, 40}});
  check_witnesses(cost, fc);

  CHECK(zeno::min_secondary(cost) == 40);
  CHECK(zeno::min_secondary(risk) == 10);
}

TEST_CASE("brute force agrees on the MultiZeno3 risk front") {
  auto task = test::zeno_task(zeno::Variant::Lin, 3, ObjectiveMode::RiskMax);
  test::BruteForceFront bf(task, 24);
  CHECK(bf.run() == V{{8, 30}, {16, 20}, {24, 10}});
}

TEST_CASE("exact front, MultiZeno6 risk has middle point (40,20)") {
  auto cfg = zeno::default_config(zeno::Variant::Lin, 6, ObjectiveMode::RiskMax);
  auto f = front_of(cfg, 100);
  CHECK(f.vectors() == V{{20, 30}, {40, 20}, {60, 10}});
  check_witnesses(cfg, f);
}

TEST_CASE("other variants, MultiZeno3 cost") {
  auto cvx = zeno::default_config(zeno::Variant::Cvx, 3, ObjectiveMode::CostSum);
  auto fv = front_of(cvx, 60);
  CHECK(fv.vectors() == V{{8, 120}, {12, 82}, {16, 44}, {20, 42}, {24, 40}});
  check_witnesses(cvx, fv);
  auto ccve = zeno::default_config(zeno::Variant::Ccve, 3, ObjectiveMode::CostSum);
  auto fa = front_of(ccve, 60);
  CHECK(fa.vectors() == V{{8, 120}, {10, 118}, {12, 80}, {14, 78}, {16, 40}});
  check_witnesses(ccve, fa);
}

TEST_CASE("front invariants") {
  auto cfg = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  auto a = front_of(cfg, 60).vectors();
  CHECK(a == front_of(cfg, 80).vectors());
  for (std::size_t i = 1; i < a.size(); ++i) {
    CHECK(a[i - 1].makespan < a[i].makespan);
    CHECK(a[i - 1].secondary > a[i].secondary);
  }
  // Risk fronts have at most one point per distinct central risk value.
  auto risk = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::RiskMax);
  CHECK(front_of(risk, 60).points.size() <= 3);
}

TEST_CASE("too small a bound is reported") {
  auto cfg = zeno::default_config(zeno::Variant::Lin, 3, ObjectiveMode::CostSum);
  CHECK_THROWS_AS(front_of(cfg, 20), zeno::IncompleteFrontError);
}
