#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "modae/assess/front.hpp"
#include "modae/assess/hitting.hpp"
#include "modae/cli/cli.hpp"
#include "modae/core/error.hpp"

using namespace modae;
using planning::ObjectiveVector;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("modae-" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& s) const { return (path / s).string(); }
};

int modae_run(std::vector<std::string> args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int rc = cli::run(args, o, e);
  if (out) *out = o.str() + e.str();
  return rc;
}

moea::RunTrace fixture(std::uint64_t seed, std::vector<moea::TraceEvent> events, std::int64_t consumed) {
  moea::RunTrace t;
  t.seed = seed;
  t.engine = "pareto";
  t.config_digest = "fixture";
  t.events = std::move(events);
  std::vector<ObjectiveVector> pts;
  for (const auto& e : t.events) pts.push_back(e.point);
  t.archive = assess::nondominated(pts);
  t.final_population = t.archive;
  t.consumed = consumed;
  t.generations = 3;
  t.evaluations = 90;
  return t;
}

bool same_bytes(const std::string& a, const std::string& b) {
  return cli::read_file(a) == cli::read_file(b);
}

}  // namespace

TEST_CASE("trace JSONL round trip") {
  auto t = fixture(18446744073709551615ULL, {{0, {20, 40}}, {100, {8, 30}}, {100, {16, 20}}}, 150);
  t.stopped_early = true;
  cli::Units u{10, 1, planning::ObjectiveMode::RiskMax};
  const auto text = cli::write_trace(t, u);
  auto back = cli::read_trace(text);
  CHECK(back.units == u);
  CHECK(back.trace.seed == t.seed);
  CHECK(back.trace.engine == t.engine);
  CHECK(back.trace.events == t.events);
  CHECK(back.trace.archive == t.archive);
  CHECK(back.trace.final_population == t.final_population);
  CHECK(back.trace.consumed == 150);
  CHECK(back.trace.stopped_early);
  CHECK(cli::write_trace(back.trace, back.units) == text);

  CHECK_THROWS_AS(cli::read_trace(text.substr(0, text.rfind("{\"archive"))), Error);
  CHECK_THROWS_AS(cli::read_trace("{\"kind\":\"event\",\"budget\":1,\"point\":[1,2]}\n"), Error);
  CHECK_THROWS_AS(cli::read_trace("not json\n"), Error);
  auto bad = fixture(1, {{10, {8, 30}}, {5, {16, 20}}}, 20);
  CHECK_THROWS_AS(cli::read_trace(cli::write_trace(bad, u)), Error);
}

TEST_CASE("front and parameter files") {
  cli::Units u{10, 100, planning::ObjectiveMode::CostSum};
  std::vector<ObjectiveVector> f{{25, 12050}, {80, 100}};
  const auto text = cli::write_front(f, u);
  CHECK(text.find("\"2.5\"") != std::string::npos);
  CHECK(text.find("\"120.5\"") != std::string::npos);
  auto back = cli::read_front(text);
  CHECK(back.points == f);
  CHECK(back.units == u);

  dae::EvoParams p;
  p.pop_size = 50;
  p.proba_cross = 0.2;
  p.radius = 7;
  p.max_length = 12;
  CHECK(cli::read_params(cli::write_params(p)) == p);
  auto partial = cli::read_params(R"({"w-cost": 3})");
  CHECK(partial.w_cost == 3);
  CHECK(partial.pop_size == dae::EvoParams{}.pop_size);
  CHECK_THROWS_AS(cli::read_params(R"({"colour": 1})"), Error);
  CHECK_THROWS_AS(cli::read_params(R"({"proba-mut": 2})"), Error);
}

TEST_CASE("combining the α-runs of a repetition") {
  auto a = fixture(1, {{0, {8, 30}}, {40, {16, 20}}}, 50);
  auto b = fixture(2, {{10, {24, 10}}, {20, {16, 20}}, {30, {12, 20}}}, 60);
  auto c = cli::combine_alpha_runs({a, b});
  CHECK(c.consumed == 110);
  CHECK(c.events == std::vector<moea::TraceEvent>{{0, {8, 30}}, {20, {24, 10}}, {40, {16, 20}}, {60, {12, 20}}});
  CHECK(c.archive == std::vector<ObjectiveVector>{{8, 30}, {12, 20}, {24, 10}});
  CHECK(c.archive_at(59) == std::vector<ObjectiveVector>{{8, 30}, {16, 20}, {24, 10}});
  CHECK(cli::combine_alpha_runs({a}).events == a.events);
  CHECK_THROWS_AS(cli::combine_alpha_runs({}), ContractViolation);
}

TEST_CASE("report tables") {
  const std::vector<ObjectiveVector> front{{8, 30}, {16, 20}, {24, 10}};
  cli::RunSet set;
  set.kind = "pareto";
  set.runs = {fixture(1, {{0, {20, 40}}, {100, {8, 30}}, {300, {16, 20}}, {500, {24, 10}}}, 600),
              fixture(2, {{50, {24, 10}}, {200, {8, 30}}}, 600),
              fixture(3, {{0, {16, 20}}, {0, {24, 10}}, {400, {8, 30}}}, 700)};
  auto rep = cli::make_report(set, front);
  REQUIRE(rep.final_ihv.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(rep.final_ihv[i] == assess::unary_hv_diff(set.runs[i].archive, front));
  }
  CHECK(rep.front_hits == 2);
  CHECK_FALSE(rep.wilcoxon_p);
  // Hitting table equals the direct computation.
  auto cdf = assess::hitting_cdf(set.runs, front);
  for (const auto& c : cdf.points) {
    for (const auto& [b, f] : c.steps) {
      std::ostringstream want;
      want << b << ",\"" << c.label << "\",";
      CHECK(rep.hitting_csv.find(want.str()) != std::string::npos);
    }
  }
  CHECK(rep.hitting_csv.find("\n100,\"(8,30)\",0.3333333333333333\n") != std::string::npos);
  // hv curve row at budget 300: run 1 has (8,30),(16,20); run 2 has both of its points; run 3 lacks (8,30).
  const double r1 = assess::unary_hv_diff({{8, 30}, {16, 20}}, front);
  const double r2 = assess::unary_hv_diff({{24, 10}, {8, 30}}, front);
  const double r3 = assess::unary_hv_diff({{16, 20}, {24, 10}}, front);
  CHECK(rep.hv_csv.find("\n300,") != std::string::npos);
  const auto line_start = rep.hv_csv.find("\n300,") + 1;
  const auto line = rep.hv_csv.substr(line_start, rep.hv_csv.find('\n', line_start) - line_start);
  std::vector<double> cells;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) cells.push_back(std::stod(cell));
  REQUIRE(cells.size() == 5);
  CHECK(cells[1] == doctest::Approx(r1));
  CHECK(cells[2] == doctest::Approx(r2));
  CHECK(cells[3] == doctest::Approx(r3));
  CHECK(cells[4] == doctest::Approx((r1 + r2 + r3) / 3));
  CHECK(rep.hv_csv.rfind("budget,run-00,run-01,run-02,mean\n", 0) == 0);
  CHECK(rep.merged_csv == "makespan,secondary\n8,30\n16,20\n24,10\n");

  SUBCASE("self comparison") {
    auto self = cli::make_report(set, front, &set);
    REQUIRE(self.wilcoxon_p);
    CHECK(*self.wilcoxon_p == 1.0);
  }
  SUBCASE("all runs found the front") {
    cli::RunSet all = set;
    all.runs = {set.runs[0], set.runs[0]};
    auto r = cli::make_report(all, front);
    CHECK(r.summary_json.find("\"mean_final_ihv\": \"0\"") != std::string::npos);
    CHECK(r.front_hits == 2);
  }
  CHECK_THROWS_AS(cli::make_report(set, {}), Error);
  cli::RunSet small = set;
  small.runs.pop_back();
  CHECK_THROWS_AS(cli::make_report(set, front, &small), Error);
}

TEST_CASE("command line") {
  TempDir tmp("cli-test");
  std::string out;
  SUBCASE("errors") {
    CHECK(modae_run({"evolve", "--budget", "100", "--out", tmp / "x"}, &out) != 0);
    CHECK(out.find("--seed") != std::string::npos);
    CHECK(modae_run({"aggregate", "--budget", "100", "--out", tmp / "x"}) != 0);
    CHECK(modae_run({"tune", "--budget", "100", "--out", tmp / "x"}) != 0);
    CHECK(modae_run({"evolve", "--seed", "1", "--out", tmp / "x"}) != 0);  // no budget
    CHECK(modae_run({"evolve", "--manifest", tmp / "missing.json", "--out", tmp / "x"}) != 0);
    CHECK(modae_run({"report", tmp / "nowhere", "--out", tmp / "r"}) != 0);
    CHECK(modae_run({"oracle", "--variant", "spiral"}) != 0);
    CHECK(modae_run({"frobnicate"}) != 0);
    CHECK(modae_run({"aggregate", "--seed", "1", "--budget", "100", "--out", tmp / "x"}) != 0);  // 100 % 7
  }
  SUBCASE("generate, oracle and solve agree on the instance") {
    REQUIRE(modae_run({"generate", "--mode", "risk", "--out", tmp / "gen"}) == 0);
    REQUIRE(modae_run({"oracle", "--mode", "risk", "--out", tmp / "front.json"}, &out) == 0);
    CHECK(out == "8 30\n16 20\n24 10\n");
    REQUIRE(modae_run({"solve", "--domain", tmp / "gen/domain.pddl", "--problem", tmp / "gen/problem.pddl",
                       "--dump-ground", tmp / "ground.txt"},
                      &out) == 0);
    CHECK(out.find("makespan ") != std::string::npos);
    CHECK(cli::read_file(tmp / "ground.txt").find("atoms 31") != std::string::npos);
  }
  SUBCASE("evolve: reproducible from the manifest at any worker count") {
    REQUIRE(modae_run({"evolve", "--mode", "risk", "--seed", "42", "--reps", "2", "--budget", "3000",
                       "--out", tmp / "a", "--workers", "1"}) == 0);
    REQUIRE(modae_run({"evolve", "--manifest", tmp / "a/manifest.json", "--out", tmp / "b", "--workers", "2"}) == 0);
    for (auto f : {"run-00.jsonl", "run-01.jsonl", "front.json", "manifest.json"}) {
      CHECK(same_bytes(tmp / (std::string("a/") + f), tmp / (std::string("b/") + f)));
    }
    REQUIRE(modae_run({"oracle", "--mode", "risk", "--out", tmp / "front.json"}) == 0);
    REQUIRE(modae_run({"report", tmp / "a", "--front", tmp / "front.json", "--compare", tmp / "b", "--out",
                       tmp / "rep"},
                      &out) == 0);
    CHECK(out.find("wilcoxon p 1\n") != std::string::npos);
    // Re-running the report changes nothing.
    REQUIRE(modae_run({"report", tmp / "a", "--front", tmp / "front.json", "--compare", tmp / "b", "--out",
                       tmp / "rep2"}) == 0);
    for (auto f : {"hv.csv", "hitting.csv", "scatter.csv", "merged.csv", "summary.json"}) {
      CHECK(same_bytes(tmp / (std::string("rep/") + f), tmp / (std::string("rep2/") + f)));
    }
    REQUIRE(modae_run({"assess", "hv", "--front", tmp / "front.json", tmp / "a/run-00.jsonl"}, &out) == 0);
    auto set = cli::load_run_set(tmp / "a");
    CHECK(set.runs[0].consumed <= 3000);
    const auto last = out.substr(out.rfind(',') + 1);
    CHECK(std::stod(last) ==
          assess::unary_hv_diff(set.runs[0].archive, cli::read_front(cli::read_file(tmp / "front.json")).points));
  }
  SUBCASE("aggregate: fairness split and reproducibility") {
    REQUIRE(modae_run({"aggregate", "--mode", "cost", "--seed", "7", "--reps", "1", "--budget", "2100",
                       "--alphas", "0,0.5,1", "--out", tmp / "a", "--workers", "1"}) == 0);
    REQUIRE(modae_run({"aggregate", "--manifest", tmp / "a/manifest.json", "--out", tmp / "b", "--workers", "2"}) ==
            0);
    for (auto f : {"run-00-alpha-0.jsonl", "run-00-alpha-1.jsonl", "run-00-alpha-2.jsonl", "front.json"}) {
      CHECK(same_bytes(tmp / (std::string("a/") + f), tmp / (std::string("b/") + f)));
    }
    auto set = cli::load_run_set(tmp / "a");
    REQUIRE(set.runs.size() == 1);
    CHECK(set.kind == "aggregate");
    CHECK(set.runs[0].consumed <= 2100);
    auto part = cli::read_trace(cli::read_file(tmp / "a/run-00-alpha-1.jsonl"));
    CHECK(part.trace.consumed <= 700);
  }
  SUBCASE("tune: reproducible history") {
    std::vector<std::string> base{"tune", "--mode", "risk", "--seed", "3", "--budget", "1500", "--evals", "3",
                                  "--runs-per-eval", "1", "--parameters", "proba-mut,radius"};
    auto a = base;
    a.insert(a.end(), {"--out", tmp / "a", "--workers", "1"});
    REQUIRE(modae_run(a) == 0);
    REQUIRE(modae_run({"tune", "--manifest", tmp / "a/manifest.json", "--out", tmp / "b", "--workers", "2"}) == 0);
    CHECK(same_bytes(tmp / "a/tune-history.jsonl", tmp / "b/tune-history.jsonl"));
    CHECK(same_bytes(tmp / "a/best.json", tmp / "b/best.json"));
    std::istringstream hist(cli::read_file(tmp / "a/tune-history.jsonl"));
    int lines = 0;
    for (std::string l; std::getline(hist, l);) ++lines;
    CHECK(lines == 3);
    CHECK_NOTHROW(cli::read_params(cli::read_file(tmp / "a/best.json")));
  }
}
