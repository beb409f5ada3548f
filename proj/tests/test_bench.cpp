#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "abcd/bench.hpp"
#include "abcd/fixtures.hpp"
#include "abcd/problem_io.hpp"
#include "abcd/rng.hpp"

using namespace abcd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("abcd-test-" + std::to_string(std::rand()) + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<int> degrees(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> deg(n, 0);
  for (auto [i, j] : edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

}  // namespace

TEST_CASE("dense random graph is complete") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::ErdosRenyi;
  topo.n = 10;
  topo.p = 1.0;
  topo.seed = 42;
  auto edges = generate_edges(topo);
  CHECK(edges.size() == 45);
  std::set<std::pair<int, int>> unique(edges.begin(), edges.end());
  CHECK(unique.size() == 45);
  for (auto [i, j] : edges) CHECK(i < j);
}

TEST_CASE("preferential attachment keeps the promised degree floor") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::BarabasiAlbert;
  topo.n = 5;
  topo.attach = 3;
  topo.seed = 8;
  auto edges = generate_edges(topo);
  auto deg = degrees(5, edges);
  for (int d : deg) CHECK(d >= 3);

  // instances over these edges construct, hence are connected
  auto inst = generate_problem(topo, CoefficientSpec{});
  CHECK(inst.constraint_count() == static_cast<int>(edges.size()));
}

TEST_CASE("ring lattice without rewiring") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::WattsStrogatz;
  topo.n = 10;
  topo.ring_k = 3;  // odd: rounded up to 4
  topo.rewire = 0.0;
  topo.seed = 0;
  CHECK(effective_ring_degree(3) == 4);
  CHECK(effective_ring_degree(4) == 4);
  CHECK(effective_ring_degree(1) == 2);

  auto edges = generate_edges(topo);
  CHECK(edges.size() == 10 * 4 / 2);
  auto deg = degrees(10, edges);
  for (int d : deg) CHECK(d == 4);
  // every node links to its two nearest neighbors on each side
  std::set<std::pair<int, int>> have(edges.begin(), edges.end());
  for (int i = 0; i < 10; ++i) {
    for (int off : {1, 2}) {
      int j = (i + off) % 10;
      auto e = std::minmax(i, j);
      CHECK(have.count({e.first, e.second}) == 1);
    }
  }
}

TEST_CASE("generators are deterministic per seed") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::WattsStrogatz;
  topo.n = 14;
  topo.ring_k = 4;
  topo.rewire = 0.5;
  topo.seed = 77;
  CHECK(generate_edges(topo) == generate_edges(topo));
  auto other = topo;
  other.seed = 78;
  CHECK(generate_edges(topo) != generate_edges(other));
}

TEST_CASE("topology validation") {
  TopologyConfig topo;
  topo.n = 1;
  CHECK_THROWS_AS(topo.validate(), std::invalid_argument);
  topo.n = 5;
  topo.p = 1.5;
  CHECK_THROWS_AS(topo.validate(), std::invalid_argument);
  topo = TopologyConfig{};
  topo.kind = TopologyConfig::Kind::BarabasiAlbert;
  topo.attach = 0;
  CHECK_THROWS_AS(topo.validate(), std::invalid_argument);
  topo = TopologyConfig{};
  topo.kind = TopologyConfig::Kind::WattsStrogatz;
  topo.n = 4;
  topo.ring_k = 4;  // >= n
  CHECK_THROWS_AS(topo.validate(), std::invalid_argument);

  CHECK(topology_kind_from("er") == TopologyConfig::Kind::ErdosRenyi);
  CHECK(topology_kind_from("ba") == TopologyConfig::Kind::BarabasiAlbert);
  CHECK(topology_kind_from("ws") == TopologyConfig::Kind::WattsStrogatz);
  CHECK_THROWS_AS(topology_kind_from("ring"), std::invalid_argument);
  CHECK(std::string(topology_name(TopologyConfig::Kind::ErdosRenyi)) == "er");
}

TEST_CASE("an impossible connectivity target fails with a clear error") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::ErdosRenyi;
  topo.n = 30;
  topo.p = 0.0;  // no edges, never connected
  topo.seed = 1;
  CHECK_THROWS_WITH_AS(generate_edges(topo),
                       doctest::Contains("could not generate a connected"),
                       std::runtime_error);
}

TEST_CASE("generated coefficients respect their bounds") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::ErdosRenyi;
  topo.n = 8;
  topo.p = 0.5;
  topo.seed = 4;
  CoefficientSpec coeff;
  coeff.lo = -2;
  coeff.hi = 2;
  auto inst = generate_problem(topo, coeff, IntervalDomain{-3, 3});
  for (int a = 0; a < inst.agent_count(); ++a) {
    CHECK(inst.domain(a).lb == -3.0);
    CHECK(inst.domain(a).ub == 3.0);
  }
  for (const auto& c : inst.constraints()) {
    auto q = dynamic_cast<const QuadraticConstraint*>(c.get());
    REQUIRE(q != nullptr);
    for (double v : {q->coeffs().a, q->coeffs().b, q->coeffs().d, q->coeffs().e,
                     q->coeffs().f, q->coeffs().g}) {
      CHECK(v >= -2.0);
      CHECK(v < 2.0);
    }
  }
}

TEST_CASE("problem files round-trip losslessly") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::BarabasiAlbert;
  topo.n = 9;
  topo.attach = 2;
  topo.seed = 123;
  auto inst = generate_problem(topo, CoefficientSpec{});

  std::ostringstream out;
  save_problem(inst, out, {"topology ba n=9", "seed 123"});
  std::string text = out.str();
  CHECK(text.find("# topology ba n=9\n") == 0);

  std::istringstream in(text);
  auto loaded = load_problem(in);
  REQUIRE(loaded.agent_count() == inst.agent_count());
  REQUIRE(loaded.constraint_count() == inst.constraint_count());
  for (int a = 0; a < inst.agent_count(); ++a) {
    CHECK(loaded.domain(a).lb == inst.domain(a).lb);
    CHECK(loaded.domain(a).ub == inst.domain(a).ub);
  }
  for (int k = 0; k < inst.constraint_count(); ++k) {
    auto* orig = dynamic_cast<const QuadraticConstraint*>(inst.constraints()[k].get());
    auto* twin = dynamic_cast<const QuadraticConstraint*>(loaded.constraints()[k].get());
    REQUIRE(orig != nullptr);
    REQUIRE(twin != nullptr);
    CHECK(twin->first() == orig->first());
    CHECK(twin->second() == orig->second());
    CHECK(twin->coeffs().a == orig->coeffs().a);
    CHECK(twin->coeffs().b == orig->coeffs().b);
    CHECK(twin->coeffs().d == orig->coeffs().d);
    CHECK(twin->coeffs().e == orig->coeffs().e);
    CHECK(twin->coeffs().f == orig->coeffs().f);
    CHECK(twin->coeffs().g == orig->coeffs().g);
  }

  // a second save emits byte-identical text
  std::ostringstream again;
  save_problem(loaded, again, {"topology ba n=9", "seed 123"});
  CHECK(again.str() == text);
}

TEST_CASE("problem parsing is strict") {
  SUBCASE("unknown fields rejected") {
    std::istringstream in(R"({"n": 2, "domains": [[-1,1],[-1,1]],
      "constraints": [{"i":0,"j":1,"coeffs":[0,0,0,0,0,0]}], "extra": 1})");
    CHECK_THROWS_WITH_AS(load_problem(in), doctest::Contains("unknown field"),
                         std::runtime_error);
  }
  SUBCASE("missing fields rejected") {
    std::istringstream in(R"({"n": 2, "domains": [[-1,1],[-1,1]]})");
    CHECK_THROWS_WITH_AS(load_problem(in), doctest::Contains("missing field"),
                         std::runtime_error);
  }
  SUBCASE("unknown constraint fields rejected") {
    std::istringstream in(R"({"n": 2, "domains": [[-1,1],[-1,1]],
      "constraints": [{"i":0,"j":1,"coeffs":[0,0,0,0,0,0],"w":2}]})");
    CHECK_THROWS_AS(load_problem(in), std::runtime_error);
  }
  SUBCASE("malformed JSON rejected") {
    std::istringstream in("# comment only\n{not json");
    CHECK_THROWS_WITH_AS(load_problem(in), doctest::Contains("not valid JSON"),
                         std::runtime_error);
  }
  SUBCASE("comment-only input rejected") {
    std::istringstream in("# nothing else\n");
    CHECK_THROWS_WITH_AS(load_problem(in), doctest::Contains("no content"),
                         std::runtime_error);
  }
  SUBCASE("non-quadratic constraints cannot be saved") {
    auto inst = fixtures::four_agent_example();
    std::ostringstream out;
    CHECK_THROWS_AS(save_problem(inst, out), std::runtime_error);
  }
  SUBCASE("missing file carries the path in the error") {
    CHECK_THROWS_WITH_AS(load_problem_file("/nonexistent/p.json"),
                         doctest::Contains("/nonexistent/p.json"), std::runtime_error);
  }
}

TEST_CASE("plan files parse strictly") {
  std::istringstream in(R"(# sample plan
{"topology": {"kind": "er", "n": 6, "p": 0.6}, "coeffs": {"lo": -1, "hi": 1},
 "domain": [-4, 4], "variants": ["abcd-e"], "S": 8, "M": 2,
 "instances": 2, "repeats": 3, "iterations": 5, "seed": 99})");
  auto plan = load_plan(in);
  CHECK(plan.topology.kind == TopologyConfig::Kind::ErdosRenyi);
  CHECK(plan.topology.n == 6);
  CHECK(plan.topology.p == 0.6);
  CHECK(plan.coeffs.lo == -1.0);
  CHECK(plan.domain.lb == -4.0);
  CHECK(plan.variants == std::vector<Variant>{Variant::AbcdE});
  CHECK(plan.population_size == 8);
  CHECK(plan.elite_size == 2);
  CHECK(plan.instances == 2);
  CHECK(plan.repeats == 3);
  CHECK(plan.iterations == 5);
  CHECK(plan.base_seed == 99);

  SUBCASE("unknown plan fields rejected") {
    std::istringstream bad(R"({"topology": {"kind": "er", "n": 6}, "budget": 7})");
    CHECK_THROWS_WITH_AS(load_plan(bad), doctest::Contains("unknown field"),
                         std::runtime_error);
  }
  SUBCASE("unknown variant rejected") {
    std::istringstream bad(
        R"({"topology": {"kind": "er", "n": 6}, "variants": ["abcd-x"]})");
    CHECK_THROWS_WITH_AS(load_plan(bad), doctest::Contains("unknown variant"),
                         std::runtime_error);
  }
}

TEST_CASE("seed table is stable under extension") {
  CHECK(instance_seed(5, 0) == instance_seed(5, 0));
  CHECK(instance_seed(5, 0) != instance_seed(5, 1));
  CHECK(instance_seed(5, 0) != instance_seed(6, 0));

  auto s = run_seed(5, 2, 3, Variant::AbcdE);
  CHECK(s == run_seed(5, 2, 3, Variant::AbcdE));
  CHECK(s != run_seed(5, 2, 3, Variant::AbcdC));
  CHECK(s != run_seed(5, 2, 4, Variant::AbcdE));
  CHECK(s != run_seed(5, 3, 3, Variant::AbcdE));
}

TEST_CASE("experiment runner writes problems, traces, and aggregates") {
  ExperimentPlan plan;
  plan.topology.kind = TopologyConfig::Kind::ErdosRenyi;
  plan.topology.n = 5;
  plan.topology.p = 0.7;
  plan.population_size = 6;
  plan.elite_size = 2;
  plan.instances = 1;
  plan.repeats = 1;
  plan.iterations = 4;
  plan.base_seed = 31;

  TempDir dir;
  auto result = run_experiment(plan, dir.path.string());

  // 1 instance x 1 repeat x 2 variants
  REQUIRE(result.runs.size() == 2);
  CHECK(result.runs[0].variant == Variant::AbcdE);
  CHECK(result.runs[1].variant == Variant::AbcdC);
  REQUIRE(result.aggregate.size() == 2);
  CHECK(result.aggregate[0].runs == 1);
  CHECK(result.aggregate[0].stddev_final == 0.0);

  CHECK(fs::exists(dir.path / "instance_000.json"));
  CHECK(fs::exists(dir.path / "trace_i000_r00_abcd-e.csv"));
  CHECK(fs::exists(dir.path / "trace_i000_r00_abcd-c.csv"));
  CHECK(fs::exists(dir.path / "aggregate.csv"));

  auto trace_text = slurp(dir.path / "trace_i000_r00_abcd-e.csv");
  CHECK(trace_text.find("# algo=abcd-e") != std::string::npos);
  CHECK(trace_text.find("iteration,elapsed_ms,gbest_utility,") != std::string::npos);

  auto agg = slurp(dir.path / "aggregate.csv");
  CHECK(agg.find("instance,variant,runs,mean_final_utility,stddev_final_utility") !=
        std::string::npos);

  SUBCASE("the generated instance reloads and matches the run") {
    auto inst = load_problem_file((dir.path / "instance_000.json").string());
    CHECK(inst.agent_count() == 5);
  }

  SUBCASE("rerunning the plan reproduces aggregate bytes") {
    TempDir dir2;
    run_experiment(plan, dir2.path.string());
    CHECK(slurp(dir2.path / "aggregate.csv") == agg);
  }
}

TEST_CASE("experiment statistics come from the recorded runs") {
  ExperimentPlan plan;
  plan.topology.kind = TopologyConfig::Kind::ErdosRenyi;
  plan.topology.n = 4;
  plan.topology.p = 1.0;
  plan.population_size = 5;
  plan.elite_size = 2;
  plan.variants = {Variant::AbcdE};
  plan.instances = 2;
  plan.repeats = 3;
  plan.iterations = 3;
  plan.base_seed = 77;

  auto result = run_experiment(plan, "");
  REQUIRE(result.runs.size() == 6);
  REQUIRE(result.aggregate.size() == 2);
  for (const auto& row : result.aggregate) {
    std::vector<double> finals;
    for (const auto& run : result.runs)
      if (run.instance == row.instance && run.variant == row.variant)
        finals.push_back(run.final_utility);
    auto [mean, sd] = mean_stddev(finals);
    CHECK(row.runs == 3);
    CHECK(row.mean_final == mean);
    CHECK(row.stddev_final == sd);
  }
}

TEST_CASE("sample statistics") {
  auto [m1, s1] = mean_stddev({2, 4, 4, 4, 5, 5, 7, 9});
  CHECK(m1 == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(s1 == doctest::Approx(2.13808993529939).epsilon(1e-10));
  auto [m2, s2] = mean_stddev({3.5});
  CHECK(m2 == 3.5);
  CHECK(s2 == 0.0);
}

TEST_CASE("plot data emission") {
  std::vector<PlotPoint> pts{{1, 10, 0.5}, {2, 12, 0.25}};
  std::ostringstream out;
  emit_plot_data(pts, "iteration-vs-utility", out);
  std::string text = out.str();
  CHECK(text.find("# axis: iteration-vs-utility") == 0);
  CHECK(text.find("x,mean_utility,stddev_utility\n") != std::string::npos);
  CHECK(text.find("1,10,0.5\n") != std::string::npos);
  CHECK(text.find("2,12,0.25\n") != std::string::npos);

  SUBCASE("unknown axis rejected") {
    std::ostringstream o2;
    CHECK_THROWS_WITH_AS(emit_plot_data(pts, "n-vs-utility", o2),
                         doctest::Contains("unknown plot axis"), std::invalid_argument);
  }
  SUBCASE("empty data rejected") {
    std::ostringstream o2;
    CHECK_THROWS_AS(emit_plot_data({}, "S-vs-utility", o2), std::invalid_argument);
  }
}

TEST_CASE("iteration plot points average across traces") {
  AnytimeTrace a, b;
  for (int i = 1; i <= 3; ++i) {
    a.records.push_back(TraceRecord{i, 0, 10.0 * i, 0, 0, 0});
    b.records.push_back(TraceRecord{i, 0, 20.0 * i, 0, 0, 0});
  }
  auto pts = plot_points_iteration({a, b});
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].x == 1.0);
  CHECK(pts[0].mean == doctest::Approx(15.0));
  CHECK(pts[2].mean == doctest::Approx(45.0));

  b.records.pop_back();
  CHECK_THROWS_AS(plot_points_iteration({a, b}), std::invalid_argument);
  CHECK_THROWS_AS(plot_points_iteration({}), std::invalid_argument);
}

TEST_CASE("sweep plot points group by the swept value") {
  auto pts = plot_points_sweep({{10, 5.0}, {100, 9.0}, {10, 7.0}, {100, 11.0}});
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].x == 10.0);
  CHECK(pts[0].mean == doctest::Approx(6.0));
  CHECK(pts[1].x == 100.0);
  CHECK(pts[1].mean == doctest::Approx(10.0));
}
