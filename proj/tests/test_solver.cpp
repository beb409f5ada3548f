#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <sstream>

#include "abcd/bench.hpp"
#include "abcd/fixtures.hpp"
#include "abcd/grid.hpp"
#include "abcd/pseudo_tree.hpp"
#include "abcd/replica.hpp"
#include "abcd/solver.hpp"

using namespace abcd;

namespace {

constexpr double kTight = 1e-12;

CdcopInstance product_pair() {
  std::vector<std::shared_ptr<const BinaryConstraint>> cs;
  cs.push_back(std::make_shared<CallableConstraint>(
      0, 1, [](double x, double y) { return x * y; }));
  return CdcopInstance({IntervalDomain{-10, 10}, IntervalDomain{-10, 10}}, std::move(cs));
}

CdcopInstance flat_pair() {
  std::vector<std::shared_ptr<const BinaryConstraint>> cs;
  cs.push_back(
      std::make_shared<CallableConstraint>(0, 1, [](double, double) { return 0.0; }));
  return CdcopInstance({IntervalDomain{-10, 10}, IntervalDomain{-10, 10}}, std::move(cs));
}

// utility that only reads agent 0's value; handy for rigging fitness
CdcopInstance first_value_pair() {
  std::vector<std::shared_ptr<const BinaryConstraint>> cs;
  cs.push_back(
      std::make_shared<CallableConstraint>(0, 1, [](double x, double) { return x; }));
  return CdcopInstance({IntervalDomain{-10, 10}, IntervalDomain{-10, 10}}, std::move(cs));
}

SolverConfig small_config(int S, int M, std::uint64_t seed = 7) {
  SolverConfig cfg;
  cfg.population_size = S;
  cfg.elite_size = M;
  cfg.iterations = 10;
  cfg.seed = seed;
  return cfg;
}

struct Rig {
  CdcopInstance inst;
  PseudoTree tree;
  std::unique_ptr<AbcdSolver> solver;

  Rig(CdcopInstance in, const SolverConfig& cfg) : inst(std::move(in)) {
    tree = build_bfs_pseudo_tree(inst, cfg.seed, cfg.root_rule);
    solver = std::make_unique<AbcdSolver>(inst, tree, cfg);
  }
};

void set_solution(AbcdSolver& s, int u, const Assignment& x) {
  for (int a = 0; a < s.agent_count(); ++a) SolverTestAccess::set_population_x(s, a, u, x[a]);
}

}  // namespace

TEST_CASE("initial draw maps the unit interval onto the domain") {
  CHECK(init_draw({-10, 10}, 0.5) == doctest::Approx(0.0).epsilon(kTight));
  CHECK(init_draw({-10, 10}, 0.0) == -10.0);
  CHECK(init_draw({2, 6}, 0.75) == doctest::Approx(5.0).epsilon(kTight));
}

TEST_CASE("domain clamp") {
  IntervalDomain dom{-10, 10};
  CHECK(clamp_to_domain(12, dom) == 10.0);
  CHECK(clamp_to_domain(-11, dom) == -10.0);
  CHECK(clamp_to_domain(3.5, dom) == 3.5);
}

TEST_CASE("candidate update rule") {
  IntervalDomain dom{-10, 10};
  CHECK(candidate_update(2, 4, 1, 3, 0.5, 1, dom) == doctest::Approx(-1.0).epsilon(kTight));
  // with both random weights at zero only the midpoint term survives
  CHECK(candidate_update(2, 4, 99, -99, 0, 0, dom) == doctest::Approx(3.0).epsilon(kTight));
  // coincident inputs are a fixed point for any weights
  for (double phi : {-0.5, 0.0, 0.37}) {
    for (double cap : {0.0, 0.6, 1.0}) {
      CHECK(candidate_update(2.5, 2.5, 2.5, 2.5, phi, cap, dom) ==
            doctest::Approx(2.5).epsilon(kTight));
    }
  }
  // clamping keeps the result inside the domain
  CHECK(candidate_update(10, 10, 10, -10, 0.5, 1, dom) == 10.0);
  CHECK(candidate_update(-10, -10, -10, 10, 0.5, 1, dom) == -10.0);
}

TEST_CASE("selection weights and probabilities") {
  CHECK(positive_fitness(-3.0) == doctest::Approx(0.25).epsilon(kTight));
  CHECK(positive_fitness(0.0) == doctest::Approx(1.0).epsilon(kTight));
  CHECK(positive_fitness(4.0) == doctest::Approx(5.0).epsilon(kTight));

  auto fit = selection_fit({-3, 0, 4});
  REQUIRE(fit.size() == 3);
  CHECK(fit[0] == doctest::Approx(0.25).epsilon(kTight));
  CHECK(fit[1] == doctest::Approx(1.0).epsilon(kTight));
  CHECK(fit[2] == doctest::Approx(5.0).epsilon(kTight));
  for (double f : fit) CHECK(f > 0);

  auto probs = selection_probabilities({1, 3});
  REQUIRE(probs.size() == 2);
  CHECK(probs[0] == doctest::Approx(0.25).epsilon(kTight));
  CHECK(probs[1] == doctest::Approx(0.75).epsilon(kTight));

  double total = 0;
  for (double p : selection_probabilities(selection_fit({-100, -1, 0, 3, 900}))) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("elite index selection") {
  auto top = top_elite_indices({5, 9, 9}, 2);
  CHECK(top == std::vector<int>{1, 2});  // tie at 9 broken by lower index
  CHECK(top_elite_indices({5, 9, 9}, 3) == std::vector<int>{1, 2, 0});
  CHECK(top_elite_indices({1, 2, 3}, 0).empty());
  CHECK_THROWS_AS(top_elite_indices({1, 2}, 3), std::invalid_argument);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  SolverConfig bad = cfg;
  bad.population_size = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.elite_size = cfg.population_size + 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.iterations = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.phi_lo = 1.0;
  bad.phi_hi = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.time_limit_ms = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(std::string(variant_name(Variant::AbcdE)) == "abcd-e");
  CHECK(std::string(variant_name(Variant::AbcdC)) == "abcd-c");
}

TEST_CASE("initialization state") {
  Rig rig(fixtures::four_agent_example(), small_config(6, 2));
  auto& s = *rig.solver;
  CHECK_THROWS_AS(s.evaluate(SliceLabel::Population), std::logic_error);
  s.initialize();
  CHECK_THROWS_AS(s.initialize(), std::logic_error);

  CHECK(s.gbest_fitness() == -std::numeric_limits<double>::infinity());
  for (int a = 0; a < s.agent_count(); ++a) {
    const auto& dom = rig.inst.domain(a);
    REQUIRE(s.population(a).size() == 6);
    for (const auto& o : s.population(a)) CHECK(dom.contains(o.x));
  }
  for (int u = 0; u < 6; ++u)
    for (int a = 0; a < 4; ++a) CHECK_FALSE(s.visited_flag(u, a));
}

TEST_CASE("evaluate aggregates and halves at the root") {
  SUBCASE("four-agent fixture, all-zero solution") {
    Rig rig(fixtures::four_agent_example(), small_config(3, 1));
    auto& s = *rig.solver;
    s.initialize();
    set_solution(s, 0, {0, 0, 0, 0});
    s.evaluate(SliceLabel::Population);
    CHECK(s.root_population_fitness()[0] == 49.0);
  }
  SUBCASE("product constraint double-counts then halves") {
    Rig rig(product_pair(), small_config(2, 1));
    auto& s = *rig.solver;
    s.initialize();
    set_solution(s, 0, {3, 4});
    s.evaluate(SliceLabel::Population);
    CHECK(s.root_population_fitness()[0] == 12.0);
    CHECK(s.population(0)[0].local_fitness == 12.0);
    CHECK(s.population(1)[0].local_fitness == 12.0);

    // purity: a second pass over unchanged values reproduces the fitness
    double before = s.root_population_fitness()[1];
    s.evaluate(SliceLabel::Population);
    CHECK(s.root_population_fitness()[0] == 12.0);
    CHECK(s.root_population_fitness()[1] == before);
  }
}

TEST_CASE("build refreshes elites with the index tie-break") {
  Rig rig(first_value_pair(), small_config(3, 2));
  auto& s = *rig.solver;
  s.initialize();
  // fitness equals agent 0's value: rig to [5, 9, 9]
  SolverTestAccess::set_population_x(s, 0, 0, 5);
  SolverTestAccess::set_population_x(s, 0, 1, 9);
  SolverTestAccess::set_population_x(s, 0, 2, 9);
  s.build_phase();

  REQUIRE(s.root_population_fitness().size() == 3);
  CHECK(s.root_population_fitness() == std::vector<double>{5, 9, 9});
  for (int a = 0; a < 2; ++a) {
    const auto& elite = s.elite_slice(a);
    REQUIRE(elite.size() == 2);
    CHECK(elite[0].x == s.population(a)[1].x);
    CHECK(elite[1].x == s.population(a)[2].x);
  }
  CHECK(s.gbest_fitness() == 9.0);
  CHECK(s.gbest_assignment()[0] == s.population(0)[1].x);

  SUBCASE("a worse population later leaves the best alone") {
    SolverTestAccess::set_population_x(s, 0, 0, -2);
    SolverTestAccess::set_population_x(s, 0, 1, -2);
    SolverTestAccess::set_population_x(s, 0, 2, -2);
    s.build_phase();
    CHECK(s.gbest_fitness() == 9.0);  // strictly-better updates only
  }
}

TEST_CASE("elite size equal to population copies everything") {
  Rig rig(first_value_pair(), small_config(3, 3));
  auto& s = *rig.solver;
  s.initialize();
  SolverTestAccess::set_population_x(s, 0, 0, 1);
  SolverTestAccess::set_population_x(s, 0, 1, 7);
  SolverTestAccess::set_population_x(s, 0, 2, 4);
  s.build_phase();
  // ordered best-first: population indices 1, 2, 0
  const auto& elite = s.elite_slice(0);
  CHECK(elite[0].x == s.population(0)[1].x);
  CHECK(elite[1].x == s.population(0)[2].x);
  CHECK(elite[2].x == s.population(0)[0].x);
}

TEST_CASE("employed ties never replace") {
  Rig rig(flat_pair(), small_config(4, 2));
  auto& s = *rig.solver;
  s.initialize();
  s.build_phase();

  std::vector<std::vector<double>> before(2);
  for (int a = 0; a < 2; ++a)
    for (const auto& o : s.population(a)) before[a].push_back(o.x);
  double gbest_before = s.gbest_fitness();

  s.employed_phase();

  for (int a = 0; a < 2; ++a) {
    const auto& pop = s.population(a);
    for (std::size_t u = 0; u < pop.size(); ++u) CHECK(pop[u].x == before[a][u]);
  }
  CHECK(s.gbest_fitness() == gbest_before);
  CHECK(s.root_population_fitness() == std::vector<double>{0, 0, 0, 0});
}

TEST_CASE("employed improvements update the best in the same pass") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::ErdosRenyi;
  topo.n = 6;
  topo.p = 0.6;
  topo.seed = 11;
  Rig rig(generate_problem(topo, CoefficientSpec{}), small_config(8, 3, 5));
  auto& s = *rig.solver;
  s.initialize();
  for (int it = 0; it < 12; ++it) {
    s.build_phase();
    s.employed_phase();
    // the best-so-far always dominates the whole population right after
    // the employed replacements commit
    for (double f : s.root_population_fitness()) CHECK_FALSE(f > s.gbest_fitness());
    s.compute_selection_probabilities();
    s.onlooker_phase();
    s.scout_phase();
  }
}

TEST_CASE("request counts follow the configured sizes") {
  SUBCASE("four employed requests when S=4") {
    Rig rig(product_pair(), small_config(4, 2));
    auto& s = *rig.solver;
    s.initialize();
    s.run_iteration();
    REQUIRE(s.iteration_counters().size() == 1);
    CHECK(s.iteration_counters()[0].employed_requests == 4);
  }
  SUBCASE("six onlooker requests when S=3, M=2") {
    Rig rig(product_pair(), small_config(3, 2));
    auto& s = *rig.solver;
    s.initialize();
    s.run_iteration();
    CHECK(s.iteration_counters()[0].onlooker_requests == 6);
    CHECK(s.iteration_counters()[0].employed_requests == 3);
    CHECK(s.iteration_counters()[0].evaluate_invocations == 3 + 2);
  }
  SUBCASE("four onlooker requests when S=2, M=2") {
    Rig rig(product_pair(), small_config(2, 2));
    auto& s = *rig.solver;
    s.initialize();
    s.run_iteration();
    CHECK(s.iteration_counters()[0].onlooker_requests == 4);
  }
}

TEST_CASE("selection vectors live at the root and normalize") {
  Rig rig(first_value_pair(), small_config(3, 2));
  auto& s = *rig.solver;
  s.initialize();
  SolverTestAccess::set_population_x(s, 0, 0, -3);
  SolverTestAccess::set_population_x(s, 0, 1, 0);
  SolverTestAccess::set_population_x(s, 0, 2, 3);
  s.build_phase();
  s.compute_selection_probabilities();

  const auto& fit = s.selection_fit_values();
  REQUIRE(fit.size() == 3);
  CHECK(fit[0] == doctest::Approx(0.25).epsilon(kTight));
  CHECK(fit[1] == doctest::Approx(1.0).epsilon(kTight));
  CHECK(fit[2] == doctest::Approx(4.0).epsilon(kTight));

  const auto& prob = s.selection_prob_values();
  double total = 0;
  for (double p : prob) {
    CHECK(p > 0);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prob[2] > prob[1]);
  CHECK(prob[1] > prob[0]);
}

TEST_CASE("a degenerate selection distribution always picks its mass point") {
  Rig rig(product_pair(), small_config(2, 1));
  auto& s = *rig.solver;
  s.initialize();
  s.build_phase();
  SolverTestAccess::ledger(s).fit = {1.0, 0.0};
  SolverTestAccess::ledger(s).prob = {1.0, 0.0};

  std::ostringstream log;
  s.network().set_message_log(&log);
  s.onlooker_phase();
  s.network().set_message_log(nullptr);

  int copies = 0;
  std::istringstream lines(log.str());
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find("SolutionCopyDown") == std::string::npos) continue;
    ++copies;
    CHECK(line.substr(line.rfind(',') + 1) == "0");  // always solution 0
  }
  CHECK(copies == 2);  // one copy broadcast per selection, S selections
}

TEST_CASE("onlooker without strict improvement changes nothing") {
  Rig rig(flat_pair(), small_config(3, 2));
  auto& s = *rig.solver;
  s.initialize();
  s.build_phase();
  s.employed_phase();
  s.compute_selection_probabilities();

  std::vector<std::vector<double>> before(2);
  for (int a = 0; a < 2; ++a)
    for (const auto& o : s.population(a)) before[a].push_back(o.x);
  std::vector<std::vector<bool>> marks(3, std::vector<bool>(2));
  for (int u = 0; u < 3; ++u)
    for (int a = 0; a < 2; ++a) marks[u][a] = s.visited_flag(u, a);

  s.onlooker_phase();

  for (int a = 0; a < 2; ++a) {
    const auto& pop = s.population(a);
    for (std::size_t u = 0; u < pop.size(); ++u) CHECK(pop[u].x == before[a][u]);
  }
  // no replacement happened, so no visited row was reset
  for (int u = 0; u < 3; ++u)
    for (int a = 0; a < 2; ++a)
      if (marks[u][a]) CHECK(s.visited_flag(u, a));
}

TEST_CASE("scout pass") {
  SUBCASE("a fully visited row is redrawn and marked stale") {
    Rig rig(fixtures::four_agent_example(), small_config(4, 2));
    auto& s = *rig.solver;
    s.initialize();
    s.build_phase();

    std::vector<double> other_before;
    for (const auto& o : s.population(1)) other_before.push_back(o.x);
    SolverTestAccess::force_visited_row(s, 2);
    s.scout_phase();

    for (int a = 0; a < 4; ++a) CHECK_FALSE(s.visited_flag(2, a));
    CHECK(s.stale_flag(2));
    CHECK_FALSE(s.stale_flag(0));
    // untouched rows keep their values
    for (std::size_t u = 0; u < other_before.size(); ++u)
      if (u != 2) CHECK(s.population(1)[u].x == other_before[u]);
    // redrawn values stay inside the domain
    for (int a = 0; a < 4; ++a) CHECK(rig.inst.domain(a).contains(s.population(a)[2].x));

    // the next full evaluation clears the stale flag again
    s.evaluate(SliceLabel::Population);
    CHECK_FALSE(s.stale_flag(2));
    CHECK(std::isfinite(s.root_population_fitness()[2]));
  }
  SUBCASE("one unvisited entry keeps the row") {
    Rig rig(fixtures::four_agent_example(), small_config(4, 2));
    auto& s = *rig.solver;
    s.initialize();
    s.build_phase();
    SolverTestAccess::force_visited_row(s, 1);
    auto& ledger = SolverTestAccess::ledger(s);
    ledger.visited[1][3] = 0;

    std::vector<double> before;
    for (const auto& o : s.population(0)) before.push_back(o.x);
    s.scout_phase();
    CHECK(s.population(0)[1].x == before[1]);
    CHECK_FALSE(s.stale_flag(1));
    CHECK(s.visited_flag(1, 0));
  }
  SUBCASE("the scout-free variant never redraws") {
    auto cfg = small_config(4, 2);
    cfg.variant = Variant::AbcdC;
    Rig rig(fixtures::four_agent_example(), cfg);
    auto& s = *rig.solver;
    s.initialize();
    s.build_phase();
    SolverTestAccess::force_visited_row(s, 0);
    std::vector<double> before;
    for (const auto& o : s.population(2)) before.push_back(o.x);
    s.scout_phase();
    CHECK(s.population(2)[0].x == before[0]);
    CHECK(s.visited_flag(0, 0));  // bookkeeping kept, never acted on
    CHECK_FALSE(s.stale_flag(0));
  }
}

TEST_CASE("iteration invariants hold across a real run") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::ErdosRenyi;
  topo.n = 8;
  topo.p = 0.4;
  topo.seed = 3;
  auto inst = generate_problem(topo, CoefficientSpec{});

  for (Variant variant : {Variant::AbcdE, Variant::AbcdC}) {
    CAPTURE(variant_name(variant));
    SolverConfig cfg = small_config(10, 3, 17);
    cfg.variant = variant;
    auto tree = build_bfs_pseudo_tree(inst, cfg.seed, cfg.root_rule);
    AbcdSolver s(inst, tree, cfg);
    s.initialize();

    double last_best = -std::numeric_limits<double>::infinity();
    for (int it = 0; it < 25; ++it) {
      s.run_iteration();

      // best-so-far never decreases, exactly
      CHECK(s.gbest_fitness() >= last_best);
      last_best = s.gbest_fitness();

      // population/copy sizes are conserved and all values stay in domain
      for (int a = 0; a < s.agent_count(); ++a) {
        auto storage = s.agent_storage(a);
        CHECK(storage.population_objects == 10);
        CHECK(storage.work_objects == 10);
        CHECK(storage.elite_objects == 3);
        CHECK(storage.transient_objects == 3);
        CHECK(storage.persistent() == 2 * 10 + 3);
        const auto& dom = inst.domain(a);
        for (const auto& o : s.population(a)) CHECK(dom.contains(o.x));
        for (const auto& o : s.work_slice(a)) CHECK(dom.contains(o.x));
        for (const auto& o : s.onlooker_slice(a)) CHECK(dom.contains(o.x));
        CHECK(dom.contains(s.gbest_assignment()[a]));
        CHECK(dom.contains(s.decision_assignment()[a]));
      }

      // per-iteration request/evaluation counts are exact
      const auto& ic = s.iteration_counters().back();
      CHECK(ic.employed_requests == 10);
      CHECK(ic.onlooker_requests == 10 * 3);
      CHECK(ic.evaluate_invocations == 10 + 2);

      // the root's extra bookkeeping stays at S*n + 2S entries
      CHECK(s.root_extra_entries() == 10 * 8 + 2 * 10);

      // nothing in the population beats the best-so-far
      for (double f : s.root_population_fitness()) CHECK_FALSE(f > s.gbest_fitness());

      // root-held fitness agrees with a central re-evaluation
      for (int u = 0; u < 10; ++u) {
        double f = s.root_population_fitness()[u];
        if (!std::isfinite(f)) {
          CHECK(s.stale_flag(u));
          continue;
        }
        Assignment x(s.agent_count());
        for (int a = 0; a < s.agent_count(); ++a) x[a] = s.population(a)[u].x;
        CHECK(f == doctest::Approx(global_utility(inst, x)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("identical runs are identical") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::WattsStrogatz;
  topo.n = 9;
  topo.ring_k = 4;
  topo.rewire = 0.4;
  topo.seed = 2;
  auto inst = generate_problem(topo, CoefficientSpec{});
  SolverConfig cfg = small_config(8, 3, 23);
  cfg.iterations = 6;

  auto run_logged = [&](std::string& log_out) {
    auto tree = build_bfs_pseudo_tree(inst, cfg.seed, cfg.root_rule);
    AbcdSolver s(inst, tree, cfg);
    std::ostringstream log;
    s.network().set_message_log(&log);
    auto trace = s.run();
    log_out = log.str();
    return trace;
  };

  std::string log1, log2;
  auto t1 = run_logged(log1);
  auto t2 = run_logged(log2);
  CHECK_FALSE(compare_traces(t1, t2).has_value());
  CHECK(log1 == log2);
  CHECK_FALSE(log1.empty());
}

TEST_CASE("trace records carry per-iteration deltas") {
  auto cfg = small_config(5, 2, 3);
  cfg.iterations = 30;
  Rig rig(product_pair(), cfg);
  auto& s = *rig.solver;
  auto trace = s.run();
  REQUIRE(static_cast<int>(trace.records.size()) == 30);
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    CHECK(r.iteration == static_cast<int>(k) + 1);
    CHECK(r.employed_requests == 5);
    CHECK(r.onlooker_requests == 5 * 2);
    CHECK(r.total_messages > 0);
    if (k > 0) CHECK(r.gbest_utility >= trace.records[k - 1].gbest_utility);
  }
  CHECK(trace.final_utility == trace.records.back().gbest_utility);
  // x*y over [-10,10]^2 peaks at 100; clamping pins the corners quickly
  CHECK(trace.final_utility >= 95.0);
}

TEST_CASE("a concave quadratic is solved to its known optimum") {
  // f(x, y) = -(x-1)^2 - (y+2)^2, maximum 0 at (1, -2)
  QuadraticCoefficients c{-1, 2, -1, -4, 0, -5};
  auto inst = fixtures::two_agent_quadratic(c);

  GridSpec spec;
  spec.resolution = 401;
  auto grid = grid_search(inst, spec);
  CHECK(grid.max_value == 0.0);  // (1, -2) is a grid point at this resolution
  CHECK(grid.argmax[0] == doctest::Approx(1.0).epsilon(kTight));
  CHECK(grid.argmax[1] == doctest::Approx(-2.0).epsilon(kTight));

  SolverConfig cfg;
  cfg.population_size = 50;
  cfg.elite_size = 5;
  cfg.iterations = 300;
  cfg.seed = 7;
  auto trace = solve(inst, cfg);
  CHECK(trace.final_utility <= grid.max_value + 1e-9);
  CHECK(std::abs(trace.final_utility - 0.0) < 0.05);
  CHECK(std::abs(trace.final_assignment[0] - 1.0) < 0.25);
  CHECK(std::abs(trace.final_assignment[1] + 2.0) < 0.25);
}

TEST_CASE("centralized mirror reproduces the distributed trace") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::BarabasiAlbert;
  topo.n = 11;
  topo.attach = 2;
  topo.seed = 6;
  auto inst = generate_problem(topo, CoefficientSpec{});

  for (Variant variant : {Variant::AbcdE, Variant::AbcdC}) {
    CAPTURE(variant_name(variant));
    SolverConfig cfg = small_config(6, 2, 31);
    cfg.iterations = 20;
    cfg.variant = variant;
    auto distributed = solve(inst, cfg);
    auto mirrored = run_replica(inst, cfg);
    auto div = compare_traces(distributed, mirrored);
    if (div) {
      CAPTURE(div->iteration);
      CAPTURE(div->field);
      CAPTURE(div->lhs);
      CAPTURE(div->rhs);
      FAIL("traces diverged");
    }
  }
}

TEST_CASE("replica best-so-far is nondecreasing") {
  QuadraticCoefficients c{-1, 2, -1, -4, 0, -5};
  auto inst = fixtures::two_agent_quadratic(c);
  SolverConfig cfg;
  cfg.population_size = 20;
  cfg.elite_size = 4;
  cfg.iterations = 50;
  cfg.seed = 13;
  auto trace = run_replica(inst, cfg);
  REQUIRE(trace.records.size() == 50);
  for (std::size_t k = 1; k < trace.records.size(); ++k)
    CHECK(trace.records[k].gbest_utility >= trace.records[k - 1].gbest_utility);
}

TEST_CASE("wall-clock limit cuts the budget short") {
  TopologyConfig topo;
  topo.kind = TopologyConfig::Kind::ErdosRenyi;
  topo.n = 10;
  topo.p = 0.5;
  topo.seed = 9;
  auto inst = generate_problem(topo, CoefficientSpec{});
  SolverConfig cfg = small_config(30, 5, 1);
  cfg.iterations = 100000;
  cfg.time_limit_ms = 50.0;
  auto trace = solve(inst, cfg);
  CHECK(trace.records.size() >= 1);
  CHECK(trace.records.size() < 100000);
}

TEST_CASE("solver rejects trees that do not match the instance") {
  auto inst = fixtures::four_agent_example();
  auto other = product_pair();
  auto tree = build_bfs_pseudo_tree(other, 0);
  SolverConfig cfg = small_config(4, 2);
  CHECK_THROWS(AbcdSolver(inst, tree, cfg));
}
