#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abcd/bench.hpp"
#include "abcd/grid.hpp"
#include "abcd/problem_io.hpp"
#include "abcd/solver.hpp"
#include "abcd/trace.hpp"

namespace {

int run_solve(const std::string& problem_path, const std::string& algo, int S, int M, int iters,
              std::uint64_t seed, const std::string& trace_path) {
  abcd::CdcopInstance inst = abcd::load_problem_file(problem_path);
  abcd::SolverConfig cfg;
  cfg.population_size = S;
  cfg.elite_size = M;
  cfg.iterations = iters;
  cfg.seed = seed;
  cfg.variant = algo == "abcd-c" ? abcd::Variant::AbcdC : abcd::Variant::AbcdE;
  abcd::AnytimeTrace trace = abcd::solve(inst, cfg);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    if (!out) throw std::runtime_error("cannot open trace file: " + trace_path);
    abcd::write_trace_csv(trace, out,
                          {"algo=" + algo + " S=" + std::to_string(S) +
                               " M=" + std::to_string(M) + " iters=" + std::to_string(iters) +
                               " seed=" + std::to_string(seed),
                           "problem=" + problem_path});
    if (!out) throw std::runtime_error("failed writing trace file: " + trace_path);
  }
  std::cout << "final_utility " << abcd::format_double(trace.final_utility) << '\n';
  std::cout << "final_assignment";
  for (double x : trace.final_assignment) std::cout << ' ' << abcd::format_double(x);
  std::cout << '\n';
  return 0;
}

int run_gen(const abcd::TopologyConfig& topo, const abcd::CoefficientSpec& coeff,
            const std::string& out_path) {
  abcd::CdcopInstance inst = abcd::generate_problem(topo, coeff);
  std::string summary = std::string("topology=") + abcd::topology_name(topo.kind) +
                        " n=" + std::to_string(topo.n) + " seed=" + std::to_string(topo.seed);
  abcd::save_problem_file(inst, out_path,
                          {summary, "coeffs uniform[" + abcd::format_double(coeff.lo) + ", " +
                                        abcd::format_double(coeff.hi) + "]"});
  std::cout << "wrote " << out_path << " (" << inst.agent_count() << " agents, "
            << inst.constraint_count() << " constraints)\n";
  return 0;
}

int run_bench(const std::string& plan_path, const std::string& out_dir) {
  abcd::ExperimentPlan plan = abcd::load_plan_file(plan_path);
  abcd::ExperimentResult result = abcd::run_experiment(plan, out_dir);
  std::cout << "ran " << result.runs.size() << " runs, wrote " << result.aggregate.size()
            << " aggregate rows to " << out_dir << '\n';
  return 0;
}

int run_oracle(const std::string& problem_path, int resolution) {
  abcd::CdcopInstance inst = abcd::load_problem_file(problem_path);
  abcd::GridSpec spec;
  spec.resolution = resolution;
  abcd::GridResult result = abcd::grid_search(inst, spec);
  std::cout << "max_utility " << abcd::format_double(result.max_value) << '\n';
  std::cout << "argmax";
  for (double x : result.argmax) std::cout << ' ' << abcd::format_double(x);
  std::cout << '\n';
  std::cout << "min_utility " << abcd::format_double(result.min_value) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous DCOP toolkit: solver, generators, benchmarks, grid oracle"};
  app.require_subcommand(1);

  std::string problem_path, trace_path, out_path, plan_path, out_dir;
  std::string algo = "abcd-e", topology;
  int S = 100, M = 10, iters = 100, n = 10, ba_m = 3, ws_k = 4, resolution = 201;
  double er_p = 0.5, ws_rewire = 0.5, coeff_lo = -5.0, coeff_hi = 5.0;
  std::uint64_t seed = 0;

  CLI::App* solve_cmd = app.add_subcommand("solve", "run the solver on a problem file");
  solve_cmd->add_option("--problem", problem_path, "problem file")->required();
  solve_cmd->add_option("--algo", algo, "abcd-e or abcd-c")
      ->check(CLI::IsMember({"abcd-e", "abcd-c"}));
  solve_cmd->add_option("--S", S, "population size");
  solve_cmd->add_option("--M", M, "elite size");
  solve_cmd->add_option("--iters", iters, "iteration budget");
  solve_cmd->add_option("--seed", seed, "random seed");
  solve_cmd->add_option("--trace", trace_path, "anytime trace CSV output path");

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a random problem file");
  gen_cmd->add_option("--topology", topology, "er, ba, or ws")
      ->required()
      ->check(CLI::IsMember({"er", "ba", "ws"}));
  gen_cmd->add_option("--n", n, "number of agents")->required();
  gen_cmd->add_option("--p", er_p, "edge probability (er)");
  gen_cmd->add_option("--m", ba_m, "edges per new node (ba)");
  gen_cmd->add_option("--k", ws_k, "ring degree (ws)");
  gen_cmd->add_option("--rewire", ws_rewire, "rewiring probability (ws)");
  gen_cmd->add_option("--coeff-lo", coeff_lo, "coefficient lower bound");
  gen_cmd->add_option("--coeff-hi", coeff_hi, "coefficient upper bound");
  gen_cmd->add_option("--seed", seed, "random seed");
  gen_cmd->add_option("--out", out_path, "output problem file")->required();

  CLI::App* bench_cmd = app.add_subcommand("bench", "run an experiment plan");
  bench_cmd->add_option("--plan", plan_path, "plan file")->required();
  bench_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "grid-search a problem file");
  oracle_cmd->add_option("--problem", problem_path, "problem file")->required();
  oracle_cmd->add_option("--resolution", resolution, "grid points per dimension");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return run_solve(problem_path, algo, S, M, iters, seed, trace_path);
    if (gen_cmd->parsed()) {
      abcd::TopologyConfig topo;
      topo.kind = abcd::topology_kind_from(topology);
      topo.n = n;
      topo.p = er_p;
      topo.attach = ba_m;
      topo.ring_k = ws_k;
      topo.rewire = ws_rewire;
      topo.seed = seed;
      abcd::CoefficientSpec coeff;
      coeff.lo = coeff_lo;
      coeff.hi = coeff_hi;
      return run_gen(topo, coeff, out_path);
    }
    if (bench_cmd->parsed()) return run_bench(plan_path, out_dir);
    if (oracle_cmd->parsed()) return run_oracle(problem_path, resolution);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
