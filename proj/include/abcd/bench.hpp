#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "abcd/model.hpp"
#include "abcd/solver.hpp"
#include "abcd/trace.hpp"

namespace abcd {

// Random constraint-graph topologies. Whatever the kind, the generator
// retries with derived sub-seeds (bounded) until the graph is connected.
struct TopologyConfig {
  enum class Kind { ErdosRenyi, BarabasiAlbert, WattsStrogatz };

  Kind kind = Kind::ErdosRenyi;
  int n = 10;
  double p = 0.5;        // edge probability (Erdos-Renyi)
  int attach = 3;        // edges added per new node (Barabasi-Albert)
  int ring_k = 4;        // ring degree (Watts-Strogatz; odd values round up)
  double rewire = 0.5;   // rewiring probability (Watts-Strogatz)
  std::uint64_t seed = 0;

  void validate() const;
};

const char* topology_name(TopologyConfig::Kind kind);
TopologyConfig::Kind topology_kind_from(const std::string& name);

// Watts-Strogatz ring degree actually used: rounded up to even, at least 2.
int effective_ring_degree(int ring_k);

struct CoefficientSpec {
  double lo = -5.0, hi = 5.0;
  void validate() const;
};

// Sorted (i, j) pairs with i < j; connected; deterministic per config.
std::vector<std::pair<int, int>> generate_edges(const TopologyConfig& topo);

// One quadratic constraint per edge, coefficients i.i.d. uniform in
// [coeff.lo, coeff.hi], every domain equal to `domain`.
CdcopInstance generate_problem(const TopologyConfig& topo, const CoefficientSpec& coeff,
                               IntervalDomain domain = {-10.0, 10.0});

struct ExperimentPlan {
  TopologyConfig topology;
  CoefficientSpec coeffs;
  IntervalDomain domain{-10.0, 10.0};
  std::vector<Variant> variants{Variant::AbcdE, Variant::AbcdC};
  int population_size = 100;
  int elite_size = 10;
  int instances = 1;
  int repeats = 1;
  int iterations = 100;
  std::uint64_t base_seed = 0;

  void validate() const;
};

// Plan files: '#' comments then a JSON object; unknown fields rejected.
// {
//   "topology": {"kind": "er", "n": 10, "p": 0.3},
//   "coeffs": {"lo": -5, "hi": 5},
//   "domain": [-10, 10],
//   "variants": ["abcd-e", "abcd-c"],
//   "S": 100, "M": 10,
//   "instances": 2, "repeats": 2, "iterations": 50, "seed": 7
// }
ExperimentPlan load_plan(std::istream& in);
ExperimentPlan load_plan_file(const std::string& path);

struct RunResult {
  int instance = 0;
  int repeat = 0;
  Variant variant = Variant::AbcdE;
  std::uint64_t seed = 0;
  double final_utility = 0;
};

struct AggregateRow {
  int instance = 0;
  Variant variant = Variant::AbcdE;
  int runs = 0;
  double mean_final = 0;
  double stddev_final = 0;
};

struct ExperimentResult {
  std::vector<RunResult> runs;
  std::vector<AggregateRow> aggregate;
};

// Seeds-by-table: adding instances, repeats, or variants never changes the
// seed of any existing cell.
std::uint64_t instance_seed(std::uint64_t base, int instance);
std::uint64_t run_seed(std::uint64_t base, int instance, int repeat, Variant variant);

// Runs every (instance, repeat, variant) cell under the same iteration
// budget. With a non-empty out_dir, writes the generated problems, one
// trace CSV per run, and aggregate.csv; aggregate bytes are deterministic
// (wall-clock timings appear only inside the per-run traces).
ExperimentResult run_experiment(const ExperimentPlan& plan, const std::string& out_dir);

struct PlotPoint {
  double x = 0, mean = 0, stddev = 0;
};

// Mean/stddev of the best-so-far utility at each iteration across traces;
// all traces must be equally long.
std::vector<PlotPoint> plot_points_iteration(const std::vector<AnytimeTrace>& traces);

// Mean/stddev of final utilities grouped by a swept parameter value,
// points ordered by x.
std::vector<PlotPoint> plot_points_sweep(const std::vector<std::pair<double, double>>& samples);

// axis names: iteration-vs-utility, S-vs-utility, M-vs-utility. Empty
// data or an unknown axis is an error, never an empty file.
void emit_plot_data(const std::vector<PlotPoint>& points, const std::string& axis,
                    std::ostream& out);
void emit_plot_data_file(const std::vector<PlotPoint>& points, const std::string& axis,
                         const std::string& path);

// Sample mean and standard deviation (n-1 denominator, 0 when n < 2).
std::pair<double, double> mean_stddev(const std::vector<double>& values);

}  // namespace abcd
