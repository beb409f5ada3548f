#pragma once

#include <vector>

#include "abcd/model.hpp"
#include "abcd/network.hpp"
#include "abcd/pseudo_tree.hpp"
#include "abcd/rng.hpp"
#include "abcd/solver.hpp"
#include "abcd/trace.hpp"

namespace abcd {

// Sequential lockstep mirror of the distributed solver. Consumes the same
// per-agent random substreams in the same order and performs the same
// floating-point operations in the same order, so for a fixed
// (instance, tree, config) its anytime trace matches the distributed run
// field for field, message counts included; only wall-clock times differ.
// Message totals are derived arithmetically from the routing table rather
// than by exchanging anything.
class CentralizedReplica {
 public:
  CentralizedReplica(const CdcopInstance& inst, const PseudoTree& tree, const SolverConfig& cfg);

  AnytimeTrace run();

 private:
  using Row = std::vector<double>;  // one value per agent

  std::vector<double> evaluate_rows(const std::vector<Row>& rows);
  void run_iteration();
  void build_step();
  void employed_step();
  void onlooker_step();
  void scout_step();
  void replace_population_row(int u, const Row& source, double fitness);
  long long broadcast_cost() const;

  const CdcopInstance* inst_;
  PseudoTree tree_;
  SolverConfig cfg_;
  TreeRouter router_;
  std::vector<int> depth_order_;  // deepest agents first
  std::vector<SubstreamRng> streams_;

  std::vector<Row> pop_, work_, look_, elite_;
  std::vector<double> pop_fit_, work_fit_, look_fit_;
  std::vector<double> fit_, prob_;
  std::vector<std::vector<char>> visited_;
  Row gbest_row_;
  double gbest_fit_ = 0;
  int iteration_ = 0;
  long long messages_ = 0;  // transport hops in the current iteration
  std::vector<TraceRecord> records_;
  std::chrono::steady_clock::time_point started_;
};

// Builds the pseudo tree exactly as solve() does and runs the replica.
AnytimeTrace run_replica(const CdcopInstance& inst, const SolverConfig& cfg);

}  // namespace abcd
