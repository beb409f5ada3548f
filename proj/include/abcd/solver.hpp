#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "abcd/messages.hpp"
#include "abcd/model.hpp"
#include "abcd/network.hpp"
#include "abcd/pseudo_tree.hpp"
#include "abcd/trace.hpp"

namespace abcd {

// ABCD-E runs the scout-style exploration pass; ABCD-C is the same solver
// with that pass disabled.
enum class Variant { AbcdE, AbcdC };

const char* variant_name(Variant v);

struct SolverConfig {
  int population_size = 100;  // S
  int elite_size = 10;        // M
  int iterations = 100;
  std::uint64_t seed = 0;
  Variant variant = Variant::AbcdE;
  double phi_lo = -0.5, phi_hi = 0.5;          // perturbation weight range
  double cap_phi_lo = 0.0, cap_phi_hi = 1.0;   // attraction weight range
  RootRule root_rule = RootRule::HighestDegree;
  std::optional<double> time_limit_ms;  // optional wall-clock stop, checked
                                        // at iteration boundaries

  void validate() const;  // throws std::invalid_argument
};

// One candidate value plus the fitness bookkeeping that travels with it.
// `fitness` holds a subtree partial sum everywhere except the root, where
// it is the full (halved) global utility.
struct SolutionObject {
  double x = 0;
  double local_fitness = 0;
  double fitness = 0;
};

// --- update rules shared by the distributed solver and the replica ---

// Keeps a candidate inside its domain by saturating at the bounds.
double clamp_to_domain(double x, const IntervalDomain& dom);

// Random point lb + r*(ub-lb) for r in [0,1).
double init_draw(const IntervalDomain& dom, double r);

// Elite-guided candidate move, clamped to the domain:
//   1/2*(e_h + gbest_i) + phi*(p_h - e_i) + cap_phi*(p_h - gbest_i)
double candidate_update(double e_h, double gbest_i, double p_h, double e_i, double phi,
                        double cap_phi, const IntervalDomain& dom);

// Strictly positive selection weight: 1/(1+|f|) for negative fitness,
// 1+f otherwise.
double positive_fitness(double fitness);

std::vector<double> selection_fit(const std::vector<double>& fitness);
std::vector<double> selection_probabilities(const std::vector<double>& fit);

// Indices of the m best fitness values, best first, ties by lower index.
std::vector<int> top_elite_indices(const std::vector<double>& fitness, int m);

// --- introspection records ---

struct IterationCounters {
  long long employed_requests = 0;   // logical, one per requested update
  long long onlooker_requests = 0;   // logical
  int evaluate_invocations = 0;      // population evaluations this iteration
  long long transport_messages = 0;  // every hop on the wire
};

struct AgentStorage {
  int population_objects = 0;
  int work_objects = 0;
  int elite_objects = 0;
  int transient_objects = 0;  // onlooker copies

  int persistent() const { return population_objects + work_objects + elite_objects; }
};

// Bookkeeping held only at the root: full fitness vectors per slice, the
// visited matrix, selection weights, and the logical request counters.
struct RootLedger {
  std::vector<std::vector<char>> visited;  // [solution][agent]
  std::vector<char> stale;                 // population rows redrawn since last evaluation
  std::vector<double> pop_fitness;
  std::vector<double> work_fitness;
  std::vector<double> look_fitness;
  std::vector<double> fit;   // positive selection weights
  std::vector<double> prob;  // normalized selection probabilities
  double best_fitness = 0;   // set to -inf on initialize
  int current_selection = -1;  // population index the active onlooker step copied
  long long employed_requests = 0;  // cumulative logical counters
  long long onlooker_requests = 0;
};

class AgentNode;
struct SolverTestAccess;

// The distributed solver: one state-machine agent per variable, all
// coordination via the mailbox network, phases driven to quiescence one
// at a time. Deterministic for a fixed (instance, tree, config).
class AbcdSolver {
 public:
  AbcdSolver(const CdcopInstance& inst, const PseudoTree& tree, const SolverConfig& cfg);
  ~AbcdSolver();

  AbcdSolver(const AbcdSolver&) = delete;
  AbcdSolver& operator=(const AbcdSolver&) = delete;

  // Algorithm phases, public so tests can drive them individually.
  void initialize();
  void evaluate(SliceLabel label);
  void build_phase();
  void employed_phase();
  void compute_selection_probabilities();
  void onlooker_phase();
  void scout_phase();

  // One full iteration (build, employed, selection, onlooker, scout) plus
  // a trace record.
  void run_iteration();

  // initialize() + the configured budget of iterations.
  AnytimeTrace run();

  // --- introspection ---
  int agent_count() const;
  int root() const;
  double gbest_fitness() const;
  Assignment gbest_assignment() const;    // per-agent best components
  Assignment decision_assignment() const; // the variables' current values
  const std::vector<SolutionObject>& population(int agent) const;
  const std::vector<SolutionObject>& work_slice(int agent) const;
  const std::vector<SolutionObject>& onlooker_slice(int agent) const;
  const std::vector<SolutionObject>& elite_slice(int agent) const;
  const std::vector<double>& root_population_fitness() const;
  const std::vector<double>& root_work_fitness() const;
  const std::vector<double>& root_onlooker_fitness() const;
  const std::vector<double>& selection_fit_values() const;
  const std::vector<double>& selection_prob_values() const;
  bool visited_flag(int solution, int agent) const;
  bool stale_flag(int solution) const;
  AgentStorage agent_storage(int agent) const;
  long long root_extra_entries() const;   // visited flags + fit + prob
  const std::vector<TraceRecord>& trace_records() const;
  const std::vector<IterationCounters>& iteration_counters() const;
  MailboxNetwork& network();
  const PseudoTree& tree() const;

 private:
  friend struct SolverTestAccess;

  void require_initialized() const;
  void run_phase(const char* phase);
  void append_trace_record();
  AgentNode& root_agent();

  const CdcopInstance* inst_;
  PseudoTree tree_;
  SolverConfig cfg_;
  MailboxNetwork net_;
  TreeRouter router_;
  std::unique_ptr<RootLedger> ledger_;
  std::vector<std::unique_ptr<AgentNode>> agents_;
  std::vector<Actor*> actors_;
  std::vector<IterationCounters> iter_counters_;
  std::vector<TraceRecord> records_;
  bool initialized_ = false;
  int iteration_ = 0;
  int evaluate_invocations_ = 0;  // cumulative
  long long sent_snapshot_ = 0;
  long long employed_snapshot_ = 0;
  long long onlooker_snapshot_ = 0;
  int evaluate_snapshot_ = 0;
  std::chrono::steady_clock::time_point started_;
};

// Builds the pseudo tree from cfg.seed and runs the solver to its budget.
AnytimeTrace solve(const CdcopInstance& inst, const SolverConfig& cfg);

// White-box hooks for tests: rig slice values and visited flags.
struct SolverTestAccess {
  static void set_population_x(AbcdSolver& s, int agent, int solution, double x);
  static void set_work_x(AbcdSolver& s, int agent, int solution, double x);
  static void set_onlooker_x(AbcdSolver& s, int agent, int slot, double x);
  static void force_visited_row(AbcdSolver& s, int solution);
  static RootLedger& ledger(AbcdSolver& s);
};

}  // namespace abcd
