#include "abcd/replica.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace abcd {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

CentralizedReplica::CentralizedReplica(const CdcopInstance& inst, const PseudoTree& tree,
                                       const SolverConfig& cfg)
    : inst_(&inst), tree_(tree), cfg_(cfg), router_(tree_, inst) {
  cfg_.validate();
  if (inst.agent_count() < 2) throw std::invalid_argument("solver needs at least two agents");
  if (tree_.agent_count() != inst.agent_count())
    throw std::invalid_argument("pseudo tree does not match the instance");
  const int n = inst.agent_count(), S = cfg_.population_size, M = cfg_.elite_size;
  depth_order_ = broadcast_order(tree_);
  std::reverse(depth_order_.begin(), depth_order_.end());
  streams_.reserve(n);
  for (int i = 0; i < n; ++i) streams_.emplace_back(cfg_.seed, static_cast<std::uint64_t>(i));
  pop_.assign(S, Row(n, 0.0));
  work_.assign(S, Row(n, 0.0));
  look_.assign(M, Row(n, 0.0));
  elite_.assign(M, Row(n, kNan));
  pop_fit_.assign(S, kNan);
  work_fit_.assign(S, kNan);
  look_fit_.assign(M, kNan);
  fit_.assign(S, 0.0);
  prob_.assign(S, 0.0);
  visited_.assign(S, std::vector<char>(n, 0));
  gbest_row_.assign(n, kNan);
  gbest_fit_ = kNegInf;
}

long long CentralizedReplica::broadcast_cost() const { return inst_->agent_count() - 1; }

// Same accumulation orders as the distributed evaluation: per agent the
// incident utilities are summed neighbor-ascending, then child subtree
// sums are added child-ascending working up from the deepest agents, and
// the root halves the double-counted totals.
std::vector<double> CentralizedReplica::evaluate_rows(const std::vector<Row>& rows) {
  const int n = inst_->agent_count();
  const int count = static_cast<int>(rows.size());
  std::vector<std::vector<double>> acc(n, std::vector<double>(count, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int nb : tree_.neighbors[i]) {
      const BinaryConstraint& c = inst_->constraint_between(i, nb);
      const bool mine_first = c.first() == i;
      for (int k = 0; k < count; ++k) {
        double a = rows[k][i], b = rows[k][nb];
        acc[i][k] += mine_first ? c.eval(a, b) : c.eval(b, a);
      }
    }
  }
  for (int i : depth_order_) {
    for (int ch : tree_.children[i])
      for (int k = 0; k < count; ++k) acc[i][k] += acc[ch][k];
  }
  std::vector<double> out = std::move(acc[tree_.root]);
  for (double& v : out) v /= 2;
  messages_ += 2LL * inst_->constraint_count() + broadcast_cost();
  return out;
}

void CentralizedReplica::replace_population_row(int u, const Row& source, double fitness) {
  pop_[u] = source;
  pop_fit_[u] = fitness;
  std::fill(visited_[u].begin(), visited_[u].end(), 0);
}

void CentralizedReplica::build_step() {
  pop_fit_ = evaluate_rows(pop_);
  int best = -1;
  double value = gbest_fit_;
  for (std::size_t u = 0; u < pop_fit_.size(); ++u) {
    if (pop_fit_[u] > value) {
      value = pop_fit_[u];
      best = static_cast<int>(u);
    }
  }
  if (best >= 0) {
    gbest_fit_ = value;
    gbest_row_ = pop_[best];
    messages_ += broadcast_cost();
  }
  auto elites = top_elite_indices(pop_fit_, cfg_.elite_size);
  for (std::size_t m = 0; m < elites.size(); ++m) elite_[m] = pop_[elites[m]];
  messages_ += broadcast_cost();
}

void CentralizedReplica::employed_step() {
  const int n = inst_->agent_count(), S = cfg_.population_size, M = cfg_.elite_size;
  SubstreamRng& root_rng = streams_[tree_.root];
  work_ = pop_;
  work_fit_ = pop_fit_;
  std::vector<int> target(S);
  for (int u = 0; u < S; ++u) {
    target[u] = root_rng.uniform_index(n);
    visited_[u][target[u]] = 1;
    messages_ += router_.path_length(tree_.root, target[u]);
  }
  for (int u = 0; u < S; ++u) {
    const int j = target[u];
    SubstreamRng& rng = streams_[j];
    int l = rng.uniform_index(M);
    int h = rng.uniform_other(n, j);
    double phi = rng.uniform_in(cfg_.phi_lo, cfg_.phi_hi);
    double cap = rng.uniform_in(cfg_.cap_phi_lo, cfg_.cap_phi_hi);
    work_[u][j] = candidate_update(elite_[l][h], gbest_row_[j], pop_[u][h], elite_[l][j], phi,
                                   cap, inst_->domain(j));
    messages_ += router_.path_length(j, h) + router_.path_length(h, j);
  }
  work_fit_ = evaluate_rows(work_);
  bool any_move = false;
  for (int u = 0; u < S; ++u) {
    if (work_fit_[u] > pop_fit_[u]) {
      any_move = true;
      replace_population_row(u, work_[u], work_fit_[u]);
    }
  }
  if (any_move) messages_ += broadcast_cost();
  int best = -1;
  double value = gbest_fit_;
  for (int u = 0; u < S; ++u) {
    if (work_fit_[u] > value) {
      value = work_fit_[u];
      best = u;
    }
  }
  if (best >= 0) {
    gbest_fit_ = value;
    gbest_row_ = work_[best];
    messages_ += broadcast_cost();
  }
}

void CentralizedReplica::onlooker_step() {
  const int n = inst_->agent_count(), S = cfg_.population_size, M = cfg_.elite_size;
  SubstreamRng& root_rng = streams_[tree_.root];
  for (int z = 0; z < S; ++z) {
    const int u = root_rng.weighted_index(prob_);
    messages_ += broadcast_cost();  // copy of the selected solution
    for (int m = 0; m < M; ++m) look_[m] = pop_[u];
    std::vector<int> target(M);
    for (int m = 0; m < M; ++m) {
      target[m] = root_rng.uniform_index(n);
      visited_[u][target[m]] = 1;
      messages_ += router_.path_length(tree_.root, target[m]);
    }
    for (int m = 0; m < M; ++m) {
      const int j = target[m];
      SubstreamRng& rng = streams_[j];
      int h = rng.uniform_other(n, j);
      int l = rng.uniform_index(M);
      double phi = rng.uniform_in(cfg_.phi_lo, cfg_.phi_hi);
      double cap = rng.uniform_in(cfg_.cap_phi_lo, cfg_.cap_phi_hi);
      look_[m][j] = candidate_update(elite_[m][h], gbest_row_[j], pop_[u][h], elite_[l][j], phi,
                                     cap, inst_->domain(j));
      messages_ += router_.path_length(j, h) + router_.path_length(h, j);
    }
    look_fit_ = evaluate_rows(look_);
    int cand = -1;
    double best = pop_fit_[u];
    for (int t = 0; t < M; ++t) {
      if (look_fit_[t] > best) {
        best = look_fit_[t];
        cand = t;
      }
    }
    if (cand >= 0) {
      replace_population_row(u, look_[cand], look_fit_[cand]);
      messages_ += broadcast_cost();
      if (best > gbest_fit_) {
        gbest_fit_ = best;
        gbest_row_ = look_[cand];
        messages_ += broadcast_cost();
      }
    }
  }
}

void CentralizedReplica::scout_step() {
  const int n = inst_->agent_count();
  std::vector<int> rows;
  for (std::size_t u = 0; u < visited_.size(); ++u) {
    const auto& row = visited_[u];
    if (std::all_of(row.begin(), row.end(), [](char v) { return v != 0; }))
      rows.push_back(static_cast<int>(u));
  }
  if (rows.empty()) return;
  for (int u : rows) std::fill(visited_[u].begin(), visited_[u].end(), 0);
  messages_ += broadcast_cost();
  for (int i = 0; i < n; ++i) {
    const IntervalDomain& dom = inst_->domain(i);
    for (int t : rows) pop_[t][i] = init_draw(dom, streams_[i].uniform01());
  }
  for (int t : rows) pop_fit_[t] = kNan;
}

void CentralizedReplica::run_iteration() {
  ++iteration_;
  messages_ = 0;
  build_step();
  employed_step();
  fit_ = selection_fit(pop_fit_);
  prob_ = selection_probabilities(fit_);
  onlooker_step();
  if (cfg_.variant == Variant::AbcdE) scout_step();
  TraceRecord rec;
  rec.iteration = iteration_;
  rec.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started_)
          .count();
  rec.gbest_utility = gbest_fit_;
  rec.employed_requests = cfg_.population_size;
  rec.onlooker_requests = static_cast<long long>(cfg_.population_size) * cfg_.elite_size;
  rec.total_messages = messages_;
  records_.push_back(rec);
}

AnytimeTrace CentralizedReplica::run() {
  started_ = std::chrono::steady_clock::now();
  const int n = inst_->agent_count();
  for (int i = 0; i < n; ++i) {
    const IntervalDomain& dom = inst_->domain(i);
    for (int t = 0; t < cfg_.population_size; ++t)
      pop_[t][i] = init_draw(dom, streams_[i].uniform01());
  }
  for (int it = 0; it < cfg_.iterations; ++it) {
    run_iteration();
    if (cfg_.time_limit_ms && records_.back().elapsed_ms >= *cfg_.time_limit_ms) break;
  }
  AnytimeTrace trace;
  trace.records = records_;
  trace.final_assignment = gbest_row_;
  trace.final_utility = gbest_fit_;
  return trace;
}

AnytimeTrace run_replica(const CdcopInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  PseudoTree tree = build_bfs_pseudo_tree(inst, cfg.seed, cfg.root_rule);
  CentralizedReplica replica(inst, tree, cfg);
  return replica.run();
}

}  // namespace abcd
