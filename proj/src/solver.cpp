#include "abcd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "abcd/rng.hpp"

namespace abcd {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

const char* variant_name(Variant v) { return v == Variant::AbcdE ? "abcd-e" : "abcd-c"; }

void SolverConfig::validate() const {
  if (population_size < 1) throw std::invalid_argument("population size must be at least 1");
  if (elite_size < 1) throw std::invalid_argument("elite size must be at least 1");
  if (elite_size > population_size)
    throw std::invalid_argument("elite size must not exceed population size");
  if (iterations < 1) throw std::invalid_argument("iteration budget must be at least 1");
  if (!(phi_lo <= phi_hi) || !std::isfinite(phi_lo) || !std::isfinite(phi_hi))
    throw std::invalid_argument("perturbation weight range is invalid");
  if (!(cap_phi_lo <= cap_phi_hi) || !std::isfinite(cap_phi_lo) || !std::isfinite(cap_phi_hi))
    throw std::invalid_argument("attraction weight range is invalid");
  if (time_limit_ms && !(*time_limit_ms > 0))
    throw std::invalid_argument("time limit must be positive");
}

double clamp_to_domain(double x, const IntervalDomain& dom) {
  if (x < dom.lb) return dom.lb;
  if (x > dom.ub) return dom.ub;
  return x;
}

double init_draw(const IntervalDomain& dom, double r) { return dom.lb + r * (dom.ub - dom.lb); }

double candidate_update(double e_h, double gbest_i, double p_h, double e_i, double phi,
                        double cap_phi, const IntervalDomain& dom) {
  double v = 0.5 * (e_h + gbest_i) + phi * (p_h - e_i) + cap_phi * (p_h - gbest_i);
  return clamp_to_domain(v, dom);
}

double positive_fitness(double fitness) {
  return fitness < 0 ? 1.0 / (1.0 + std::abs(fitness)) : 1.0 + fitness;
}

std::vector<double> selection_fit(const std::vector<double>& fitness) {
  std::vector<double> out(fitness.size());
  for (std::size_t i = 0; i < fitness.size(); ++i) out[i] = positive_fitness(fitness[i]);
  return out;
}

std::vector<double> selection_probabilities(const std::vector<double>& fit) {
  double total = 0;
  for (double f : fit) total += f;
  if (!(total > 0)) throw std::invalid_argument("selection weights must sum to a positive value");
  std::vector<double> out(fit.size());
  for (std::size_t i = 0; i < fit.size(); ++i) out[i] = fit[i] / total;
  return out;
}

std::vector<int> top_elite_indices(const std::vector<double>& fitness, int m) {
  if (m < 0 || m > static_cast<int>(fitness.size()))
    throw std::invalid_argument("elite count out of range");
  std::vector<int> idx(fitness.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return fitness[a] > fitness[b]; });
  idx.resize(m);
  return idx;
}

// Coordinator actions the root performs at the start of the next round.
enum class RootTask {
  None,
  EmployedDispatch,
  EmployedCommit,
  BuildCommit,
  OnlookerDispatch,
  OnlookerCommit,
  Scout,
};

// One agent of the distributed solver. Owns its columns of the population
// slices, its random substream, and the per-phase protocol state. All
// cross-agent coordination goes through the mailbox network; the only
// exception is a loopback queue for requests the root addresses to itself,
// which the transport (correctly) refuses to carry.
class AgentNode : public Actor {
 public:
  AgentNode(int id, const CdcopInstance& inst, const PseudoTree& tree, const TreeRouter& router,
            MailboxNetwork& net, const SolverConfig& cfg, RootLedger* ledger)
      : id_(id),
        inst_(&inst),
        tree_(&tree),
        router_(&router),
        net_(&net),
        cfg_(&cfg),
        ledger_(ledger),
        rng_(cfg.seed, static_cast<std::uint64_t>(id)) {
    pop_.resize(cfg.population_size);
    work_.resize(cfg.population_size);
    look_.resize(cfg.elite_size);
    elite_.resize(cfg.elite_size);
    for (auto& o : elite_) o.x = kNan;
  }

  bool is_root() const { return ledger_ != nullptr; }

  // --- direct local operations (no messaging involved) ---

  void local_initialize() {
    const IntervalDomain& dom = inst_->domain(id_);
    for (auto& o : pop_) {
      o.x = init_draw(dom, rng_.uniform01());
      o.local_fitness = 0;
      o.fitness = 0;
    }
    gbest_x_ = kNan;
    decision_x_ = kNan;
  }

  void local_copy_work_from_population() { work_ = pop_; }

  void begin_evaluate(SliceLabel label) {
    if (eval_active_) throw ProtocolError("evaluation already in progress");
    eval_active_ = true;
    eval_label_ = label;
    eval_send_pending_ = true;
    eval_local_done_ = false;
    const auto& nbrs = tree_->neighbors[id_];
    neighbor_cols_.assign(nbrs.size(), {});
    neighbor_missing_ = static_cast<int>(nbrs.size());
    const auto& chs = tree_->children[id_];
    child_fit_.assign(chs.size(), {});
    child_missing_ = static_cast<int>(chs.size());
    eval_acc_.assign(slice(label).size(), 0.0);
  }

  void set_root_task(RootTask task) {
    if (!is_root()) throw std::logic_error("coordinator task on a non-root agent");
    task_ = task;
  }

  // --- scheduling ---

  bool step() override {
    bool acted = false;
    self_in_ = std::move(self_out_);
    self_out_.clear();
    while (auto msg = net_->poll(id_)) {
      handle(std::move(*msg));
      acted = true;
    }
    for (auto& msg : self_in_) {
      handle(std::move(msg));
      acted = true;
    }
    self_in_.clear();
    if (eval_send_pending_) {
      send_neighbor_values();
      eval_send_pending_ = false;
      acted = true;
    }
    acted |= try_finish_local();
    acted |= try_finish_evaluate();
    if (task_ != RootTask::None) {
      RootTask t = task_;
      task_ = RootTask::None;
      run_root_task(t);
      acted = true;
    }
    return acted;
  }

  // --- introspection ---

  const std::vector<SolutionObject>& slice(SliceLabel label) const {
    switch (label) {
      case SliceLabel::Population: return pop_;
      case SliceLabel::Work: return work_;
      case SliceLabel::Onlooker: return look_;
    }
    throw std::logic_error("bad slice label");
  }

  const std::vector<SolutionObject>& elites() const { return elite_; }

  double gbest_component() const { return gbest_x_; }
  double decision_component() const { return decision_x_; }

  AgentStorage storage() const {
    return AgentStorage{static_cast<int>(pop_.size()), static_cast<int>(work_.size()),
                        static_cast<int>(elite_.size()), static_cast<int>(look_.size())};
  }

  void test_set_x(SliceLabel label, int index, double x) {
    const_cast<std::vector<SolutionObject>&>(slice(label)).at(index).x = x;
  }

 private:
  std::vector<SolutionObject>& slice_mut(SliceLabel label) {
    return const_cast<std::vector<SolutionObject>&>(slice(label));
  }

  int neighbor_slot(int agent) const {
    const auto& nbrs = tree_->neighbors[id_];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), agent);
    if (it == nbrs.end() || *it != agent)
      throw ProtocolError("message from an agent that is not a neighbor");
    return static_cast<int>(it - nbrs.begin());
  }

  int child_slot(int agent) const {
    const auto& chs = tree_->children[id_];
    auto it = std::lower_bound(chs.begin(), chs.end(), agent);
    if (it == chs.end() || *it != agent)
      throw ProtocolError("fitness report from an agent that is not a child");
    return static_cast<int>(it - chs.begin());
  }

  void send_routed(Message msg) {
    net_->log_message(msg);
    if (msg.dst == id_) {
      self_out_.push_back(std::move(msg));
      return;
    }
    int hop = router_->next_hop(id_, msg.dst);
    net_->send(id_, hop, std::move(msg));
  }

  void relay(Message msg) { net_->send(id_, router_->next_hop(id_, msg.dst), std::move(msg)); }

  void broadcast(Payload payload) {
    Message msg{id_, -1, 0, std::move(payload)};
    net_->log_message(msg);
    for (int c : tree_->children[id_]) net_->send(id_, c, msg);
  }

  void forward_broadcast(const Message& msg) {
    for (int c : tree_->children[id_]) net_->send(id_, c, msg);
  }

  // --- message handling ---

  void handle(Message msg) {
    if (msg.dst >= 0 && msg.dst != id_) {
      relay(std::move(msg));
      return;
    }
    switch (msg.kind()) {
      case MsgKind::NeighborValues: on_neighbor_values(msg); break;
      case MsgKind::FitnessUp: on_fitness_up(msg); break;
      case MsgKind::GbestDown: on_gbest_down(msg); break;
      case MsgKind::EliteDown: on_elite_down(msg); break;
      case MsgKind::EmployedUpdateRequest: on_employed_request(msg); break;
      case MsgKind::OnlookerUpdateRequest: on_onlooker_request(msg); break;
      case MsgKind::ValueShare: on_value_share(msg); break;
      case MsgKind::SolutionReplaceDown: on_replace_down(msg); break;
      case MsgKind::ScoutReinitRequest: on_scout_down(msg); break;
      case MsgKind::SolutionCopyDown: on_copy_down(msg); break;
    }
  }

  void on_neighbor_values(const Message& msg) {
    if (!eval_active_) throw ProtocolError("neighbor values outside an evaluation");
    const auto& p = std::get<NeighborValuesPayload>(msg.payload);
    if (p.label != eval_label_) throw ProtocolError("neighbor values for the wrong slice");
    int slot = neighbor_slot(msg.src);
    if (!neighbor_cols_[slot].empty()) throw ProtocolError("duplicate neighbor values");
    if (p.xs.size() != eval_acc_.size()) throw ProtocolError("neighbor column size mismatch");
    neighbor_cols_[slot] = p.xs;
    --neighbor_missing_;
  }

  void on_fitness_up(const Message& msg) {
    if (!eval_active_) throw ProtocolError("fitness report outside an evaluation");
    const auto& p = std::get<FitnessUpPayload>(msg.payload);
    if (p.label != eval_label_) throw ProtocolError("fitness report for the wrong slice");
    int slot = child_slot(msg.src);
    if (!child_fit_[slot].empty()) throw ProtocolError("duplicate fitness report");
    if (p.fitness.size() != eval_acc_.size()) throw ProtocolError("fitness report size mismatch");
    child_fit_[slot] = p.fitness;
    --child_missing_;
  }

  void on_gbest_down(const Message& msg) {
    const auto& p = std::get<GbestDownPayload>(msg.payload);
    gbest_x_ = slice(p.label).at(p.index).x;
    forward_broadcast(msg);
  }

  void on_elite_down(const Message& msg) {
    const auto& p = std::get<EliteDownPayload>(msg.payload);
    apply_elites(p.indices);
    forward_broadcast(msg);
  }

  void on_replace_down(const Message& msg) {
    const auto& p = std::get<SolutionReplacePayload>(msg.payload);
    apply_replacements(p.source, p.moves);
    forward_broadcast(msg);
  }

  void on_scout_down(const Message& msg) {
    const auto& p = std::get<ScoutReinitPayload>(msg.payload);
    apply_scout_redraw(p.solutions);
    forward_broadcast(msg);
  }

  void on_copy_down(const Message& msg) {
    const auto& p = std::get<SolutionCopyPayload>(msg.payload);
    apply_onlooker_copy(p.solution);
    forward_broadcast(msg);
  }

  void on_employed_request(const Message& msg) {
    const auto& p = std::get<EmployedRequestPayload>(msg.payload);
    int l = rng_.uniform_index(cfg_->elite_size);
    int h = rng_.uniform_other(inst_->agent_count(), id_);
    double phi = rng_.uniform_in(cfg_->phi_lo, cfg_->phi_hi);
    double cap = rng_.uniform_in(cfg_->cap_phi_lo, cfg_->cap_phi_hi);
    pending_.push_back(PendingUpdate{SliceLabel::Work, p.solution, p.solution, l, l, phi, cap, h});
    send_routed(Message{id_, h, 0, ValueSharePayload{false, p.solution, l, 0, 0}});
  }

  void on_onlooker_request(const Message& msg) {
    const auto& p = std::get<OnlookerRequestPayload>(msg.payload);
    int h = rng_.uniform_other(inst_->agent_count(), id_);
    int l = rng_.uniform_index(cfg_->elite_size);
    double phi = rng_.uniform_in(cfg_->phi_lo, cfg_->phi_hi);
    double cap = rng_.uniform_in(cfg_->cap_phi_lo, cfg_->cap_phi_hi);
    pending_.push_back(
        PendingUpdate{SliceLabel::Onlooker, p.solution, p.elite, p.elite, l, phi, cap, h});
    send_routed(Message{id_, h, 0, ValueSharePayload{false, p.solution, p.elite, 0, 0}});
  }

  void on_value_share(const Message& msg) {
    const auto& p = std::get<ValueSharePayload>(msg.payload);
    if (!p.reply) {
      send_routed(Message{id_, msg.src, 0,
                          ValueSharePayload{true, p.solution, p.elite, elite_.at(p.elite).x,
                                            pop_.at(p.solution).x}});
      return;
    }
    auto it = std::find_if(pending_.begin(), pending_.end(), [&](const PendingUpdate& u) {
      return u.helper == msg.src && u.solution == p.solution && u.fetch_elite == p.elite;
    });
    if (it == pending_.end()) throw ProtocolError("unmatched value reply");
    double x = candidate_update(p.elite_x, gbest_x_, p.pop_x, elite_.at(it->own_elite).x, it->phi,
                                it->cap, inst_->domain(id_));
    slice_mut(it->target).at(it->slot).x = x;
    pending_.erase(it);
  }

  // --- shared state transitions (applied at the root when it originates a
  // broadcast, and at every other agent when the broadcast arrives) ---

  void apply_elites(const std::vector<int>& indices) {
    for (std::size_t m = 0; m < indices.size(); ++m) elite_.at(m) = pop_.at(indices[m]);
    decision_x_ = gbest_x_;
  }

  void apply_replacements(SliceLabel source, const std::vector<std::pair<int, int>>& moves) {
    const auto& src = slice(source);
    for (auto [u, s] : moves) {
      pop_.at(u) = src.at(s);
      if (is_root()) {
        ledger_->pop_fitness.at(u) = source == SliceLabel::Work ? ledger_->work_fitness.at(s)
                                                                : ledger_->look_fitness.at(s);
        std::fill(ledger_->visited.at(u).begin(), ledger_->visited.at(u).end(), 0);
      }
    }
  }

  void apply_scout_redraw(const std::vector<int>& solutions) {
    const IntervalDomain& dom = inst_->domain(id_);
    for (int t : solutions) {
      pop_.at(t).x = init_draw(dom, rng_.uniform01());
      if (is_root()) {
        ledger_->pop_fitness.at(t) = kNan;
        ledger_->stale.at(t) = 1;
      }
    }
  }

  void apply_onlooker_copy(int solution) {
    for (auto& o : look_) o = pop_.at(solution);
  }

  // --- evaluation protocol ---

  void send_neighbor_values() {
    const auto& mine = slice(eval_label_);
    std::vector<double> xs(mine.size());
    for (std::size_t k = 0; k < mine.size(); ++k) xs[k] = mine[k].x;
    for (int nb : tree_->neighbors[id_])
      send_routed(Message{id_, nb, 0, NeighborValuesPayload{eval_label_, xs}});
  }

  bool try_finish_local() {
    if (!eval_active_ || eval_local_done_ || eval_send_pending_ || neighbor_missing_ > 0)
      return false;
    auto& mine = slice_mut(eval_label_);
    const auto& nbrs = tree_->neighbors[id_];
    for (std::size_t s = 0; s < nbrs.size(); ++s) {
      const BinaryConstraint& c = inst_->constraint_between(id_, nbrs[s]);
      const bool mine_first = c.first() == id_;
      const auto& col = neighbor_cols_[s];
      for (std::size_t k = 0; k < mine.size(); ++k) {
        eval_acc_[k] +=
            mine_first ? c.eval(mine[k].x, col[k]) : c.eval(col[k], mine[k].x);
      }
    }
    for (std::size_t k = 0; k < mine.size(); ++k) mine[k].local_fitness = eval_acc_[k];
    eval_local_done_ = true;
    return true;
  }

  bool try_finish_evaluate() {
    if (!eval_active_ || !eval_local_done_ || child_missing_ > 0) return false;
    auto& mine = slice_mut(eval_label_);
    for (const auto& col : child_fit_)
      for (std::size_t k = 0; k < eval_acc_.size(); ++k) eval_acc_[k] += col[k];
    if (is_root()) {
      // Every constraint was summed once at each endpoint; halve to undo
      // the double count.
      for (std::size_t k = 0; k < eval_acc_.size(); ++k) {
        eval_acc_[k] /= 2;
        mine[k].fitness = eval_acc_[k];
      }
      auto& dest = eval_label_ == SliceLabel::Population ? ledger_->pop_fitness
                   : eval_label_ == SliceLabel::Work     ? ledger_->work_fitness
                                                         : ledger_->look_fitness;
      dest = eval_acc_;
      if (eval_label_ == SliceLabel::Population)
        std::fill(ledger_->stale.begin(), ledger_->stale.end(), 0);
    } else {
      for (std::size_t k = 0; k < eval_acc_.size(); ++k) mine[k].fitness = eval_acc_[k];
      send_routed(Message{id_, tree_->parent[id_], 0, FitnessUpPayload{eval_label_, eval_acc_}});
    }
    eval_active_ = false;
    return true;
  }

  // --- coordinator actions ---

  void run_root_task(RootTask task) {
    switch (task) {
      case RootTask::None: break;
      case RootTask::EmployedDispatch: employed_dispatch(); break;
      case RootTask::EmployedCommit: employed_commit(); break;
      case RootTask::BuildCommit: build_commit(); break;
      case RootTask::OnlookerDispatch: onlooker_dispatch(); break;
      case RootTask::OnlookerCommit: onlooker_commit(); break;
      case RootTask::Scout: scout_sweep(); break;
    }
  }

  void employed_dispatch() {
    const int n = inst_->agent_count();
    for (int u = 0; u < cfg_->population_size; ++u) {
      int j = rng_.uniform_index(n);
      ledger_->visited[u][j] = 1;
      ++ledger_->employed_requests;
      send_routed(Message{id_, j, 0, EmployedRequestPayload{u}});
    }
  }

  void employed_commit() {
    std::vector<std::pair<int, int>> moves;
    for (int u = 0; u < cfg_->population_size; ++u)
      if (ledger_->work_fitness[u] > ledger_->pop_fitness[u]) moves.emplace_back(u, u);
    if (!moves.empty()) {
      broadcast(SolutionReplacePayload{SliceLabel::Work, moves});
      apply_replacements(SliceLabel::Work, moves);
    }
    propagate_best(SliceLabel::Work, ledger_->work_fitness);
  }

  void build_commit() {
    propagate_best(SliceLabel::Population, ledger_->pop_fitness);
    auto elites = top_elite_indices(ledger_->pop_fitness, cfg_->elite_size);
    broadcast(EliteDownPayload{elites});
    apply_elites(elites);
  }

  void onlooker_dispatch() {
    const int n = inst_->agent_count();
    int u = rng_.weighted_index(ledger_->prob);
    ledger_->current_selection = u;
    broadcast(SolutionCopyPayload{u});
    apply_onlooker_copy(u);
    for (int m = 0; m < cfg_->elite_size; ++m) {
      int j = rng_.uniform_index(n);
      ledger_->visited[u][j] = 1;
      ++ledger_->onlooker_requests;
      send_routed(Message{id_, j, 0, OnlookerRequestPayload{u, m}});
    }
  }

  void onlooker_commit() {
    const int u = ledger_->current_selection;
    if (u < 0) throw std::logic_error("onlooker commit without a selection");
    int cand = -1;
    double best = ledger_->pop_fitness[u];
    for (int t = 0; t < cfg_->elite_size; ++t) {
      if (ledger_->look_fitness[t] > best) {
        best = ledger_->look_fitness[t];
        cand = t;
      }
    }
    if (cand >= 0) {
      broadcast(SolutionReplacePayload{SliceLabel::Onlooker, {{u, cand}}});
      apply_replacements(SliceLabel::Onlooker, {{u, cand}});
      if (best > ledger_->best_fitness) {
        ledger_->best_fitness = best;
        gbest_x_ = look_[cand].x;
        broadcast(GbestDownPayload{SliceLabel::Onlooker, cand, best});
      }
    }
    ledger_->current_selection = -1;
  }

  void scout_sweep() {
    std::vector<int> rows;
    for (int u = 0; u < cfg_->population_size; ++u) {
      const auto& row = ledger_->visited[u];
      if (std::all_of(row.begin(), row.end(), [](char v) { return v != 0; })) rows.push_back(u);
    }
    if (rows.empty()) return;
    for (int u : rows) std::fill(ledger_->visited[u].begin(), ledger_->visited[u].end(), 0);
    broadcast(ScoutReinitPayload{rows});
    apply_scout_redraw(rows);
  }

  // Finds the best strict improvement over the current global best in
  // `fitness` (first index on ties) and propagates it.
  void propagate_best(SliceLabel label, const std::vector<double>& fitness) {
    int best = -1;
    double value = ledger_->best_fitness;
    for (std::size_t u = 0; u < fitness.size(); ++u) {
      if (fitness[u] > value) {
        value = fitness[u];
        best = static_cast<int>(u);
      }
    }
    if (best < 0) return;
    ledger_->best_fitness = value;
    gbest_x_ = slice(label)[best].x;
    broadcast(GbestDownPayload{label, best, value});
  }

  struct PendingUpdate {
    SliceLabel target;  // slice the finished candidate is written to
    int solution;       // population index the exchange refers to
    int slot;           // index written in the target slice
    int fetch_elite;    // elite index requested from the helper
    int own_elite;      // elite index read locally
    double phi, cap;
    int helper;
  };

  int id_;
  const CdcopInstance* inst_;
  const PseudoTree* tree_;
  const TreeRouter* router_;
  MailboxNetwork* net_;
  const SolverConfig* cfg_;
  RootLedger* ledger_;
  SubstreamRng rng_;

  std::vector<SolutionObject> pop_, work_, look_, elite_;
  double gbest_x_ = kNan;
  double decision_x_ = kNan;

  std::vector<Message> self_in_, self_out_;
  std::vector<PendingUpdate> pending_;
  RootTask task_ = RootTask::None;

  bool eval_active_ = false;
  bool eval_send_pending_ = false;
  bool eval_local_done_ = false;
  SliceLabel eval_label_ = SliceLabel::Population;
  std::vector<std::vector<double>> neighbor_cols_;
  std::vector<std::vector<double>> child_fit_;
  int neighbor_missing_ = 0;
  int child_missing_ = 0;
  std::vector<double> eval_acc_;
};

AbcdSolver::AbcdSolver(const CdcopInstance& inst, const PseudoTree& tree, const SolverConfig& cfg)
    : inst_(&inst),
      tree_(tree),
      cfg_(cfg),
      net_(inst.agent_count()),
      router_(tree_, inst),
      ledger_(std::make_unique<RootLedger>()) {
  cfg_.validate();
  if (inst.agent_count() < 2)
    throw std::invalid_argument("solver needs at least two agents");
  if (tree_.agent_count() != inst.agent_count())
    throw std::invalid_argument("pseudo tree does not match the instance");
  const int S = cfg_.population_size, M = cfg_.elite_size, n = inst.agent_count();
  ledger_->visited.assign(S, std::vector<char>(n, 0));
  ledger_->stale.assign(S, 0);
  ledger_->pop_fitness.assign(S, kNan);
  ledger_->work_fitness.assign(S, kNan);
  ledger_->look_fitness.assign(M, kNan);
  ledger_->fit.assign(S, 0);
  ledger_->prob.assign(S, 0);
  ledger_->best_fitness = kNegInf;
  agents_.reserve(n);
  for (int i = 0; i < n; ++i) {
    agents_.push_back(std::make_unique<AgentNode>(i, inst, tree_, router_, net_, cfg_,
                                                  i == tree_.root ? ledger_.get() : nullptr));
  }
  actors_.reserve(n);
  for (auto& a : agents_) actors_.push_back(a.get());
}

AbcdSolver::~AbcdSolver() = default;

void AbcdSolver::require_initialized() const {
  if (!initialized_) throw std::logic_error("solver not initialized");
}

void AbcdSolver::run_phase(const char* phase) {
  run_until_quiescent(net_, actors_, 4 * inst_->agent_count() + 16, phase);
}

AgentNode& AbcdSolver::root_agent() { return *agents_[tree_.root]; }

void AbcdSolver::initialize() {
  if (initialized_) throw std::logic_error("solver already initialized");
  started_ = std::chrono::steady_clock::now();
  for (auto& a : agents_) a->local_initialize();
  initialized_ = true;
}

void AbcdSolver::evaluate(SliceLabel label) {
  require_initialized();
  ++evaluate_invocations_;
  for (auto& a : agents_) a->begin_evaluate(label);
  run_phase("evaluate");
}

void AbcdSolver::build_phase() {
  evaluate(SliceLabel::Population);
  root_agent().set_root_task(RootTask::BuildCommit);
  run_phase("build-commit");
}

void AbcdSolver::employed_phase() {
  require_initialized();
  for (auto& a : agents_) a->local_copy_work_from_population();
  ledger_->work_fitness = ledger_->pop_fitness;
  root_agent().set_root_task(RootTask::EmployedDispatch);
  run_phase("employed-dispatch");
  evaluate(SliceLabel::Work);
  root_agent().set_root_task(RootTask::EmployedCommit);
  run_phase("employed-commit");
}

void AbcdSolver::compute_selection_probabilities() {
  require_initialized();
  ledger_->fit = selection_fit(ledger_->pop_fitness);
  ledger_->prob = selection_probabilities(ledger_->fit);
}

void AbcdSolver::onlooker_phase() {
  require_initialized();
  for (int z = 0; z < cfg_.population_size; ++z) {
    root_agent().set_root_task(RootTask::OnlookerDispatch);
    run_phase("onlooker-dispatch");
    evaluate(SliceLabel::Onlooker);
    root_agent().set_root_task(RootTask::OnlookerCommit);
    run_phase("onlooker-commit");
  }
}

void AbcdSolver::scout_phase() {
  require_initialized();
  if (cfg_.variant != Variant::AbcdE) return;
  root_agent().set_root_task(RootTask::Scout);
  run_phase("scout");
}

void AbcdSolver::run_iteration() {
  require_initialized();
  ++iteration_;
  build_phase();
  employed_phase();
  compute_selection_probabilities();
  onlooker_phase();
  scout_phase();
  append_trace_record();
}

void AbcdSolver::append_trace_record() {
  TraceRecord rec;
  rec.iteration = iteration_;
  rec.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started_)
          .count();
  rec.gbest_utility = ledger_->best_fitness;
  rec.employed_requests = ledger_->employed_requests - employed_snapshot_;
  rec.onlooker_requests = ledger_->onlooker_requests - onlooker_snapshot_;
  rec.total_messages = net_.counters().sent_total - sent_snapshot_;
  employed_snapshot_ = ledger_->employed_requests;
  onlooker_snapshot_ = ledger_->onlooker_requests;
  sent_snapshot_ = net_.counters().sent_total;
  IterationCounters ic;
  ic.employed_requests = rec.employed_requests;
  ic.onlooker_requests = rec.onlooker_requests;
  ic.evaluate_invocations = evaluate_invocations_ - evaluate_snapshot_;
  ic.transport_messages = rec.total_messages;
  evaluate_snapshot_ = evaluate_invocations_;
  records_.push_back(rec);
  iter_counters_.push_back(ic);
}

AnytimeTrace AbcdSolver::run() {
  if (!initialized_) initialize();
  for (int it = 0; it < cfg_.iterations; ++it) {
    run_iteration();
    if (cfg_.time_limit_ms && records_.back().elapsed_ms >= *cfg_.time_limit_ms) break;
  }
  AnytimeTrace trace;
  trace.records = records_;
  trace.final_assignment = gbest_assignment();
  trace.final_utility = ledger_->best_fitness;
  return trace;
}

int AbcdSolver::agent_count() const { return inst_->agent_count(); }
int AbcdSolver::root() const { return tree_.root; }
double AbcdSolver::gbest_fitness() const { return ledger_->best_fitness; }

Assignment AbcdSolver::gbest_assignment() const {
  Assignment x(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) x[i] = agents_[i]->gbest_component();
  return x;
}

Assignment AbcdSolver::decision_assignment() const {
  Assignment x(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) x[i] = agents_[i]->decision_component();
  return x;
}

const std::vector<SolutionObject>& AbcdSolver::population(int agent) const {
  return agents_.at(agent)->slice(SliceLabel::Population);
}
const std::vector<SolutionObject>& AbcdSolver::work_slice(int agent) const {
  return agents_.at(agent)->slice(SliceLabel::Work);
}
const std::vector<SolutionObject>& AbcdSolver::onlooker_slice(int agent) const {
  return agents_.at(agent)->slice(SliceLabel::Onlooker);
}
const std::vector<SolutionObject>& AbcdSolver::elite_slice(int agent) const {
  return agents_.at(agent)->elites();
}

const std::vector<double>& AbcdSolver::root_population_fitness() const {
  return ledger_->pop_fitness;
}
const std::vector<double>& AbcdSolver::root_work_fitness() const { return ledger_->work_fitness; }
const std::vector<double>& AbcdSolver::root_onlooker_fitness() const {
  return ledger_->look_fitness;
}
const std::vector<double>& AbcdSolver::selection_fit_values() const { return ledger_->fit; }
const std::vector<double>& AbcdSolver::selection_prob_values() const { return ledger_->prob; }

bool AbcdSolver::visited_flag(int solution, int agent) const {
  return ledger_->visited.at(solution).at(agent) != 0;
}
bool AbcdSolver::stale_flag(int solution) const { return ledger_->stale.at(solution) != 0; }

AgentStorage AbcdSolver::agent_storage(int agent) const { return agents_.at(agent)->storage(); }

long long AbcdSolver::root_extra_entries() const {
  long long total = 0;
  for (const auto& row : ledger_->visited) total += static_cast<long long>(row.size());
  total += static_cast<long long>(ledger_->fit.size());
  total += static_cast<long long>(ledger_->prob.size());
  return total;
}

const std::vector<TraceRecord>& AbcdSolver::trace_records() const { return records_; }
const std::vector<IterationCounters>& AbcdSolver::iteration_counters() const {
  return iter_counters_;
}
MailboxNetwork& AbcdSolver::network() { return net_; }
const PseudoTree& AbcdSolver::tree() const { return tree_; }

AnytimeTrace solve(const CdcopInstance& inst, const SolverConfig& cfg) {
  cfg.validate();
  PseudoTree tree = build_bfs_pseudo_tree(inst, cfg.seed, cfg.root_rule);
  AbcdSolver solver(inst, tree, cfg);
  return solver.run();
}

void SolverTestAccess::set_population_x(AbcdSolver& s, int agent, int solution, double x) {
  s.agents_.at(agent)->test_set_x(SliceLabel::Population, solution, x);
}
void SolverTestAccess::set_work_x(AbcdSolver& s, int agent, int solution, double x) {
  s.agents_.at(agent)->test_set_x(SliceLabel::Work, solution, x);
}
void SolverTestAccess::set_onlooker_x(AbcdSolver& s, int agent, int slot, double x) {
  s.agents_.at(agent)->test_set_x(SliceLabel::Onlooker, slot, x);
}
void SolverTestAccess::force_visited_row(AbcdSolver& s, int solution) {
  for (auto& v : s.ledger_->visited.at(solution)) v = 1;
}
RootLedger& SolverTestAccess::ledger(AbcdSolver& s) { return *s.ledger_; }

}  // namespace abcd
