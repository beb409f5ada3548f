#include "abcd/network.hpp"

#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

namespace abcd {

const char* to_string(SliceLabel label) {
  switch (label) {
    case SliceLabel::Population: return "P";
    case SliceLabel::Work: return "Q";
    case SliceLabel::Onlooker: return "R";
  }
  return "?";
}

const char* to_string(MsgKind kind) {
  switch (kind) {
    case MsgKind::NeighborValues: return "NeighborValues";
    case MsgKind::FitnessUp: return "FitnessUp";
    case MsgKind::GbestDown: return "GbestDown";
    case MsgKind::EliteDown: return "EliteDown";
    case MsgKind::EmployedUpdateRequest: return "EmployedUpdateRequest";
    case MsgKind::OnlookerUpdateRequest: return "OnlookerUpdateRequest";
    case MsgKind::ValueShare: return "ValueShare";
    case MsgKind::SolutionReplaceDown: return "SolutionReplaceDown";
    case MsgKind::ScoutReinitRequest: return "ScoutReinitRequest";
    case MsgKind::SolutionCopyDown: return "SolutionCopyDown";
  }
  return "?";
}

MsgKind kind_of(const Payload& payload) {
  return static_cast<MsgKind>(payload.index());
}

int solution_index_of(const Message& msg) {
  switch (msg.kind()) {
    case MsgKind::GbestDown: return std::get<GbestDownPayload>(msg.payload).index;
    case MsgKind::EmployedUpdateRequest:
      return std::get<EmployedRequestPayload>(msg.payload).solution;
    case MsgKind::OnlookerUpdateRequest:
      return std::get<OnlookerRequestPayload>(msg.payload).solution;
    case MsgKind::ValueShare: return std::get<ValueSharePayload>(msg.payload).solution;
    case MsgKind::SolutionCopyDown:
      return std::get<SolutionCopyPayload>(msg.payload).solution;
    default: return -1;
  }
}

MailboxNetwork::MailboxNetwork(int agent_count) : agent_count_(agent_count) {
  if (agent_count < 1) throw std::invalid_argument("network needs at least one agent");
  inboxes_.resize(agent_count);
}

void MailboxNetwork::send(int from, int to, Message msg) {
  if (from < 0 || from >= agent_count_ || to < 0 || to >= agent_count_)
    throw std::invalid_argument("send endpoint out of range");
  if (from == to) throw std::invalid_argument("self-send rejected");
  msg.sent_round = round_;
  ++counters_.sent_total;
  ++counters_.sent_by_kind[static_cast<int>(msg.kind())];
  pending_.push_back(InFlight{to, std::move(msg)});
}

int MailboxNetwork::deliver_pending() {
  int delivered = static_cast<int>(pending_.size());
  for (auto& p : pending_) inboxes_[p.to].push_back(std::move(p.msg));
  pending_.clear();
  counters_.delivered_total += delivered;
  return delivered;
}

std::optional<Message> MailboxNetwork::poll(int agent) {
  auto& box = inboxes_.at(agent);
  if (box.empty()) return std::nullopt;
  Message msg = std::move(box.front());
  box.pop_front();
  return msg;
}

bool MailboxNetwork::idle() const {
  if (!pending_.empty()) return false;
  for (const auto& box : inboxes_)
    if (!box.empty()) return false;
  return true;
}

void MailboxNetwork::log_message(const Message& msg) const {
  if (!log_) return;
  *log_ << round_ << ',' << to_string(msg.kind()) << ',' << msg.src << ',' << msg.dst
        << ',' << solution_index_of(msg) << '\n';
}

bool run_round(MailboxNetwork& net, const std::vector<Actor*>& agents) {
  net.advance_round();
  bool active = net.deliver_pending() > 0;
  for (Actor* a : agents) active |= a->step();
  return active;
}

int run_until_quiescent(MailboxNetwork& net, const std::vector<Actor*>& agents,
                        int max_rounds, const char* phase) {
  for (int r = 0; r < max_rounds; ++r) {
    if (!run_round(net, agents)) return r + 1;
  }
  throw ProtocolError(std::string("phase '") + phase + "' did not quiesce within " +
                      std::to_string(max_rounds) + " rounds");
}

TreeRouter::TreeRouter(const PseudoTree& tree, const CdcopInstance& inst)
    : tree_(&tree), inst_(&inst) {
  const int n = tree.agent_count();
  hop_.assign(n, std::vector<int>(n, -1));
  // BFS over tree edges from every source; first edge on the unique tree
  // path. O(n^2), built once at setup.
  for (int src = 0; src < n; ++src) {
    std::vector<int> prev(n, -1);
    std::queue<int> q;
    q.push(src);
    prev[src] = src;
    while (!q.empty()) {
      int a = q.front();
      q.pop();
      auto visit = [&](int b) {
        if (prev[b] < 0) {
          prev[b] = a;
          q.push(b);
        }
      };
      if (tree.parent[a] >= 0) visit(tree.parent[a]);
      for (int c : tree.children[a]) visit(c);
    }
    for (int dest = 0; dest < n; ++dest) {
      if (dest == src) continue;
      int step = dest;
      while (prev[step] != src) step = prev[step];
      hop_[src][dest] = step;
    }
  }
}

int TreeRouter::next_hop(int from, int dest) const {
  if (from == dest) return dest;
  if (inst_->adjacent(from, dest)) return dest;
  return hop_[from][dest];
}

int TreeRouter::path_length(int from, int dest) const {
  int hops = 0;
  int at = from;
  while (at != dest) {
    at = next_hop(at, dest);
    ++hops;
  }
  return hops;
}

}  // namespace abcd
