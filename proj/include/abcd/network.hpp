#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <vector>

#include "abcd/messages.hpp"
#include "abcd/model.hpp"
#include "abcd/pseudo_tree.hpp"

namespace abcd {

// Raised when an agent observes a message it cannot be expecting; carries
// enough context to locate the offending round.
struct ProtocolError : std::logic_error {
  using std::logic_error::logic_error;
};

struct NetworkCounters {
  long long sent_total = 0;
  long long delivered_total = 0;
  std::array<long long, kMsgKindCount> sent_by_kind{};
};

// Reliable synchronous-round transport: per-(sender, receiver) FIFO, no
// loss, no duplication. A message sent in round r is deliverable no
// earlier than round r+1.
class MailboxNetwork {
 public:
  explicit MailboxNetwork(int agent_count);

  int agent_count() const { return agent_count_; }
  int round() const { return round_; }

  // from != to; both ids valid. Stamps the current round.
  void send(int from, int to, Message msg);

  // Moves everything sent in earlier rounds into the receivers' inboxes,
  // in global send order. Returns the number of messages delivered.
  int deliver_pending();

  void advance_round() { ++round_; }

  // Next delivered message for `agent`, oldest first.
  std::optional<Message> poll(int agent);

  bool idle() const;  // nothing in flight, nothing undelivered in inboxes

  const NetworkCounters& counters() const { return counters_; }

  // Optional logical message log: one line per protocol message,
  // "round,kind,from,to,solution_index". Written by the protocol layer at
  // origination, not per transport hop.
  void set_message_log(std::ostream* log) { log_ = log; }
  void log_message(const Message& msg) const;

 private:
  struct InFlight {
    int to;
    Message msg;
  };

  int agent_count_;
  int round_ = 0;
  std::vector<InFlight> pending_;
  std::vector<std::deque<Message>> inboxes_;
  NetworkCounters counters_;
  std::ostream* log_ = nullptr;
};

// Anything steppable by the round scheduler.
class Actor {
 public:
  virtual ~Actor() = default;
  // Called once per round after delivery; returns true if the actor did
  // anything (consumed a message, sent, or changed state).
  virtual bool step() = 0;
};

// Delivers, then steps every agent exactly once in ascending id order.
// Returns true if the round produced any activity.
bool run_round(MailboxNetwork& net, const std::vector<Actor*>& agents);

// Runs rounds until a fully quiet one. Throws ProtocolError after
// `max_rounds` as a deadlock diagnostic.
int run_until_quiescent(MailboxNetwork& net, const std::vector<Actor*>& agents,
                        int max_rounds, const char* phase);

// Next-hop routing over pseudo-tree edges, with a direct edge used
// whenever the endpoints are constraint-graph neighbors. `path_length`
// walks the same next-hop chain the transport takes, so predicted and
// actual hop counts always agree.
class TreeRouter {
 public:
  TreeRouter(const PseudoTree& tree, const CdcopInstance& inst);

  int next_hop(int from, int dest) const;
  int path_length(int from, int dest) const;

 private:
  const PseudoTree* tree_;
  const CdcopInstance* inst_;
  std::vector<std::vector<int>> hop_;  // [from][dest] over tree edges
};

}  // namespace abcd
