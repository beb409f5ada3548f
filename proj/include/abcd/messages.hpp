#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace abcd {

// Which population a message refers to: the main population, the employed
// phase's working copy, or the onlooker phase's per-selection copies.
enum class SliceLabel { Population, Work, Onlooker };

const char* to_string(SliceLabel label);

enum class MsgKind {
  NeighborValues,
  FitnessUp,
  GbestDown,
  EliteDown,
  EmployedUpdateRequest,
  OnlookerUpdateRequest,
  ValueShare,
  SolutionReplaceDown,
  ScoutReinitRequest,
  SolutionCopyDown,
};

constexpr int kMsgKindCount = 10;

const char* to_string(MsgKind kind);

// Payloads, one per kind.

struct NeighborValuesPayload {
  SliceLabel label;
  std::vector<double> xs;  // sender's column, one value per solution
};

struct FitnessUpPayload {
  SliceLabel label;
  std::vector<double> fitness;  // subtree sums, one per solution
};

struct GbestDownPayload {
  SliceLabel label;  // slice the winning solution lives in
  int index;
  double fitness;
};

struct EliteDownPayload {
  std::vector<int> indices;  // population indices, best first
};

struct EmployedRequestPayload {
  int solution;
};

struct OnlookerRequestPayload {
  int solution;
  int elite;
};

struct ValueSharePayload {
  bool reply;
  int solution;   // population index whose value is wanted
  int elite;      // elite index whose value is wanted
  double elite_x = 0;  // filled in the reply
  double pop_x = 0;    // filled in the reply
};

struct SolutionReplacePayload {
  SliceLabel source;
  std::vector<std::pair<int, int>> moves;  // (population index, source index)
};

struct ScoutReinitPayload {
  std::vector<int> solutions;  // ascending
};

struct SolutionCopyPayload {
  int solution;  // copy this population column into every onlooker slot
};

using Payload = std::variant<NeighborValuesPayload, FitnessUpPayload, GbestDownPayload,
                             EliteDownPayload, EmployedRequestPayload,
                             OnlookerRequestPayload, ValueSharePayload,
                             SolutionReplacePayload, ScoutReinitPayload,
                             SolutionCopyPayload>;

MsgKind kind_of(const Payload& payload);

// A logical message. `src`/`dst` are the endpoints the protocol cares
// about; transport may relay it over several tree hops. Broadcast kinds
// use dst = -1 and are applied-and-forwarded at every agent.
struct Message {
  int src;
  int dst;
  int sent_round = 0;
  Payload payload;

  MsgKind kind() const { return kind_of(payload); }
};

// Solution index a message refers to, or -1; used by the message log.
int solution_index_of(const Message& msg);

}  // namespace abcd
