#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "abcd/model.hpp"

namespace abcd {

enum class RootRule { HighestDegree, LowestId };

// BFS spanning tree of the constraint graph plus a depth-based total
// priority order. Communication structure for the solver: parent edges are
// always constraint edges.
struct PseudoTree {
  int root = 0;
  std::vector<int> parent;                 // -1 for the root
  std::vector<std::vector<int>> children;  // ascending ids
  std::vector<std::vector<int>> neighbors; // constraint-graph neighbors, ascending
  std::vector<int> depth;
  std::vector<int> priority;               // rank, 0 = highest

  int agent_count() const { return static_cast<int>(parent.size()); }
  int max_depth() const;
};

// Deterministic for a fixed (instance, seed): the tree shape depends only
// on the instance and root rule; the seed breaks equal-depth priority ties.
PseudoTree build_bfs_pseudo_tree(const CdcopInstance& inst, std::uint64_t seed,
                                 RootRule rule = RootRule::HighestDegree,
                                 std::optional<int> forced_root = std::nullopt);

// Agents in nondecreasing depth, ties by id; root first.
std::vector<int> broadcast_order(const PseudoTree& tree);

// One line per agent: "id depth parent priority".
void dump_pseudo_tree(const PseudoTree& tree, std::ostream& out);
std::string dump_pseudo_tree(const PseudoTree& tree);

}  // namespace abcd
