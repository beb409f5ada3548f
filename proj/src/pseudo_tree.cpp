#include "abcd/pseudo_tree.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "abcd/rng.hpp"

namespace abcd {

namespace {
// Stream id for priority tie-breaks; outside the per-agent id range so the
// tree builder never shares a stream with an agent.
constexpr std::uint64_t kTreeStreamSalt = 0x7472656533ULL;  // "tree3"
}  // namespace

int PseudoTree::max_depth() const {
  int d = 0;
  for (int v : depth) d = std::max(d, v);
  return d;
}

PseudoTree build_bfs_pseudo_tree(const CdcopInstance& inst, std::uint64_t seed,
                                 RootRule rule, std::optional<int> forced_root) {
  const int n = inst.agent_count();

  int root = 0;
  if (forced_root) {
    root = *forced_root;
    if (root < 0 || root >= n) throw std::invalid_argument("forced root id out of range");
  } else if (rule == RootRule::HighestDegree) {
    for (int i = 1; i < n; ++i)
      if (inst.neighbors(i).size() > inst.neighbors(root).size()) root = i;
  }  // LowestId keeps root = 0

  PseudoTree tree;
  tree.root = root;
  tree.parent.assign(n, -1);
  tree.children.assign(n, {});
  tree.neighbors.resize(n);
  for (int i = 0; i < n; ++i) tree.neighbors[i] = inst.neighbors(i);
  tree.depth.assign(n, -1);

  std::queue<int> frontier;
  frontier.push(root);
  tree.depth[root] = 0;
  while (!frontier.empty()) {
    int a = frontier.front();
    frontier.pop();
    for (int b : inst.neighbors(a)) {  // ascending: reproducible tree shape
      if (tree.depth[b] < 0) {
        tree.depth[b] = tree.depth[a] + 1;
        tree.parent[b] = a;
        tree.children[a].push_back(b);
        frontier.push(b);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (tree.depth[i] < 0)
      throw std::invalid_argument("constraint graph is disconnected: agent " +
                                  std::to_string(i) + " is unreachable from the root");

  // Priorities: strictly by depth, equal depths shuffled by the seeded
  // stream, agent id as the final tie-break.
  SubstreamRng rng(seed, kTreeStreamSalt);
  std::vector<double> tie(n);
  for (int i = 0; i < n; ++i) tie[i] = rng.uniform01();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (tree.depth[a] != tree.depth[b]) return tree.depth[a] < tree.depth[b];
    if (tie[a] != tie[b]) return tie[a] < tie[b];
    return a < b;
  });
  tree.priority.assign(n, 0);
  for (int rank = 0; rank < n; ++rank) tree.priority[order[rank]] = rank;

  return tree;
}

std::vector<int> broadcast_order(const PseudoTree& tree) {
  std::vector<int> order(tree.agent_count());
  for (int i = 0; i < tree.agent_count(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (tree.depth[a] != tree.depth[b]) return tree.depth[a] < tree.depth[b];
    return a < b;
  });
  return order;
}

void dump_pseudo_tree(const PseudoTree& tree, std::ostream& out) {
  for (int i = 0; i < tree.agent_count(); ++i)
    out << i << ' ' << tree.depth[i] << ' ' << tree.parent[i] << ' ' << tree.priority[i]
        << '\n';
}

std::string dump_pseudo_tree(const PseudoTree& tree) {
  std::ostringstream out;
  dump_pseudo_tree(tree, out);
  return out.str();
}

}  // namespace abcd
