#include "specminer/graph_algo.hpp"

#include <algorithm>
#include <queue>

namespace specminer {

std::vector<bool> reachable_from(const std::vector<std::vector<NodeId>>& succs,
                                 const std::vector<NodeId>& seeds) {
  std::vector<bool> seen(succs.size(), false);
  std::vector<NodeId> stack(seeds.begin(), seeds.end());
  for (NodeId s : seeds) seen[s] = true;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (NodeId m : succs[n]) {
      if (!seen[m]) {
        seen[m] = true;
        stack.push_back(m);
      }
    }
  }
  return seen;
}

std::optional<std::vector<NodeId>> topological_order(std::size_t node_count,
                                                     const std::set<Edge>& edges) {
  const auto adj = make_adjacency(node_count, edges);
  std::vector<std::size_t> indegree(node_count, 0);
  for (const auto& e : edges) ++indegree[e.second];
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (std::size_t i = 0; i < node_count; ++i) {
    if (indegree[i] == 0) ready.push(static_cast<NodeId>(i));
  }
  std::vector<NodeId> order;
  order.reserve(node_count);
  while (!ready.empty()) {
    NodeId n = ready.top();
    ready.pop();
    order.push_back(n);
    for (NodeId m : adj.succs[n]) {
      if (--indegree[m] == 0) ready.push(m);
    }
  }
  if (order.size() != node_count) return std::nullopt;
  return order;
}

bool is_acyclic(std::size_t node_count, const std::set<Edge>& edges) {
  return topological_order(node_count, edges).has_value();
}

std::vector<std::vector<bool>> transitive_closure(std::size_t node_count,
                                                  const std::set<Edge>& edges) {
  std::vector<std::vector<bool>> reach(node_count, std::vector<bool>(node_count, false));
  auto order = topological_order(node_count, edges);
  if (!order) return reach;
  const auto adj = make_adjacency(node_count, edges);
  for (auto it = order->rbegin(); it != order->rend(); ++it) {
    NodeId u = *it;
    for (NodeId v : adj.succs[u]) {
      reach[u][v] = true;
      for (std::size_t w = 0; w < node_count; ++w) {
        if (reach[v][w]) reach[u][w] = true;
      }
    }
  }
  return reach;
}

bool enumerate_paths(const std::vector<std::vector<NodeId>>& succs, NodeId from,
                     const std::function<bool(NodeId)>& is_sink, std::size_t limit,
                     std::vector<std::vector<NodeId>>& out) {
  std::vector<NodeId> path{from};
  std::vector<bool> on_path(succs.size(), false);
  on_path[from] = true;
  bool complete = true;
  std::function<void(NodeId)> walk = [&](NodeId n) {
    if (!complete) return;
    if (is_sink(n)) {
      if (out.size() >= limit) {
        complete = false;
        return;
      }
      out.push_back(path);
      return;
    }
    for (NodeId m : succs[n]) {
      if (on_path[m]) continue;
      on_path[m] = true;
      path.push_back(m);
      walk(m);
      path.pop_back();
      on_path[m] = false;
    }
  };
  walk(from);
  return complete;
}

std::vector<int> depth_from_start(const Graam& g) {
  std::vector<int> depth(g.nodes.size(), 0);
  auto order = topological_order(g.nodes.size(), g.edges);
  if (!order) return depth;
  const auto adj = make_adjacency(g.nodes.size(), g.edges);
  for (NodeId u : *order) {
    for (NodeId v : adj.succs[u]) depth[v] = std::max(depth[v], depth[u] + 1);
  }
  return depth;
}

}  // namespace specminer
