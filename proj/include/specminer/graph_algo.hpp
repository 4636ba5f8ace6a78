#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "specminer/model.hpp"

namespace specminer {

std::vector<bool> reachable_from(const std::vector<std::vector<NodeId>>& succs,
                                 const std::vector<NodeId>& seeds);

bool is_acyclic(std::size_t node_count, const std::set<Edge>& edges);

/// Kahn's algorithm, always releasing the smallest ready id first.
/// Returns nullopt on a cycle.
std::optional<std::vector<NodeId>> topological_order(std::size_t node_count,
                                                     const std::set<Edge>& edges);

/// reach[u][v] is true iff a non-empty path u -> v exists. DAG only.
std::vector<std::vector<bool>> transitive_closure(std::size_t node_count,
                                                  const std::set<Edge>& edges);

/// Every simple path from `from` to a node satisfying `is_sink`. Stops after
/// `limit` paths; returns false in that case.
bool enumerate_paths(const std::vector<std::vector<NodeId>>& succs, NodeId from,
                     const std::function<bool(NodeId)>& is_sink, std::size_t limit,
                     std::vector<std::vector<NodeId>>& out);

/// Longest-path depth from the start node (start = 0).
std::vector<int> depth_from_start(const Graam& g);

}  // namespace specminer
