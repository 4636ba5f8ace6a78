#pragma once

// Upper-part embedding of a query graph into a model graph. A query node b
// maps to a model node a only when both carry the same key and the model
// predecessors of a are exactly the images of b's predecessors, so the
// matched region is start-inclusive and predecessor-closed on both sides.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "specminer/model.hpp"

namespace specminer {

struct MatchOptions {
  bool include_ends = true;
  // Model node treated as absent: its children see their predecessor set
  // without it (or {start} if nothing else remains).
  std::optional<NodeId> hole;
  // Leaf budget for enumerate_matches.
  std::size_t max_results = 4096;
};

struct Embedding {
  std::vector<NodeId> phi;      // query id -> model id, -1 if unmatched
  std::size_t size = 0;         // matched query nodes, start included
  std::int64_t weight = 0;      // model frequency over matched query edges
  std::vector<NodeId> image() const;  // sorted model ids

  bool matched(NodeId q) const { return phi[q] >= 0; }
};

/// Best embedding by (size desc, weight desc, sorted image asc). `frequency`
/// may be null, in which case every edge weighs 1. The model must not be
/// empty.
Embedding best_match(const Graam& model, const std::map<Edge, std::int64_t>* frequency,
                     const Graam& query, const MatchOptions& options = {});

/// Every maximal embedding found by the search (pairwise not contained in
/// one another), best first.
std::vector<Embedding> enumerate_matches(const Graam& model,
                                         const std::map<Edge, std::int64_t>* frequency,
                                         const Graam& query, const MatchOptions& options = {});

/// Model predecessors of `a` as seen through `hole`.
std::vector<NodeId> visible_preds(const Adjacency& model_adj, NodeId model_start, NodeId a,
                                  const std::optional<NodeId>& hole);

}  // namespace specminer
