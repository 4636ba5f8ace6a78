#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "specminer/match.hpp"
#include "specminer/model.hpp"

namespace specminer {

/// A mergeable pair: the upper sub-GRAAM of the FSpec (`fspec_nodes`) and the
/// equivalent upper sub-GRAAM of the incoming GRAAM (`graam_nodes`), paired
/// index by index.
struct MergeCandidate {
  std::vector<std::pair<NodeId, NodeId>> bijection;  // (graam node, fspec node)
  std::vector<NodeId> graam_nodes;
  std::vector<NodeId> fspec_nodes;
  std::size_t size = 0;
  std::int64_t weight = 0;
};

/// Maximal candidates, largest first. Equal sizes order by the canonical form
/// of the matched region, then by FSpec ids.
std::vector<MergeCandidate> find_mergeable(const FSpec& fspec, const Graam& g);

/// Folds one GRAAM into the model: the largest candidate's edges gain one
/// unit each and the rest of g is grafted with frequency 1.
FSpec merge(const FSpec& fspec, const Graam& g);

struct LearningCurveRow {
  std::size_t graams_visited = 0;
  std::size_t cumulative_graam_nodes = 0;
  std::size_t fspec_nodes = 0;
  std::size_t fspec_edges = 0;

  auto operator<=>(const LearningCurveRow&) const = default;
};

struct LearningCurve {
  std::vector<LearningCurveRow> rows;
};

/// Node count descending, id ascending.
std::vector<Graam> training_order(std::vector<Graam> graams);

/// Merges in training order unless `keep_order` is set.
std::pair<FSpec, LearningCurve> train(const std::vector<Graam>& graams, bool keep_order = false);

/// Smallest k whose FSpec node count reaches threshold * final node count.
/// Throws InputError on an empty curve or a threshold outside (0, 1].
std::size_t saturation_point(const LearningCurve& curve, double threshold);

}  // namespace specminer
