#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "specminer/ifd.hpp"
#include "specminer/model.hpp"

namespace specminer {

inline constexpr std::size_t kDefaultNodeBound = 64;

/// Isomorphism-invariant encoding of a labeled digraph. `order[p]` is the
/// original node placed at canonical position p.
struct CanonicalForm {
  std::vector<std::string> labels;
  std::vector<Edge> edges;  // canonical positions, sorted
  std::vector<std::int64_t> frequencies;  // parallel to edges; empty if unweighted
  std::vector<NodeId> order;

  bool operator==(const CanonicalForm& o) const {
    return labels == o.labels && edges == o.edges && frequencies == o.frequencies;
  }
  std::strong_ordering operator<=>(const CanonicalForm& o) const;
  std::string str() const;
};

/// Throws SizeLimitExceeded when labels.size() exceeds node_bound.
CanonicalForm canonical_form(const std::vector<std::string>& labels, const std::set<Edge>& edges,
                             const std::map<Edge, std::int64_t>* frequency = nullptr,
                             std::size_t node_bound = kDefaultNodeBound);
CanonicalForm canonical_form(const Graam& g, std::size_t node_bound = kDefaultNodeBound);
CanonicalForm canonical_form(const FSpec& f, std::size_t node_bound = kDefaultNodeBound);

/// API nodes of a usage together with the data edges among them.
struct ApiSequence {
  std::vector<ApiLabel> labels;
  std::set<Edge> data_edges;  // indices into labels
};

ApiSequence api_sequence(const PrimaryApiUsageGraph& g);
ApiSequence api_sequence(const Graam& g);

/// True iff a label-preserving bijection maps one data-edge set onto the other.
bool equivalent(const ApiSequence& a, const ApiSequence& b);

/// Keeps data edges and start/end wiring, adds writer->reader order edges
/// from the IFD model for same-receiver pairs, and re-wires orphans so every
/// node stays on a start-to-end path. Throws CycleAfterAugmentation.
Graam build_graam(const PrimaryApiUsageGraph& g, const IfdModel& ifd);

}  // namespace specminer
