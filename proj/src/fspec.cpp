#include "specminer/fspec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specminer/error.hpp"
#include "specminer/graam.hpp"

namespace specminer {

namespace {

UsageNode model_node(const UsageNode& n, NodeId id) {
  UsageNode out;
  out.id = id;
  out.role = n.role;
  out.label = n.label;
  return out;
}

CanonicalForm region_form(const Graam& g, const std::vector<NodeId>& nodes) {
  std::map<NodeId, NodeId> local;
  std::vector<std::string> labels;
  for (NodeId n : nodes) {
    local[n] = static_cast<NodeId>(labels.size());
    labels.push_back(g.nodes[n].key());
  }
  std::set<Edge> edges;
  for (const auto& [u, v] : g.edges) {
    if (local.contains(u) && local.contains(v)) edges.insert({local[u], local[v]});
  }
  return canonical_form(labels, edges, nullptr, std::max(labels.size(), kDefaultNodeBound));
}

}  // namespace

std::vector<MergeCandidate> find_mergeable(const FSpec& fspec, const Graam& g) {
  if (fspec.empty()) return {};
  std::vector<std::pair<CanonicalForm, MergeCandidate>> keyed;
  for (const auto& e : enumerate_matches(fspec.graph, &fspec.frequency, g)) {
    MergeCandidate c;
    for (std::size_t q = 0; q < e.phi.size(); ++q) {
      if (e.phi[q] < 0) continue;
      c.bijection.push_back({static_cast<NodeId>(q), e.phi[q]});
      c.graam_nodes.push_back(static_cast<NodeId>(q));
    }
    c.fspec_nodes = e.image();
    c.size = e.size;
    c.weight = e.weight;
    keyed.emplace_back(region_form(g, c.graam_nodes), std::move(c));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second.size != b.second.size) return a.second.size > b.second.size;
    if (a.first != b.first) return a.first < b.first;
    return a.second.fspec_nodes < b.second.fspec_nodes;
  });
  std::vector<MergeCandidate> out;
  for (auto& [form, c] : keyed) out.push_back(std::move(c));
  return out;
}

FSpec merge(const FSpec& fspec, const Graam& g) {
  FSpec out;
  if (fspec.empty()) {
    out.graph.id = "fspec";
    for (const auto& n : g.nodes) out.graph.nodes.push_back(model_node(n, n.id));
    out.graph.edges = g.edges;
    for (const auto& e : g.edges) out.frequency[e] = 1;
    return out;
  }
  out = fspec;
  const auto candidates = find_mergeable(fspec, g);
  std::vector<NodeId> psi(g.nodes.size(), -1);
  if (!candidates.empty()) {
    for (const auto& [q, a] : candidates.front().bijection) psi[q] = a;
  }
  for (const auto& [u, v] : g.edges) {
    if (psi[u] >= 0 && psi[v] >= 0) ++out.frequency[{psi[u], psi[v]}];
  }
  // Graft the unmatched remainder as fresh nodes, keeping g's own edges.
  for (const auto& n : g.nodes) {
    if (psi[n.id] >= 0) continue;
    psi[n.id] = static_cast<NodeId>(out.graph.nodes.size());
    out.graph.nodes.push_back(model_node(n, psi[n.id]));
  }
  for (const auto& [u, v] : g.edges) {
    const Edge e{psi[u], psi[v]};
    if (out.graph.edges.insert(e).second) out.frequency[e] = 1;
  }
  return out;
}

std::vector<Graam> training_order(std::vector<Graam> graams) {
  std::stable_sort(graams.begin(), graams.end(), [](const Graam& a, const Graam& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() > b.nodes.size();
    return a.id < b.id;
  });
  return graams;
}

std::pair<FSpec, LearningCurve> train(const std::vector<Graam>& graams, bool keep_order) {
  const auto ordered = keep_order ? graams : training_order(graams);
  FSpec f;
  LearningCurve curve;
  std::size_t cumulative = 0;
  for (const auto& g : ordered) {
    f = merge(f, g);
    cumulative += g.nodes.size();
    curve.rows.push_back({curve.rows.size() + 1, cumulative, f.graph.nodes.size(), f.graph.edges.size()});
  }
  return {std::move(f), std::move(curve)};
}

std::size_t saturation_point(const LearningCurve& curve, double threshold) {
  if (curve.rows.empty()) throw InputError("saturation point of an empty learning curve");
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InputError("saturation threshold must be in (0, 1], got " + std::to_string(threshold));
  }
  const double target = threshold * static_cast<double>(curve.rows.back().fspec_nodes);
  for (const auto& row : curve.rows) {
    if (static_cast<double>(row.fspec_nodes) + 1e-9 >= target) return row.graams_visited;
  }
  return curve.rows.back().graams_visited;
}

}  // namespace specminer
