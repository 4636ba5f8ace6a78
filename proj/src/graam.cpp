#include "specminer/graam.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <tuple>

#include "specminer/error.hpp"
#include "specminer/graph_algo.hpp"

namespace specminer {

std::strong_ordering CanonicalForm::operator<=>(const CanonicalForm& o) const {
  if (auto c = labels <=> o.labels; c != 0) return c;
  if (auto c = edges <=> o.edges; c != 0) return c;
  return frequencies <=> o.frequencies;
}

std::string CanonicalForm::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < labels.size(); ++i) os << (i ? ";" : "") << labels[i];
  os << '|';
  for (std::size_t i = 0; i < edges.size(); ++i) {
    os << (i ? "," : "") << edges[i].first << '>' << edges[i].second;
    if (!frequencies.empty()) os << '*' << frequencies[i];
  }
  return os.str();
}

namespace {

using Arc = std::pair<int, std::int64_t>;  // neighbor, weight

class CanonSearch {
 public:
  CanonSearch(const std::vector<std::string>& labels, const std::set<Edge>& edges,
              const std::map<Edge, std::int64_t>* freq)
      : labels_(labels), weighted_(freq != nullptr), out_(labels.size()), in_(labels.size()) {
    for (const auto& e : edges) {
      std::int64_t w = 0;
      if (freq != nullptr) {
        auto it = freq->find(e);
        w = it == freq->end() ? 0 : it->second;
      }
      out_[e.first].push_back({e.second, w});
      in_[e.second].push_back({e.first, w});
      edges_.push_back({e, w});
    }
    for (auto& v : out_) std::sort(v.begin(), v.end());
    for (auto& v : in_) std::sort(v.begin(), v.end());
  }

  CanonicalForm run() {
    std::vector<std::string> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<int> color(labels_.size());
    for (std::size_t u = 0; u < labels_.size(); ++u) {
      color[u] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), labels_[u]) -
                                  sorted.begin());
    }
    search(color);
    if (!best_) return {};
    return *best_;
  }

 private:
  void refine(std::vector<int>& color) const {
    const auto n = color.size();
    std::size_t classes = count_classes(color);
    while (true) {
      using Sig = std::tuple<int, std::vector<std::pair<int, std::int64_t>>,
                             std::vector<std::pair<int, std::int64_t>>>;
      std::vector<Sig> sig(n);
      for (std::size_t u = 0; u < n; ++u) {
        std::vector<std::pair<int, std::int64_t>> o;
        std::vector<std::pair<int, std::int64_t>> i;
        for (auto [v, w] : out_[u]) o.push_back({color[v], w});
        for (auto [v, w] : in_[u]) i.push_back({color[v], w});
        std::sort(o.begin(), o.end());
        std::sort(i.begin(), i.end());
        sig[u] = {color[u], std::move(o), std::move(i)};
      }
      std::vector<Sig> uniq = sig;
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      for (std::size_t u = 0; u < n; ++u) {
        color[u] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[u]) - uniq.begin());
      }
      if (uniq.size() == classes) break;
      classes = uniq.size();
    }
  }

  static std::size_t count_classes(const std::vector<int>& color) {
    std::set<int> s(color.begin(), color.end());
    return s.size();
  }

  bool twins(int a, int b) const {
    return out_[a] == out_[b] && in_[a] == in_[b] && labels_[a] == labels_[b];
  }

  void search(std::vector<int> color) {
    refine(color);
    const auto n = color.size();
    std::map<int, std::vector<int>> cells;
    for (std::size_t u = 0; u < n; ++u) cells[color[u]].push_back(static_cast<int>(u));
    const std::vector<int>* target = nullptr;
    for (const auto& [c, members] : cells) {
      if (members.size() > 1) {
        target = &members;
        break;
      }
    }
    if (target == nullptr) {
      leaf(color);
      return;
    }
    std::vector<int> tried;
    for (int v : *target) {
      if (std::any_of(tried.begin(), tried.end(), [&](int t) { return twins(t, v); })) continue;
      tried.push_back(v);
      std::vector<int> next(n);
      for (std::size_t u = 0; u < n; ++u) {
        const bool other = color[u] == color[v] && static_cast<int>(u) != v;
        next[u] = 2 * color[u] + (other ? 1 : 0);
      }
      search(std::move(next));
    }
  }

  void leaf(const std::vector<int>& color) {
    const auto n = color.size();
    CanonicalForm f;
    f.order.resize(n);
    for (std::size_t u = 0; u < n; ++u) f.order[color[u]] = static_cast<NodeId>(u);
    for (std::size_t p = 0; p < n; ++p) f.labels.push_back(labels_[f.order[p]]);
    std::vector<std::pair<Edge, std::int64_t>> mapped;
    for (const auto& [e, w] : edges_) mapped.push_back({{color[e.first], color[e.second]}, w});
    std::sort(mapped.begin(), mapped.end());
    for (const auto& [e, w] : mapped) {
      f.edges.push_back(e);
      if (weighted_) f.frequencies.push_back(w);
    }
    if (!best_ || f < *best_) best_ = std::move(f);
  }

  const std::vector<std::string>& labels_;
  bool weighted_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::vector<std::pair<Edge, std::int64_t>> edges_;
  std::optional<CanonicalForm> best_;
};

std::vector<std::string> keys_of(const std::vector<UsageNode>& nodes) {
  std::vector<std::string> out;
  for (const auto& n : nodes) out.push_back(n.key());
  return out;
}

}  // namespace

CanonicalForm canonical_form(const std::vector<std::string>& labels, const std::set<Edge>& edges,
                             const std::map<Edge, std::int64_t>* frequency,
                             std::size_t node_bound) {
  if (labels.size() > node_bound) {
    throw SizeLimitExceeded("graph has " + std::to_string(labels.size()) +
                            " nodes, canonical form bound is " + std::to_string(node_bound));
  }
  return CanonSearch(labels, edges, frequency).run();
}

CanonicalForm canonical_form(const Graam& g, std::size_t node_bound) {
  return canonical_form(keys_of(g.nodes), g.edges, nullptr, node_bound);
}

CanonicalForm canonical_form(const FSpec& f, std::size_t node_bound) {
  return canonical_form(keys_of(f.graph.nodes), f.graph.edges, &f.frequency, node_bound);
}

namespace {

ApiSequence sequence_of(const std::vector<UsageNode>& nodes, const std::set<Edge>& edges) {
  ApiSequence s;
  std::map<NodeId, int> index;
  for (const auto& n : nodes) {
    if (!n.is_api()) continue;
    index[n.id] = static_cast<int>(s.labels.size());
    s.labels.push_back(n.label);
  }
  for (const auto& [u, v] : edges) {
    auto a = index.find(u);
    auto b = index.find(v);
    if (a != index.end() && b != index.end()) s.data_edges.insert({a->second, b->second});
  }
  return s;
}

}  // namespace

ApiSequence api_sequence(const PrimaryApiUsageGraph& g) { return sequence_of(g.nodes, g.data_edges); }
ApiSequence api_sequence(const Graam& g) { return sequence_of(g.nodes, g.edges); }

bool equivalent(const ApiSequence& a, const ApiSequence& b) {
  if (a.labels.size() != b.labels.size() || a.data_edges.size() != b.data_edges.size()) return false;
  auto strs = [](const ApiSequence& s) {
    std::vector<std::string> out;
    for (const auto& l : s.labels) out.push_back(l.str());
    return out;
  };
  return canonical_form(strs(a), a.data_edges) == canonical_form(strs(b), b.data_edges);
}

Graam build_graam(const PrimaryApiUsageGraph& g, const IfdModel& ifd) {
  Graam out;
  out.id = g.program + ":" + g.entrypoint;
  out.program = g.program;
  out.entrypoint = g.entrypoint;
  out.nodes = g.nodes;
  for (auto& n : out.nodes) {
    if (!n.is_api()) n.receivers.clear();
  }
  out.edges = g.data_edges;
  for (const auto& [u, v] : g.sequence_edges) {
    if (g.nodes[u].role == NodeRole::Start || g.nodes[v].role == NodeRole::End) out.edges.insert({u, v});
  }

  std::set<Edge> order = g.sequence_edges;
  order.insert(g.data_edges.begin(), g.data_edges.end());
  const auto before = transitive_closure(g.nodes.size(), order);
  std::vector<std::optional<std::string>> method(g.nodes.size());
  for (const auto& n : g.nodes) {
    if (n.is_api()) method[n.id] = ifd.method_for(n.label);
  }
  for (const auto& w : g.nodes) {
    if (!method[w.id]) continue;
    for (const auto& r : g.nodes) {
      if (r.id == w.id || !method[r.id] || !same_receiver(w, r)) continue;
      // A reader that runs first was fed by an earlier writer (or the usage is
      // unsound); either way this writer does not order it.
      if (before[r.id][w.id] || ifd.fields_between(*method[w.id], *method[r.id]).empty()) continue;
      out.edges.insert({w.id, r.id});
    }
  }

  const auto adj = make_adjacency(out.nodes.size(), out.edges);
  const NodeId start = g.start();
  for (const auto& n : g.nodes) {
    if (!n.is_api()) continue;
    if (adj.preds[n.id].empty()) out.edges.insert({start, n.id});
  }
  for (const auto& n : g.nodes) {
    if (!n.is_api() || !adj.succs[n.id].empty()) continue;
    UsageNode end;
    end.id = static_cast<NodeId>(out.nodes.size());
    end.role = NodeRole::End;
    out.nodes.push_back(end);
    out.edges.insert({n.id, end.id});
  }
  if (!is_acyclic(out.nodes.size(), out.edges)) {
    throw CycleAfterAugmentation("GRAAM of '" + out.id + "' is cyclic after adding IFD edges");
  }
  out.validate();
  return out;
}

}  // namespace specminer
