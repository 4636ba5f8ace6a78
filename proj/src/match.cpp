#include "specminer/match.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "specminer/graph_algo.hpp"

namespace specminer {

std::vector<NodeId> Embedding::image() const {
  std::vector<NodeId> out;
  for (NodeId a : phi) {
    if (a >= 0) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> visible_preds(const Adjacency& model_adj, NodeId model_start, NodeId a,
                                  const std::optional<NodeId>& hole) {
  std::vector<NodeId> p = model_adj.preds[a];
  if (hole) {
    auto it = std::find(p.begin(), p.end(), *hole);
    if (it != p.end()) {
      p.erase(it);
      if (p.empty()) p.push_back(model_start);
    }
  }
  std::sort(p.begin(), p.end());
  return p;
}

namespace {

bool better(const Embedding& a, const Embedding& b) {
  if (a.size != b.size) return a.size > b.size;
  if (a.weight != b.weight) return a.weight > b.weight;
  return a.image() < b.image();
}

class Matcher {
 public:
  Matcher(const Graam& model, const std::map<Edge, std::int64_t>* freq, const Graam& query,
          const MatchOptions& opt, bool enumerate)
      : model_(model), freq_(freq), query_(query), opt_(opt), enumerate_(enumerate),
        madj_(make_adjacency(model.nodes.size(), model.edges)),
        qadj_(make_adjacency(query.nodes.size(), query.edges)) {
    for (const auto& n : model.nodes) {
      if (opt.hole && n.id == *opt.hole) continue;
      by_key_[n.key()].push_back(n.id);
    }
    mstart_ = model.start();
    visible_.resize(model.nodes.size());
    for (const auto& n : model.nodes) visible_[n.id] = visible_preds(madj_, mstart_, n.id, opt.hole);
    auto topo = topological_order(query.nodes.size(), query.edges);
    for (NodeId b : topo.value_or(std::vector<NodeId>{})) {
      const auto& n = query.nodes[b];
      if (n.role == NodeRole::Start) continue;
      if (n.role == NodeRole::End && !opt.include_ends) continue;
      order_.push_back(b);
    }
    for (auto& p : qadj_.preds) std::sort(p.begin(), p.end());
    phi_.assign(query.nodes.size(), -1);
    used_.assign(model.nodes.size(), false);
  }

  void run() {
    const NodeId qs = query_.start();
    phi_[qs] = mstart_;
    used_[mstart_] = true;
    step(0, 1);
  }

  std::optional<Embedding> best;
  std::vector<Embedding> leaves;

 private:
  bool has_twin_after(std::size_t i) const {
    const NodeId b = order_[i];
    for (std::size_t j = i + 1; j < order_.size(); ++j) {
      const NodeId c = order_[j];
      if (query_.nodes[c].key() == query_.nodes[b].key() && qadj_.preds[c] == qadj_.preds[b]) {
        return true;
      }
    }
    return false;
  }

  void step(std::size_t i, std::size_t matched) {
    if (!enumerate_ && best && matched + (order_.size() - i) < best->size) return;
    if (enumerate_ && leaves.size() >= opt_.max_results) return;
    if (i == order_.size()) {
      leaf(matched);
      return;
    }
    const NodeId b = order_[i];
    std::vector<NodeId> target;
    for (NodeId p : qadj_.preds[b]) {
      if (phi_[p] < 0) {
        step(i + 1, matched);
        return;
      }
      target.push_back(phi_[p]);
    }
    std::sort(target.begin(), target.end());
    std::vector<NodeId> cands;
    if (auto it = by_key_.find(query_.nodes[b].key()); it != by_key_.end()) {
      for (NodeId a : it->second) {
        if (!used_[a] && visible_[a] == target) cands.push_back(a);
      }
    }
    if (cands.empty()) {
      step(i + 1, matched);
      return;
    }
    for (NodeId a : cands) {
      phi_[b] = a;
      used_[a] = true;
      step(i + 1, matched + 1);
      phi_[b] = -1;
      used_[a] = false;
    }
    // Leaving b unmatched only matters when a later twin could take its slot.
    if (has_twin_after(i)) step(i + 1, matched);
  }

  void leaf(std::size_t matched) {
    Embedding e;
    e.phi = phi_;
    e.size = matched;
    for (const auto& [u, v] : query_.edges) {
      if (phi_[u] < 0 || phi_[v] < 0) continue;
      const Edge me{phi_[u], phi_[v]};
      if (freq_ != nullptr) {
        auto it = freq_->find(me);
        if (it != freq_->end()) e.weight += it->second;
      } else if (model_.edges.contains(me)) {
        e.weight += 1;
      }
    }
    if (enumerate_) {
      leaves.push_back(e);
    } else if (!best || better(e, *best)) {
      best = std::move(e);
    }
  }

  const Graam& model_;
  const std::map<Edge, std::int64_t>* freq_;
  const Graam& query_;
  const MatchOptions& opt_;
  bool enumerate_;
  Adjacency madj_;
  Adjacency qadj_;
  NodeId mstart_ = 0;
  std::map<std::string, std::vector<NodeId>> by_key_;
  std::vector<std::vector<NodeId>> visible_;
  std::vector<NodeId> order_;
  std::vector<NodeId> phi_;
  std::vector<bool> used_;
};

Embedding unmatched(const Graam& query) {
  Embedding e;
  e.phi.assign(query.nodes.size(), -1);
  return e;
}

}  // namespace

Embedding best_match(const Graam& model, const std::map<Edge, std::int64_t>* frequency,
                     const Graam& query, const MatchOptions& options) {
  if (model.nodes.empty() || query.nodes.empty()) return unmatched(query);
  Matcher m(model, frequency, query, options, false);
  m.run();
  return m.best ? *m.best : unmatched(query);
}

std::vector<Embedding> enumerate_matches(const Graam& model,
                                         const std::map<Edge, std::int64_t>* frequency,
                                         const Graam& query, const MatchOptions& options) {
  if (model.nodes.empty() || query.nodes.empty()) return {};
  Matcher m(model, frequency, query, options, true);
  m.run();
  auto pairs = [](const Embedding& e) {
    std::set<std::pair<NodeId, NodeId>> s;
    for (std::size_t q = 0; q < e.phi.size(); ++q) {
      if (e.phi[q] >= 0) s.insert({static_cast<NodeId>(q), e.phi[q]});
    }
    return s;
  };
  std::vector<std::set<std::pair<NodeId, NodeId>>> sets;
  for (const auto& e : m.leaves) sets.push_back(pairs(e));
  std::vector<Embedding> out;
  std::set<std::set<std::pair<NodeId, NodeId>>> emitted;
  for (std::size_t i = 0; i < m.leaves.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < m.leaves.size() && !dominated; ++j) {
      if (i == j || sets[j].size() <= sets[i].size()) continue;
      dominated = std::includes(sets[j].begin(), sets[j].end(), sets[i].begin(), sets[i].end());
    }
    if (!dominated && emitted.insert(sets[i]).second) out.push_back(m.leaves[i]);
  }
  std::sort(out.begin(), out.end(), better);
  return out;
}

}  // namespace specminer
