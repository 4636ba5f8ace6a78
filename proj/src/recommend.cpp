#include "specminer/recommend.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "specminer/error.hpp"

namespace specminer {

std::string to_string(Action action) {
  switch (action) {
    case Action::Add:
      return "add";
    case Action::Remove:
      return "remove";
    case Action::Replace:
      return "replace";
    case Action::Reorder:
      return "reorder";
  }
  return "?";
}

namespace {

std::int64_t min_in_frequency(const FSpec& f, const Adjacency& adj, NodeId a) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (NodeId p : adj.preds[a]) best = std::min(best, f.freq({p, a}));
  return adj.preds[a].empty() ? 0 : best;
}

// Query node whose image is the latest-created predecessor of `a`.
std::optional<NodeId> anchor_of(const Embedding& e, const Adjacency& adj, NodeId a) {
  std::optional<NodeId> out;
  NodeId best = -1;
  for (std::size_t q = 0; q < e.phi.size(); ++q) {
    const NodeId img = e.phi[q];
    if (img < 0) continue;
    if (std::find(adj.preds[a].begin(), adj.preds[a].end(), img) != adj.preds[a].end() && img > best) {
      best = img;
      out = static_cast<NodeId>(q);
    }
  }
  return out;
}

std::size_t non_end_count(const Graam& g) {
  return static_cast<std::size_t>(std::count_if(g.nodes.begin(), g.nodes.end(), [](const UsageNode& n) {
    return n.role != NodeRole::End;
  }));
}

void rank(std::vector<Recommendation>& recs, std::size_t k) {
  std::sort(recs.begin(), recs.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.action != b.action) return a.action == Action::Reorder;
    if (a.api != b.api) return a.api < b.api;
    if (a.secondary != b.secondary) return a.secondary < b.secondary;
    return a.anchor < b.anchor;
  });
  if (recs.size() > k) recs.resize(k);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].rank = static_cast<int>(i) + 1;
}

bool embeds_api_nodes(const FSpec& f, const Graam& g, std::int64_t* weight = nullptr) {
  MatchOptions opt;
  opt.include_ends = false;
  auto e = best_match(f.graph, &f.frequency, g, opt);
  if (weight != nullptr) *weight = e.weight;
  return e.size == non_end_count(g);
}

}  // namespace

ContextMatch match_context(const FSpec& fspec, const Graam& partial) {
  if (fspec.empty()) throw NoMatch("the specification is empty");
  MatchOptions opt;
  opt.include_ends = false;
  ContextMatch cm;
  cm.embedding = best_match(fspec.graph, &fspec.frequency, partial, opt);
  if (cm.embedding.size <= 1) throw NoMatch("no API of '" + partial.id + "' matches the specification");
  for (std::size_t q = 0; q < partial.nodes.size(); ++q) {
    if (cm.embedding.phi[q] < 0) cm.unmatched.push_back(static_cast<NodeId>(q));
  }
  const auto adj = make_adjacency(fspec.graph.nodes.size(), fspec.graph.edges);
  std::vector<bool> in_image(fspec.graph.nodes.size(), false);
  for (NodeId a : cm.embedding.image()) in_image[a] = true;
  // Continuations hang off the matched context. Nodes reachable only from
  // start begin an unrelated usage and are offered only when nothing else is.
  std::vector<Continuation> roots;
  const NodeId start = fspec.graph.start();
  for (const auto& n : fspec.graph.nodes) {
    if (in_image[n.id] || adj.preds[n.id].empty()) continue;
    const bool closed = std::all_of(adj.preds[n.id].begin(), adj.preds[n.id].end(),
                                    [&](NodeId p) { return in_image[p]; });
    if (!closed) continue;
    Continuation c{n.id, n.key(), min_in_frequency(fspec, adj, n.id)};
    if (adj.preds[n.id] == std::vector<NodeId>{start}) {
      roots.push_back(std::move(c));
    } else {
      cm.frontier.push_back(std::move(c));
    }
  }
  if (cm.frontier.empty()) cm.frontier = std::move(roots);
  return cm;
}

std::vector<Recommendation> next_api(const FSpec& fspec, const Graam& partial, std::size_t k) {
  if (k == 0) return {};
  const auto cm = match_context(fspec, partial);
  const auto adj = make_adjacency(fspec.graph.nodes.size(), fspec.graph.edges);
  std::map<std::string, Recommendation> by_api;
  std::map<std::string, std::int64_t> best_node_score;
  for (const auto& c : cm.frontier) {
    auto& r = by_api[c.api];
    r.action = Action::Add;
    r.api = c.api;
    r.score += c.score;
    auto& top = best_node_score[c.api];
    if (!r.anchor || c.score > top) {
      top = c.score;
      r.anchor = anchor_of(cm.embedding, adj, c.node);
    }
  }
  std::vector<Recommendation> out;
  for (auto& [api, r] : by_api) out.push_back(std::move(r));
  rank(out, k);
  return out;
}

std::vector<Recommendation> detect_missed(const FSpec& fspec, const Graam& g, std::size_t k) {
  if (fspec.empty()) throw NoMatch("the specification is empty");
  const auto full = best_match(fspec.graph, &fspec.frequency, g);
  if (full.size == g.nodes.size()) throw NothingMissing("'" + g.id + "' embeds in the specification");
  if (k == 0) return {};
  const auto adj = make_adjacency(fspec.graph.nodes.size(), fspec.graph.edges);
  struct Candidate {
    std::size_t matched;
    Recommendation rec;
  };
  std::vector<Candidate> cands;
  for (const auto& h : fspec.graph.nodes) {
    if (!h.is_api()) continue;
    MatchOptions opt;
    opt.include_ends = false;
    opt.hole = h.id;
    const auto e = best_match(fspec.graph, &fspec.frequency, g, opt);
    std::vector<bool> in_image(fspec.graph.nodes.size(), false);
    for (NodeId a : e.image()) in_image[a] = true;
    const bool preds_ok = std::all_of(adj.preds[h.id].begin(), adj.preds[h.id].end(),
                                      [&](NodeId p) { return in_image[p]; });
    if (!preds_ok) continue;
    // The descendants must line up too: some child already matched, or the
    // hole may legitimately end the usage (unless it would start a new one).
    const bool root = adj.preds[h.id] == std::vector<NodeId>{fspec.graph.start()};
    const bool succs_ok = std::any_of(adj.succs[h.id].begin(), adj.succs[h.id].end(), [&](NodeId c) {
      return in_image[c] || (!root && fspec.graph.nodes[c].role == NodeRole::End);
    });
    if (!succs_ok) continue;
    Recommendation r;
    r.action = Action::Add;
    r.api = h.key();
    r.score = min_in_frequency(fspec, adj, h.id);
    r.anchor = anchor_of(e, adj, h.id);
    cands.push_back({e.size, std::move(r)});
  }
  std::size_t best = 0;
  for (const auto& c : cands) best = std::max(best, c.matched);
  std::map<std::string, Recommendation> by_api;
  for (auto& c : cands) {
    if (c.matched != best) continue;
    auto it = by_api.find(c.rec.api);
    if (it == by_api.end() || c.rec.score > it->second.score) by_api[c.rec.api] = c.rec;
  }
  std::vector<Recommendation> out;
  for (auto& [api, r] : by_api) out.push_back(std::move(r));
  rank(out, k);
  return out;
}

namespace {

void add_fix(std::vector<Recommendation>& fixes, Recommendation r) {
  for (auto& f : fixes) {
    const bool same_pair = f.action == r.action &&
                           ((f.api == r.api && f.secondary == r.secondary) ||
                            (r.action == Action::Reorder && f.api == r.secondary && f.secondary == r.api));
    if (same_pair) {
      if (r.score > f.score) f = std::move(r);
      return;
    }
  }
  fixes.push_back(std::move(r));
}

Graam swapped(const Graam& g, NodeId x, NodeId y) {
  Graam out = g;
  std::swap(out.nodes[x].label, out.nodes[y].label);
  return out;
}

MisuseReport misuse_with(const FSpec& fspec, const Graam& g,
                         std::vector<Violation> violations, std::size_t k) {
  MisuseReport report;
  report.violations = std::move(violations);
  std::vector<Recommendation> fixes;
  for (const auto& v : report.violations) {
    Recommendation r;
    r.action = Action::Reorder;
    r.api = g.nodes[v.writer].key();
    r.secondary = g.nodes[v.reader].key();
    r.anchor = v.reader;
    embeds_api_nodes(fspec, swapped(g, v.reader, v.writer), &r.score);
    add_fix(fixes, std::move(r));
  }
  if (!fspec.empty() && !embeds_api_nodes(fspec, g)) {
    const auto target = non_end_count(g);
    bool one_hole = false;
    for (const auto& h : fspec.graph.nodes) {
      if (!h.is_api()) continue;
      MatchOptions opt;
      opt.include_ends = false;
      opt.hole = h.id;
      if (best_match(fspec.graph, &fspec.frequency, g, opt).size == target) {
        one_hole = true;
        break;
      }
    }
    if (!one_hole) {
      const auto api = g.api_nodes();
      for (std::size_t i = 0; i < api.size(); ++i) {
        for (std::size_t j = i + 1; j < api.size(); ++j) {
          const NodeId x = api[i];
          const NodeId y = api[j];
          if (g.nodes[x].label == g.nodes[y].label) continue;
          std::int64_t w = 0;
          if (!embeds_api_nodes(fspec, swapped(g, x, y), &w)) continue;
          report.order_mismatch = true;
          add_fix(fixes, {Action::Reorder, g.nodes[y].key(), g.nodes[x].key(), x, w, 0});
        }
      }
      std::map<std::string, ApiLabel> vocabulary;
      for (const auto& n : fspec.graph.nodes) {
        if (n.is_api()) vocabulary.emplace(n.key(), n.label);
      }
      for (NodeId x : api) {
        for (const auto& [key, label] : vocabulary) {
          if (label == g.nodes[x].label) continue;
          Graam relabeled = g;
          relabeled.nodes[x].label = label;
          std::int64_t w = 0;
          if (!embeds_api_nodes(fspec, relabeled, &w)) continue;
          add_fix(fixes, {Action::Replace, key, g.nodes[x].key(), x, w, 0});
        }
      }
    }
  }
  rank(fixes, k);
  report.fixes = std::move(fixes);
  return report;
}

}  // namespace

MisuseReport detect_misuse(const FSpec& fspec, const IfdModel& ifd, const Graam& g, std::size_t k) {
  return misuse_with(fspec, g, check_violations(g, ifd), k);
}

MisuseReport detect_misuse(const FSpec& fspec, const IfdModel& ifd, const Graam& g,
                           const PrimaryApiUsageGraph& primary, std::size_t k) {
  auto v = check_violations(g, ifd);
  for (auto& x : check_violations(primary, ifd)) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(std::move(x));
  }
  std::sort(v.begin(), v.end());
  return misuse_with(fspec, g, std::move(v), k);
}

}  // namespace specminer
