#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>

#include "specminer/facts.hpp"
#include "specminer/graam.hpp"
#include "specminer/graph_algo.hpp"
#include "specminer/loader.hpp"
#include "specminer/minilang.hpp"

namespace specminer::testing {

std::filesystem::path source_dir() { return SPECMINER_SOURCE_DIR; }
std::filesystem::path jaas_dir() { return source_dir() / "fixtures" / "jaas-analog"; }
std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

const Jaas& jaas() {
  static const Jaas data = [] {
    Jaas j;
    const auto dir = jaas_dir();
    j.framework = load_framework(dir / "framework");
    j.ifd = mine_ifd(j.framework);
    for (const std::string p : {"listing1", "listing2", "listing2-swapped"}) {
      const auto facts = load_program(p, {dir / "programs" / p}, {dir / "lib"}, j.framework);
      auto usages = extract_usages(analyze(facts, j.framework));
      j.primary[p] = usages.at(0);
      j.graams[p] = build_graam(usages.at(0), j.ifd);
    }
    return j;
  }();
  return data;
}

FrameworkModel framework_from_source(const std::string& source, const std::string& name) {
  std::vector<minilang::CompilationUnit> units;
  units.push_back(minilang::parse(source, name + ".mini"));
  return build_framework_model(name, units);
}

ProgramAnalysis analyze_source(const std::string& source, const FrameworkModel& framework,
                               const std::string& name, const std::vector<std::string>& entrypoints) {
  std::vector<minilang::CompilationUnit> units;
  units.push_back(minilang::parse(source, name + ".mini"));
  return analyze(lower(units, framework, name, entrypoints), framework);
}

namespace {

std::string arrow(const std::vector<UsageNode>& nodes, const Edge& e) {
  return nodes[e.first].key() + " -> " + nodes[e.second].key();
}

std::vector<std::string> node_lines(const std::vector<UsageNode>& nodes) {
  std::vector<std::string> out;
  for (const auto& n : nodes) out.push_back("node " + n.key());
  return out;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::vector<std::string> render(const PrimaryApiUsageGraph& g) {
  auto out = node_lines(g.nodes);
  for (const auto& e : g.sequence_edges) out.push_back("seq " + arrow(g.nodes, e));
  for (const auto& e : g.data_edges) out.push_back("data " + arrow(g.nodes, e));
  return sorted(out);
}

std::vector<std::string> render(const Graam& g) {
  auto out = node_lines(g.nodes);
  for (const auto& e : g.edges) out.push_back("edge " + arrow(g.nodes, e));
  return sorted(out);
}

std::vector<std::string> render(const FSpec& f) {
  auto out = node_lines(f.graph.nodes);
  for (const auto& e : f.graph.edges) {
    out.push_back("edge " + arrow(f.graph.nodes, e) + " [" + std::to_string(f.freq(e)) + "]");
  }
  return sorted(out);
}

std::vector<std::string> read_golden(const std::string& name) {
  std::ifstream in(golden_dir() / name);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return sorted(out);
}

ApiLabel op(const std::string& member, const std::string& target) {
  return {ApiKind::MethodInvoke, target, member};
}

Graam make_graam(const std::string& id, const std::vector<ApiLabel>& api, int ends, const std::set<Edge>& edges) {
  Graam g;
  g.id = id;
  g.program = id;
  g.entrypoint = "main";
  g.nodes.push_back({0, NodeRole::Start, {}, {}, std::nullopt, {}});
  for (const auto& l : api) {
    g.nodes.push_back({static_cast<NodeId>(g.nodes.size()), NodeRole::Api, l, {}, std::nullopt, {}});
  }
  for (int i = 0; i < ends; ++i) {
    g.nodes.push_back({static_cast<NodeId>(g.nodes.size()), NodeRole::End, {}, {}, std::nullopt, {}});
  }
  g.edges = edges;
  return g;
}

Graam chain(const std::string& id, const std::vector<std::string>& members, const std::string& target) {
  std::vector<ApiLabel> api;
  std::set<Edge> edges;
  for (std::size_t i = 0; i < members.size(); ++i) {
    api.push_back(op(members[i], target));
    edges.insert({static_cast<NodeId>(i), static_cast<NodeId>(i + 1)});
  }
  const auto n = static_cast<NodeId>(members.size());
  edges.insert({n, n + 1});
  return make_graam(id, api, 1, edges);
}

Graam random_graam(std::mt19937_64& rng, int api, int alphabet, const std::string& id) {
  std::vector<ApiLabel> labels;
  for (int i = 0; i < api; ++i) {
    labels.push_back(op(std::string(1, static_cast<char>('a' + rng() % alphabet))));
  }
  std::set<Edge> edges;
  // API node i (1-based) draws predecessors among start and earlier nodes.
  for (int i = 1; i <= api; ++i) {
    bool any = false;
    for (int p = 1; p < i; ++p) {
      if (rng() % 3 == 0) {
        edges.insert({p, i});
        any = true;
      }
    }
    if (!any) edges.insert({0, i});
  }
  std::vector<bool> has_succ(api + 1, false);
  for (const auto& [u, v] : edges) has_succ[u] = true;
  int ends = 0;
  std::vector<int> sinks;
  for (int i = 1; i <= api; ++i) {
    if (!has_succ[i]) sinks.push_back(i);
  }
  // Sinks share one end node or get their own, both shapes occur in practice.
  const bool shared = rng() % 2 == 0;
  for (int s : sinks) {
    if (!shared || ends == 0) ++ends;
    edges.insert({s, api + ends});
  }
  if (api == 0) {
    ends = 1;
    edges.insert({0, 1});
  }
  auto g = make_graam(id, labels, ends, edges);
  g.validate();
  return g;
}

Graam permuted(const Graam& g, std::mt19937_64& rng) {
  std::vector<NodeId> perm(g.nodes.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin() + 1, perm.end(), rng);
  Graam out = g;
  for (const auto& n : g.nodes) {
    auto copy = n;
    copy.id = perm[n.id];
    out.nodes[perm[n.id]] = copy;
  }
  out.edges.clear();
  for (const auto& [u, v] : g.edges) out.edges.insert({perm[u], perm[v]});
  return out;
}

bool brute_isomorphic(const Graam& a, const Graam& b, const std::map<Edge, std::int64_t>* fa,
                      const std::map<Edge, std::int64_t>* fb) {
  if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;
  std::vector<NodeId> perm(a.nodes.size());
  std::iota(perm.begin(), perm.end(), 0);
  auto freq = [](const std::map<Edge, std::int64_t>* f, const Edge& e) -> std::int64_t {
    if (f == nullptr) return 1;
    auto it = f->find(e);
    return it == f->end() ? 0 : it->second;
  };
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i) ok = a.nodes[i].key() == b.nodes[perm[i]].key();
    for (auto it = a.edges.begin(); it != a.edges.end() && ok; ++it) {
      const Edge mapped{perm[it->first], perm[it->second]};
      ok = b.edges.contains(mapped) && freq(fa, *it) == freq(fb, mapped);
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

std::set<std::vector<std::string>> path_keys(const Graam& g) {
  const auto adj = make_adjacency(g.nodes.size(), g.edges);
  std::set<std::vector<std::string>> out;
  std::vector<std::string> cur;
  std::function<void(NodeId)> walk = [&](NodeId u) {
    cur.push_back(g.nodes[u].key());
    if (g.nodes[u].role == NodeRole::End) out.insert(cur);
    for (NodeId v : adj.succs[u]) walk(v);
    cur.pop_back();
  };
  walk(g.start());
  return out;
}

std::set<std::tuple<NodeId, NodeId, std::string>> brute_violations(const std::vector<UsageNode>& nodes,
                                                                   const std::set<Edge>& order,
                                                                   const IfdModel& ifd) {
  const auto adj = make_adjacency(nodes.size(), order);
  auto before = [&](NodeId from, NodeId to) {
    std::vector<NodeId> stack(adj.succs[from].begin(), adj.succs[from].end());
    std::set<NodeId> seen;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      if (!seen.insert(u).second) continue;
      for (NodeId v : adj.succs[u]) stack.push_back(v);
    }
    return false;
  };
  auto shares = [&](const UsageNode& x, const UsageNode& y) {
    if (x.receivers.empty() && y.receivers.empty()) return x.label.target == y.label.target;
    std::set<NodeId> xs(x.receivers.begin(), x.receivers.end());
    return std::any_of(y.receivers.begin(), y.receivers.end(), [&](NodeId r) { return xs.contains(r); });
  };
  auto method = [&](const UsageNode& n) { return n.is_api() ? ifd.method_for(n.label) : std::nullopt; };
  std::set<std::tuple<NodeId, NodeId, std::string>> out;
  for (const auto& e : ifd.edges) {
    for (const auto& r : nodes) {
      if (method(r) != e.reader) continue;
      for (const auto& w : nodes) {
        if (w.id == r.id || method(w) != e.writer || !shares(r, w) || !before(r.id, w.id)) continue;
        bool covered = false;
        for (const auto& x : nodes) {
          if (x.id == r.id || x.id == w.id) continue;
          const auto mx = method(x);
          if (!mx || !ifd.writes.contains(*mx) || !ifd.writes.at(*mx).contains(e.field) || !shares(x, r)) continue;
          if (before(x.id, r.id) || (before(r.id, x.id) && before(x.id, w.id))) covered = true;
        }
        if (!covered) out.insert({r.id, w.id, e.field});
      }
    }
  }
  return out;
}

}  // namespace specminer::testing
