#include "specminer/slicer.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>

#include "specminer/error.hpp"

namespace specminer {

ProgramAnalysis analyze(ProgramFacts facts, const FrameworkModel& framework) {
  ProgramAnalysis a{std::move(facts), {}, {}, {}};
  a.ch = hierarchy_for(a.facts, framework);
  a.cg = build_call_graph(a.facts, a.ch);
  a.sdg = build_sdg(a.cg, a.facts);
  return a;
}

std::size_t SdgSlice::size() const {
  return static_cast<std::size_t>(std::count(kept.begin(), kept.end(), true));
}

namespace {

const MethodFacts& method_of(const ProgramAnalysis& a, int context) {
  return a.facts.methods.at(a.cg.contexts[context].method);
}

const Instr& instr_of(const ProgramFacts& facts, const CallGraph& cg, const SdgNode& n) {
  return facts.methods.at(cg.contexts[n.context].method).instrs.at(n.instr);
}

// Forward flow over one entry point's contexts, with call nodes entering the
// callee and callee exits returning to the call's successors. One synthetic
// exit node per context.
struct FlowGraph {
  int sdg_nodes = 0;
  std::vector<std::vector<int>> succs;

  int exit_node(int context) const { return sdg_nodes + context; }
};

FlowGraph build_flow(const ProgramAnalysis& a, const std::vector<bool>& in_scope) {
  FlowGraph fg;
  fg.sdg_nodes = static_cast<int>(a.sdg.nodes.size());
  fg.succs.resize(a.sdg.nodes.size() + a.cg.contexts.size());
  for (std::size_t c = 0; c < a.cg.contexts.size(); ++c) {
    if (!in_scope[c]) continue;
    const int ctx = static_cast<int>(c);
    const auto& m = method_of(a, ctx);
    for (const auto& in : m.instrs) {
      const int u = a.sdg.node(ctx, in.index);
      for (int s : in.succs) fg.succs[u].push_back(a.sdg.node(ctx, s));
      if (in.succs.empty()) fg.succs[u].push_back(fg.exit_node(ctx));
    }
  }
  for (const auto& e : a.cg.edges) {
    if (!in_scope[e.caller] || !in_scope[e.callee]) continue;
    const auto& caller = method_of(a, e.caller);
    const auto& callee = method_of(a, e.callee);
    const auto& site = caller.instrs.at(e.site.index);
    const int call = a.sdg.node(e.caller, site.index);
    const int callee_exit = fg.exit_node(e.callee);
    fg.succs[call].push_back(callee.instrs.empty() ? callee_exit : a.sdg.node(e.callee, 0));
    for (int s : site.succs) fg.succs[callee_exit].push_back(a.sdg.node(e.caller, s));
    if (site.succs.empty()) fg.succs[callee_exit].push_back(fg.exit_node(e.caller));
  }
  for (auto& s : fg.succs) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return fg;
}

// Drops DFS back edges so the flow graph becomes a DAG.
void drop_back_edges(FlowGraph& fg) {
  const auto n = fg.succs.size();
  std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
  std::vector<std::vector<int>> kept(n);
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack{{static_cast<int>(root), 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [u, i] = stack.back();
      if (i == fg.succs[u].size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      const int v = fg.succs[u][i++];
      if (state[v] == 1) continue;
      kept[u].push_back(v);
      if (state[v] == 0) {
        state[v] = 1;
        stack.emplace_back(v, 0);
      }
    }
  }
  fg.succs = std::move(kept);
}

}  // namespace

SdgSlice slice(const Sdg& sdg, const ProgramFacts& facts, const CallGraph& cg,
               const ClassHierarchy& ch) {
  SdgSlice out;
  const auto n = sdg.nodes.size();
  out.kept.assign(n, false);
  out.api.resize(n);
  std::deque<int> work;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = sdg.nodes[i];
    const auto& m = facts.methods.at(cg.contexts[node.context].method);
    out.api[i] = to_api_statement(m.instrs.at(node.instr), m, ch);
    if (out.api[i]) work.push_back(static_cast<int>(i));
  }
  auto sweep = [&](const std::vector<std::vector<const SdgEdge*>>& adj, bool forward) {
    std::vector<bool> seen(n, false);
    std::deque<int> q(work.begin(), work.end());
    for (int s : q) seen[s] = true;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      out.kept[u] = true;
      for (const auto* e : adj[u]) {
        const int v = forward ? e->to : e->from;
        if (!seen[v]) {
          seen[v] = true;
          q.push_back(v);
        }
      }
    }
  };
  sweep(sdg.out_edges(), true);
  sweep(sdg.in_edges(), false);
  return out;
}

SdgSlice slice(const ProgramAnalysis& a) { return slice(a.sdg, a.facts, a.cg, a.ch); }

PrimaryApiUsageGraph build_primary_graph(const ProgramAnalysis& a, const SdgSlice& sliced,
                                         const std::string& entrypoint) {
  auto root = a.cg.roots.find(entrypoint);
  if (root == a.cg.roots.end()) throw NoEntrypoint("entrypoint '" + entrypoint + "' not found");
  std::vector<bool> in_scope(a.cg.contexts.size(), false);
  for (int c : a.cg.reachable(root->second)) in_scope[c] = true;

  // Execution order over the entry point's contexts, back edges removed.
  FlowGraph fg = build_flow(a, in_scope);
  drop_back_edges(fg);
  const auto fn = fg.succs.size();
  std::vector<int> indeg(fn, 0);
  for (const auto& s : fg.succs) {
    for (int v : s) ++indeg[v];
  }
  std::vector<int> topo;
  for (std::size_t u = 0; u < fn; ++u) {
    if (indeg[u] == 0) topo.push_back(static_cast<int>(u));
  }
  for (std::size_t i = 0; i < topo.size(); ++i) {
    for (int v : fg.succs[topo[i]]) {
      if (--indeg[v] == 0) topo.push_back(v);
    }
  }
  const auto n = a.sdg.nodes.size();
  std::vector<int> usage_id(n, -1);
  std::vector<int> api_sdg;  // usage id - 1 -> sdg node
  // API nodes are numbered in execution order.
  for (int u : topo) {
    if (u >= fg.sdg_nodes) continue;
    if (in_scope[a.sdg.nodes[u].context] && sliced.kept[u] && sliced.api[u]) {
      api_sdg.push_back(u);
      usage_id[u] = static_cast<int>(api_sdg.size());
    }
  }
  if (api_sdg.empty()) {
    throw EmptyUsage("entrypoint '" + entrypoint + "' of '" + a.facts.name +
                     "' has no framework-related statements");
  }
  const int k = static_cast<int>(api_sdg.size());

  PrimaryApiUsageGraph g;
  g.program = a.facts.name;
  g.entrypoint = entrypoint;
  UsageNode start;
  start.id = 0;
  start.role = NodeRole::Start;
  g.nodes.push_back(start);
  for (int i = 0; i < k; ++i) {
    const auto& sn = a.sdg.nodes[api_sdg[i]];
    UsageNode u;
    u.id = i + 1;
    u.statement = sliced.api[api_sdg[i]];
    u.label = u.statement->label();
    u.context = a.cg.contexts[sn.context].key();
    g.nodes.push_back(std::move(u));
  }

  const auto out = a.sdg.out_edges();
  const auto in = a.sdg.in_edges();

  // Data edges, contracted through non-framework nodes.
  for (int i = 0; i < k; ++i) {
    std::vector<bool> seen(n, false);
    std::deque<int> q{api_sdg[i]};
    seen[api_sdg[i]] = true;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (const auto* e : out[u]) {
        if (e->kind != DepKind::Data || seen[e->to]) continue;
        if (!in_scope[a.sdg.nodes[e->to].context]) continue;
        seen[e->to] = true;
        if (usage_id[e->to] >= 0) {
          if (e->to != api_sdg[i]) g.data_edges.insert({i + 1, usage_id[e->to]});
        } else {
          q.push_back(e->to);
        }
      }
    }
  }

  // Receivers: follow value-preserving data flow back from the receiver use.
  for (int i = 0; i < k; ++i) {
    const auto& sn = a.sdg.nodes[api_sdg[i]];
    const auto& instr = instr_of(a.facts, a.cg, sn);
    if (instr.receiver.empty()) continue;
    std::set<NodeId> recv;
    std::vector<bool> seen(n, false);
    std::deque<int> q;
    for (const auto* e : in[api_sdg[i]]) {
      if (e->kind == DepKind::Data && e->via == DataVia::Local && e->var == instr.receiver) {
        q.push_back(e->from);
        seen[e->from] = true;
      }
    }
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      if (!in_scope[a.sdg.nodes[u].context]) continue;
      if (usage_id[u] >= 0) {
        recv.insert(usage_id[u]);
        continue;
      }
      const auto& ui = instr_of(a.facts, a.cg, a.sdg.nodes[u]);
      std::optional<DataVia> follow;
      switch (ui.kind) {
        case InstrKind::Copy:
        case InstrKind::Return:
          follow = DataVia::Local;
          break;
        case InstrKind::Param:
          follow = DataVia::ParamIn;
          break;
        case InstrKind::Call:
          follow = DataVia::ReturnOut;
          break;
        default:
          break;
      }
      if (!follow) continue;
      for (const auto* e : in[u]) {
        if (e->kind == DepKind::Data && e->via == *follow && !seen[e->from]) {
          seen[e->from] = true;
          q.push_back(e->from);
        }
      }
    }
    g.nodes[i + 1].receivers.assign(recv.begin(), recv.end());
  }

  // Sequence edges: Hasse reduction of execution-order reachability.
  const std::size_t words = (static_cast<std::size_t>(k) + 63) / 64;
  std::vector<std::vector<std::uint64_t>> reach(fn, std::vector<std::uint64_t>(words, 0));
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int u = *it;
    for (int v : fg.succs[u]) {
      for (std::size_t w = 0; w < words; ++w) reach[u][w] |= reach[v][w];
      if (v < fg.sdg_nodes && usage_id[v] >= 0) {
        const int b = usage_id[v] - 1;
        reach[u][b / 64] |= std::uint64_t{1} << (b % 64);
      }
    }
  }
  auto before = [&](int x, int y) {  // api indices 0..k-1
    return ((reach[api_sdg[x]][y / 64] >> (y % 64)) & 1U) != 0;
  };
  std::vector<bool> has_pred(k, false);
  std::vector<bool> has_succ(k, false);
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < k; ++y) {
      if (x == y || !before(x, y)) continue;
      bool cover = true;
      for (int z = 0; z < k && cover; ++z) {
        if (z != x && z != y && before(x, z) && before(z, y)) cover = false;
      }
      if (cover) {
        g.sequence_edges.insert({x + 1, y + 1});
        has_pred[y] = true;
        has_succ[x] = true;
      }
    }
  }
  for (int x = 0; x < k; ++x) {
    if (!has_pred[x]) g.sequence_edges.insert({0, x + 1});
  }
  for (int x = 0; x < k; ++x) {
    if (has_succ[x]) continue;
    UsageNode end;
    end.id = static_cast<NodeId>(g.nodes.size());
    end.role = NodeRole::End;
    g.nodes.push_back(end);
    g.sequence_edges.insert({x + 1, end.id});
  }
  g.validate();
  return g;
}

std::vector<PrimaryApiUsageGraph> extract_usages(const ProgramAnalysis& a,
                                                 std::vector<std::string>* skipped) {
  const SdgSlice s = slice(a);
  std::vector<PrimaryApiUsageGraph> out;
  for (const auto& entry : a.facts.entrypoints) {
    try {
      out.push_back(build_primary_graph(a, s, entry));
    } catch (const EmptyUsage&) {
      if (skipped != nullptr) skipped->push_back(entry);
    }
  }
  return out;
}

}  // namespace specminer
