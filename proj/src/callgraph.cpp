#include "specminer/callgraph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "specminer/error.hpp"

namespace specminer {

std::string Context::key() const {
  return method + "@" + (site ? site->str() : std::string("root"));
}

std::optional<int> CallGraph::find(const std::string& method,
                                   const std::optional<StatementId>& site) const {
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    if (contexts[i].method == method && contexts[i].site == site) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::vector<int> CallGraph::reachable(int root) const {
  std::vector<int> order{root};
  std::set<int> seen{root};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& e : edges) {
      if (e.caller == order[i] && seen.insert(e.callee).second) order.push_back(e.callee);
    }
  }
  return order;
}

std::vector<const CallEdge*> CallGraph::edges_from(int context) const {
  std::vector<const CallEdge*> out;
  for (const auto& e : edges) {
    if (e.caller == context) out.push_back(&e);
  }
  return out;
}

namespace {

std::optional<std::string> implementation(const std::string& type, const std::string& method,
                                          const ProgramFacts& facts, const ClassHierarchy& ch) {
  for (const auto& t : ch.supertype_order(type)) {
    auto id = t + "." + method;
    if (facts.methods.contains(id)) return id;
  }
  return std::nullopt;
}

}  // namespace

std::vector<std::string> resolve_callees(const Instr& call, const ProgramFacts& facts,
                                         const ClassHierarchy& ch) {
  std::set<std::string> out;
  if (call.kind != InstrKind::Call) return {};
  if (call.is_static) {
    if (auto impl = implementation(call.type, call.member, facts, ch)) out.insert(*impl);
  } else {
    for (const auto& sub : ch.subtypes(call.type)) {
      const auto* d = ch.decl(sub);
      if (d == nullptr || d->is_interface) continue;
      if (auto impl = implementation(sub, call.member, facts, ch)) out.insert(*impl);
    }
  }
  return {out.begin(), out.end()};
}

CallGraph build_call_graph(const ProgramFacts& facts, const ClassHierarchy& ch) {
  if (facts.entrypoints.empty()) throw NoEntrypoint("program '" + facts.name + "' has no entrypoints");
  CallGraph cg;
  std::map<std::string, int> index;
  std::deque<int> work;
  auto intern = [&](const std::string& method, const std::optional<StatementId>& site) {
    Context c{method, site};
    auto [it, fresh] = index.emplace(c.key(), static_cast<int>(cg.contexts.size()));
    if (fresh) {
      cg.contexts.push_back(std::move(c));
      work.push_back(it->second);
    }
    return it->second;
  };
  for (const auto& entry : facts.entrypoints) {
    if (!facts.methods.contains(entry)) throw NoEntrypoint("entrypoint '" + entry + "' not found");
    cg.roots[entry] = intern(entry, std::nullopt);
  }
  std::set<std::tuple<int, int, StatementId>> seen_edges;
  while (!work.empty()) {
    const int ctx = work.front();
    work.pop_front();
    const auto& method = facts.methods.at(cg.contexts[ctx].method);
    for (const auto& in : method.instrs) {
      if (in.kind != InstrKind::Call) continue;
      StatementId site{method.file, method.id, in.index};
      for (const auto& callee : resolve_callees(in, facts, ch)) {
        // 1-CFA: the callee context is keyed by the site alone, so recursion
        // through the same site folds onto one context.
        const int target = intern(callee, site);
        if (seen_edges.emplace(ctx, target, site).second) {
          cg.edges.push_back({ctx, target, site});
        }
      }
    }
  }
  return cg;
}

}  // namespace specminer
