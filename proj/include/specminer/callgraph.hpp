#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specminer/class_hierarchy.hpp"
#include "specminer/facts.hpp"

namespace specminer {

/// A 1-CFA context: a method together with the call site that invoked it.
/// Entry points get a root context with no site.
struct Context {
  std::string method;
  std::optional<StatementId> site;

  std::string key() const;
};

struct CallEdge {
  int caller = 0;
  int callee = 0;
  StatementId site;
};

struct CallGraph {
  std::vector<Context> contexts;
  std::vector<CallEdge> edges;
  std::map<std::string, int> roots;  // entrypoint -> root context

  std::optional<int> find(const std::string& method,
                          const std::optional<StatementId>& site) const;
  /// Contexts reachable from a root, root first, discovery order.
  std::vector<int> reachable(int root) const;
  std::vector<const CallEdge*> edges_from(int context) const;
};

/// Candidate application callees of a call statement. Static calls bind
/// directly; virtual calls use class-hierarchy analysis over the receiver's
/// static type (every concrete subtype's implementation is a candidate).
std::vector<std::string> resolve_callees(const Instr& call, const ProgramFacts& facts,
                                         const ClassHierarchy& ch);

/// Throws NoEntrypoint when facts list no entry points.
CallGraph build_call_graph(const ProgramFacts& facts, const ClassHierarchy& ch);

}  // namespace specminer
