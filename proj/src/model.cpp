#include "specminer/model.hpp"

#include <algorithm>

#include "specminer/error.hpp"
#include "specminer/graph_algo.hpp"

namespace specminer {

std::string to_string(ApiKind kind) {
  switch (kind) {
    case ApiKind::ObjectInit:
      return "object_init";
    case ApiKind::MethodInvoke:
      return "method_invoke";
    case ApiKind::FieldRead:
      return "field_read";
    case ApiKind::FieldWrite:
      return "field_write";
  }
  return "?";
}

std::string to_string(Relation relation) {
  switch (relation) {
    case Relation::None:
      return "none";
    case Relation::Direct:
      return "direct";
    case Relation::IndirectViaInheritance:
      return "indirect_via_inheritance";
  }
  return "?";
}

std::string to_string(NodeRole role) {
  switch (role) {
    case NodeRole::Start:
      return "start";
    case NodeRole::Api:
      return "api";
    case NodeRole::End:
      return "end";
  }
  return "?";
}

ApiKind api_kind_from_string(const std::string& s) {
  if (s == "object_init") return ApiKind::ObjectInit;
  if (s == "method_invoke") return ApiKind::MethodInvoke;
  if (s == "field_read") return ApiKind::FieldRead;
  if (s == "field_write") return ApiKind::FieldWrite;
  throw InputError("unknown api kind '" + s + "'");
}

Relation relation_from_string(const std::string& s) {
  if (s == "none") return Relation::None;
  if (s == "direct") return Relation::Direct;
  if (s == "indirect_via_inheritance") return Relation::IndirectViaInheritance;
  throw InputError("unknown relation '" + s + "'");
}

NodeRole node_role_from_string(const std::string& s) {
  if (s == "start") return NodeRole::Start;
  if (s == "api") return NodeRole::Api;
  if (s == "end") return NodeRole::End;
  throw InputError("unknown node role '" + s + "'");
}

std::string ApiLabel::str() const {
  switch (kind) {
    case ApiKind::ObjectInit:
      return "init " + target;
    case ApiKind::MethodInvoke:
      return target + "." + member + "()";
    case ApiKind::FieldRead:
      return target + "." + member + "[read]";
    case ApiKind::FieldWrite:
      return target + "." + member + "[write]";
  }
  return target;
}

std::string StatementId::str() const {
  return file + ":" + method + ":" + std::to_string(index);
}

const MethodSig* TypeDecl::find_method(const std::string& method) const {
  for (const auto& m : methods) {
    if (m.name == method) return &m;
  }
  return nullptr;
}

const FieldDecl* TypeDecl::find_field(const std::string& field) const {
  for (const auto& f : fields) {
    if (f.name == field) return &f;
  }
  return nullptr;
}

void FrameworkModel::validate() const {
  for (const auto& [method, accesses] : method_bodies) {
    for (const auto& access : accesses) {
      auto it = types.find(access.type);
      if (it == types.end() || it->second.find_field(access.field) == nullptr) {
        throw NameResolutionError("framework method " + method +
                                  " accesses undeclared field " + access.type +
                                  "." + access.field);
      }
    }
  }
}

std::string UsageNode::key() const {
  switch (role) {
    case NodeRole::Start:
      return "<start>";
    case NodeRole::End:
      return "<end>";
    case NodeRole::Api:
      return label.str();
  }
  return {};
}

Adjacency make_adjacency(std::size_t node_count, const std::set<Edge>& edges) {
  Adjacency adj;
  adj.preds.resize(node_count);
  adj.succs.resize(node_count);
  for (const auto& [from, to] : edges) {
    adj.succs[from].push_back(to);
    adj.preds[to].push_back(from);
  }
  return adj;
}

namespace {

void fail(const std::string& what, const std::string& graph) {
  throw InvalidGraph(graph + ": " + what);
}

NodeId find_start(const std::vector<UsageNode>& nodes, const std::string& name) {
  NodeId start = -1;
  for (const auto& n : nodes) {
    if (n.role == NodeRole::Start) {
      if (start != -1) fail("more than one start node", name);
      start = n.id;
    }
  }
  if (start == -1) fail("no start node", name);
  return start;
}

std::vector<NodeId> collect_api(const std::vector<UsageNode>& nodes) {
  std::vector<NodeId> out;
  for (const auto& n : nodes) {
    if (n.is_api()) out.push_back(n.id);
  }
  return out;
}

// Shared checks for the start/end partition over a combined edge set.
void check_partition(const std::vector<UsageNode>& nodes,
                     const std::set<Edge>& edges, const std::string& name,
                     bool require_end) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != static_cast<NodeId>(i)) fail("node ids not dense", name);
  }
  const NodeId start = find_start(nodes, name);
  const auto n = nodes.size();
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n ||
        static_cast<std::size_t>(b) >= n) {
      fail("edge references unknown node", name);
    }
    if (b == start) fail("start node has an incoming edge", name);
    if (nodes[a].role == NodeRole::End) fail("end node has an outgoing edge", name);
    if (a == b) fail("self loop", name);
  }
  std::size_t ends = 0;
  for (const auto& node : nodes) ends += node.role == NodeRole::End;
  if (require_end && ends == 0) fail("no end node", name);

  const auto adj = make_adjacency(n, edges);
  const auto forward = reachable_from(adj.succs, {start});
  std::vector<NodeId> end_ids;
  for (const auto& node : nodes) {
    if (node.role == NodeRole::End) end_ids.push_back(node.id);
  }
  const auto backward = reachable_from(adj.preds, end_ids);
  for (const auto& node : nodes) {
    if (!forward[node.id]) fail("node " + std::to_string(node.id) + " unreachable from start", name);
    if (require_end && !backward[node.id]) {
      fail("node " + std::to_string(node.id) + " reaches no end node", name);
    }
  }
}

}  // namespace

NodeId PrimaryApiUsageGraph::start() const { return find_start(nodes, program); }

std::vector<NodeId> PrimaryApiUsageGraph::api_nodes() const { return collect_api(nodes); }

void PrimaryApiUsageGraph::validate() const {
  const std::string name = "primary graph " + program + "/" + entrypoint;
  std::set<Edge> all = sequence_edges;
  all.insert(data_edges.begin(), data_edges.end());
  check_partition(nodes, all, name, true);
  for (const auto& [a, b] : data_edges) {
    if (!nodes[a].is_api() || !nodes[b].is_api()) {
      fail("data edge touches a start/end node", name);
    }
  }
  for (const auto& [a, b] : sequence_edges) {
    if (nodes[a].role == NodeRole::Start && nodes[b].role == NodeRole::End) {
      fail("sequence edge from start directly to end", name);
    }
  }
  if (!is_acyclic(nodes.size(), sequence_edges)) fail("sequence edges form a cycle", name);
}

NodeId Graam::start() const { return find_start(nodes, id); }

std::vector<NodeId> Graam::api_nodes() const { return collect_api(nodes); }

void Graam::validate() const {
  const std::string name = "GRAAM " + id;
  // A GRAAM with no API node is the empty model: a lone start node.
  const bool trivial = api_nodes().empty();
  check_partition(nodes, edges, name, !trivial);
  if (!is_acyclic(nodes.size(), edges)) fail("GRAAM is cyclic", name);
}

std::int64_t FSpec::freq(const Edge& e) const {
  auto it = frequency.find(e);
  return it == frequency.end() ? 0 : it->second;
}

void FSpec::validate() const {
  if (empty()) return;
  graph.validate();
  for (const auto& e : graph.edges) {
    if (freq(e) < 1) {
      throw InvalidGraph("FSpec edge " + std::to_string(e.first) + "->" +
                         std::to_string(e.second) + " has frequency < 1");
    }
  }
  if (frequency.size() != graph.edges.size()) {
    throw InvalidGraph("FSpec frequency table does not match its edge set");
  }
}

Graam make_empty_graam(std::string id) {
  Graam g;
  g.id = std::move(id);
  UsageNode start;
  start.id = 0;
  start.role = NodeRole::Start;
  g.nodes.push_back(start);
  return g;
}

}  // namespace specminer
