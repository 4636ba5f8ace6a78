#pragma once

// Core vocabulary shared by every phase: framework declarations, API
// statements and the three graph shapes (primary usage graph, GRAAM, FSpec).

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace specminer {

enum class ApiKind { ObjectInit, MethodInvoke, FieldRead, FieldWrite };
enum class Relation { None, Direct, IndirectViaInheritance };
enum class NodeRole { Start, Api, End };
enum class AccessKind { Read, Write };

std::string to_string(ApiKind kind);
std::string to_string(Relation relation);
std::string to_string(NodeRole role);
ApiKind api_kind_from_string(const std::string& s);
Relation relation_from_string(const std::string& s);
NodeRole node_role_from_string(const std::string& s);

/// What two usage nodes must share to be paired by a bijection: the
/// instruction type, the framework target type and the member touched.
struct ApiLabel {
  ApiKind kind = ApiKind::MethodInvoke;
  std::string target;
  std::string member;

  auto operator<=>(const ApiLabel&) const = default;

  /// "init LoginContext", "LoginContext.login()", "Subject.principals[read]".
  std::string str() const;
};

/// (file, method, intra-method index). Stable under reserialization.
struct StatementId {
  std::string file;
  std::string method;
  int index = 0;

  auto operator<=>(const StatementId&) const = default;
  std::string str() const;
};

struct ApiStatement {
  StatementId location;
  ApiKind kind = ApiKind::MethodInvoke;
  // Framework data type the statement is attributed to (target(v)).
  std::string target_type;
  // Static type as written in the program; differs from target_type for
  // statements related to the framework through inheritance.
  std::string declared_type;
  std::string member;
  Relation relation = Relation::None;

  std::string id() const { return location.str(); }
  ApiLabel label() const { return {kind, target_type, member}; }
};

struct FieldDecl {
  std::string name;
  std::string type;
  bool is_static = false;
};

struct MethodSig {
  std::string name;
  std::string return_type;
  std::vector<std::string> param_types;
  std::vector<std::string> param_names;
  bool is_static = false;
  bool has_body = false;
};

struct TypeDecl {
  std::string name;
  bool is_interface = false;
  // extends first (if any), then implements, in declaration order.
  std::vector<std::string> supertypes;
  std::vector<FieldDecl> fields;
  std::vector<MethodSig> methods;

  const MethodSig* find_method(const std::string& method) const;
  const FieldDecl* find_field(const std::string& field) const;
};

struct FieldAccess {
  std::string type;  // declaring type of the field
  std::string field;
  AccessKind kind = AccessKind::Read;

  auto operator<=>(const FieldAccess&) const = default;
};

struct FrameworkModel {
  std::string name;
  std::map<std::string, TypeDecl> types;
  // Keyed by "Type.method".
  std::map<std::string, std::vector<FieldAccess>> method_bodies;
  // Same-class callees of each framework method ("Type.method" ids).
  std::map<std::string, std::vector<std::string>> method_calls;

  bool declares(const std::string& type) const { return types.contains(type); }
  /// Throws NameResolutionError if a body names an undeclared field.
  void validate() const;
};

using NodeId = int;
using Edge = std::pair<NodeId, NodeId>;

struct UsageNode {
  NodeId id = 0;
  NodeRole role = NodeRole::Api;
  ApiLabel label;
  // API nodes whose value is used as this node's receiver object.
  std::vector<NodeId> receivers;
  std::optional<ApiStatement> statement;
  std::string context;

  bool is_api() const { return role == NodeRole::Api; }
  /// Matching key: "<start>", "<end>" or label.str().
  std::string key() const;
};

struct Adjacency {
  std::vector<std::vector<NodeId>> preds;
  std::vector<std::vector<NodeId>> succs;
};

Adjacency make_adjacency(std::size_t node_count, const std::set<Edge>& edges);

struct PrimaryApiUsageGraph {
  std::string program;
  std::string entrypoint;
  std::vector<UsageNode> nodes;
  std::set<Edge> sequence_edges;
  std::set<Edge> data_edges;

  NodeId start() const;
  std::vector<NodeId> api_nodes() const;
  /// Throws InvalidGraph on any structural invariant violation.
  void validate() const;
};

struct Graam {
  std::string id;
  std::string program;
  std::string entrypoint;
  std::vector<UsageNode> nodes;
  std::set<Edge> edges;

  NodeId start() const;
  std::vector<NodeId> api_nodes() const;
  std::size_t api_count() const { return api_nodes().size(); }
  void validate() const;
};

struct FSpec {
  Graam graph;
  std::map<Edge, std::int64_t> frequency;

  bool empty() const { return graph.nodes.empty(); }
  std::int64_t freq(const Edge& e) const;
  void validate() const;
};

/// Single start node, no API nodes.
Graam make_empty_graam(std::string id = {});

}  // namespace specminer
