#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "specminer/model.hpp"

namespace specminer {

/// Reflexive-transitive subtype relation over application and framework
/// types, plus member lookup along supertype links.
class ClassHierarchy {
 public:
  /// Built-in value types that need no declaration.
  static bool is_builtin(const std::string& type);

  bool knows(const std::string& type) const;
  bool is_framework(const std::string& type) const { return framework_.contains(type); }
  bool is_subtype(const std::string& sub, const std::string& super) const;

  const TypeDecl* decl(const std::string& type) const;
  /// Reflexive-transitive supertypes.
  const std::set<std::string>& supertypes(const std::string& type) const;
  /// Reflexive subtypes, sorted.
  std::vector<std::string> subtypes(const std::string& type) const;
  std::vector<std::string> type_names() const;

  /// Nearest framework supertype of an application type (breadth-first over
  /// declared supertype links, declaration order). Nullopt for framework or
  /// unrelated types.
  std::optional<std::string> framework_supertype(const std::string& type) const;

  /// Type declaring `method`, searching `type` then its supertypes
  /// breadth-first.
  std::optional<std::string> resolve_method(const std::string& type,
                                            const std::string& method) const;
  std::optional<std::string> resolve_field(const std::string& type,
                                           const std::string& field) const;

  /// Ordered (sub, super) pairs of the relation; used by tests.
  std::set<std::pair<std::string, std::string>> pairs() const;

  /// `type` followed by its supertypes, breadth-first in declaration order.
  std::vector<std::string> supertype_order(const std::string& type) const;

 private:
  friend ClassHierarchy build_class_hierarchy(const FrameworkModel&,
                                              const std::vector<TypeDecl>&);

  std::map<std::string, TypeDecl> decls_;
  std::set<std::string> framework_;
  std::map<std::string, std::set<std::string>> supers_;
};

/// Throws UnresolvedType for a dangling supertype name and InheritanceCycle
/// when extends/implements links loop. Duplicate type names are rejected as
/// UnresolvedType.
ClassHierarchy build_class_hierarchy(const FrameworkModel& framework,
                                     const std::vector<TypeDecl>& app_types);

/// Relation of a statement that targets `target_type`: Direct for framework
/// types, IndirectViaInheritance for application types below a framework type,
/// None otherwise. Throws UnresolvedType for unknown types.
Relation classify_target(const std::string& target_type, const ClassHierarchy& ch);

}  // namespace specminer
