#include "specminer/class_hierarchy.hpp"

#include <deque>
#include <functional>

#include "specminer/error.hpp"

namespace specminer {

namespace {

const std::set<std::string> kBuiltins = {"void", "int", "boolean", "String", "Object"};
const std::set<std::string> kEmpty;

}  // namespace

bool ClassHierarchy::is_builtin(const std::string& type) { return kBuiltins.contains(type); }

bool ClassHierarchy::knows(const std::string& type) const {
  return decls_.contains(type) || is_builtin(type);
}

bool ClassHierarchy::is_subtype(const std::string& sub, const std::string& super) const {
  if (sub == super) return knows(sub);
  auto it = supers_.find(sub);
  return it != supers_.end() && it->second.contains(super);
}

const TypeDecl* ClassHierarchy::decl(const std::string& type) const {
  auto it = decls_.find(type);
  return it == decls_.end() ? nullptr : &it->second;
}

const std::set<std::string>& ClassHierarchy::supertypes(const std::string& type) const {
  auto it = supers_.find(type);
  return it == supers_.end() ? kEmpty : it->second;
}

std::vector<std::string> ClassHierarchy::subtypes(const std::string& type) const {
  std::vector<std::string> out;
  for (const auto& [name, sups] : supers_) {
    if (sups.contains(type)) out.push_back(name);
  }
  return out;
}

std::vector<std::string> ClassHierarchy::type_names() const {
  std::vector<std::string> out;
  for (const auto& [name, decl] : decls_) out.push_back(name);
  return out;
}

std::vector<std::string> ClassHierarchy::supertype_order(const std::string& type) const {
  std::vector<std::string> order;
  std::set<std::string> seen{type};
  std::deque<std::string> queue{type};
  while (!queue.empty()) {
    auto current = queue.front();
    queue.pop_front();
    order.push_back(current);
    if (const auto* d = decl(current)) {
      for (const auto& s : d->supertypes) {
        if (seen.insert(s).second) queue.push_back(s);
      }
    }
  }
  return order;
}

std::optional<std::string> ClassHierarchy::framework_supertype(const std::string& type) const {
  if (is_framework(type)) return std::nullopt;
  for (const auto& t : supertype_order(type)) {
    if (is_framework(t)) return t;
  }
  return std::nullopt;
}

std::optional<std::string> ClassHierarchy::resolve_method(const std::string& type,
                                                          const std::string& method) const {
  for (const auto& t : supertype_order(type)) {
    if (const auto* d = decl(t); d != nullptr && d->find_method(method) != nullptr) return t;
  }
  return std::nullopt;
}

std::optional<std::string> ClassHierarchy::resolve_field(const std::string& type,
                                                         const std::string& field) const {
  for (const auto& t : supertype_order(type)) {
    if (const auto* d = decl(t); d != nullptr && d->find_field(field) != nullptr) return t;
  }
  return std::nullopt;
}

std::set<std::pair<std::string, std::string>> ClassHierarchy::pairs() const {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [sub, sups] : supers_) {
    for (const auto& s : sups) out.emplace(sub, s);
  }
  return out;
}

ClassHierarchy build_class_hierarchy(const FrameworkModel& framework,
                                     const std::vector<TypeDecl>& app_types) {
  ClassHierarchy ch;
  for (const auto& [name, decl] : framework.types) {
    ch.decls_.emplace(name, decl);
    ch.framework_.insert(name);
  }
  for (const auto& decl : app_types) {
    if (!ch.decls_.emplace(decl.name, decl).second) {
      throw UnresolvedType("type '" + decl.name + "' declared more than once");
    }
  }
  for (const auto& [name, decl] : ch.decls_) {
    for (const auto& s : decl.supertypes) {
      if (!ch.decls_.contains(s) && !ClassHierarchy::is_builtin(s)) {
        throw UnresolvedType("type '" + name + "' names unknown supertype '" + s + "'");
      }
    }
  }

  // 0 = unvisited, 1 = on stack, 2 = done.
  std::map<std::string, int> state;
  std::function<void(const std::string&)> visit = [&](const std::string& type) {
    auto& st = state[type];
    if (st == 2) return;
    if (st == 1) throw InheritanceCycle("inheritance cycle through '" + type + "'");
    st = 1;
    std::set<std::string> sups{type};
    if (const auto* d = ch.decl(type)) {
      for (const auto& s : d->supertypes) {
        visit(s);
        const auto& parent = ch.supers_[s];
        sups.insert(parent.begin(), parent.end());
      }
    }
    ch.supers_[type] = std::move(sups);
    state[type] = 2;
  };
  for (const auto& [name, decl] : ch.decls_) visit(name);
  return ch;
}

Relation classify_target(const std::string& target_type, const ClassHierarchy& ch) {
  if (!ch.knows(target_type)) {
    throw UnresolvedType("statement targets unknown type '" + target_type + "'");
  }
  if (ch.is_framework(target_type)) return Relation::Direct;
  if (ch.framework_supertype(target_type)) return Relation::IndirectViaInheritance;
  return Relation::None;
}

}  // namespace specminer
