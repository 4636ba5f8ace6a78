#pragma once

// Lowering of MiniLang ASTs into ProgramFacts: numbered three-address style
// statements with intra-method CFG successors and def/use pairs.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specminer/class_hierarchy.hpp"
#include "specminer/minilang.hpp"
#include "specminer/model.hpp"

namespace specminer {

enum class InstrKind { Param, Copy, New, Call, FieldRead, FieldWrite, Return, Branch, TryEntry, CatchParam };

std::string to_string(InstrKind kind);
InstrKind instr_kind_from_string(const std::string& s);

struct Instr {
  int index = 0;
  InstrKind kind = InstrKind::Copy;
  std::string def;
  std::vector<std::string> uses;
  // New: instantiated class. Call: receiver static type (class for static
  // calls). FieldRead/FieldWrite: declaring type. Param/CatchParam: type.
  std::string type;
  std::string member;
  std::string receiver;           // empty for static members
  std::vector<std::string> args;  // "" marks a literal argument
  bool is_static = false;
  int line = 0;
  int control_parent = -1;  // enclosing Branch or TryEntry
  std::vector<int> succs;   // intra-method CFG, always forward

  bool is_api_shaped() const {
    return kind == InstrKind::New || kind == InstrKind::Call ||
           kind == InstrKind::FieldRead || kind == InstrKind::FieldWrite;
  }
};

struct DefUse {
  int def = 0;
  int use = 0;
  std::string var;

  auto operator<=>(const DefUse&) const = default;
};

struct MethodFacts {
  std::string id;  // "Class.method"
  std::string file;
  std::string owner;
  std::string name;
  std::vector<std::string> params;
  bool is_static = false;
  std::vector<Instr> instrs;
  std::vector<DefUse> def_use;
  std::vector<int> exits;
};

struct CallSite {
  StatementId caller;
  std::string static_target;  // "Type.method"
  std::string receiver_type;
};

struct ProgramFacts {
  std::string name;
  std::vector<TypeDecl> types;
  std::map<std::string, MethodFacts> methods;
  std::vector<std::string> entrypoints;
  std::vector<CallSite> call_sites;

  void validate() const;
};

std::vector<TypeDecl> declared_types(const minilang::CompilationUnit& unit);

/// Framework declarations plus per-method field reads/writes and same-class
/// callees mined from the framework's own method bodies.
FrameworkModel build_framework_model(std::string name,
                                     const std::vector<minilang::CompilationUnit>& units);

/// Lowers application sources. Entry points default to every static `main`.
/// Throws NameResolutionError for undeclared names.
ProgramFacts lower(const std::vector<minilang::CompilationUnit>& units,
                   const FrameworkModel& framework, std::string program_name,
                   std::vector<std::string> entrypoints = {});

ClassHierarchy hierarchy_for(const ProgramFacts& facts, const FrameworkModel& framework);

/// Framework relatedness of one lowered statement. Non API-shaped statements
/// are never related.
Relation classify_statement(const Instr& instr, const ClassHierarchy& ch);

/// The API statement view of a related instruction, or nullopt.
std::optional<ApiStatement> to_api_statement(const Instr& instr, const MethodFacts& method,
                                             const ClassHierarchy& ch);

}  // namespace specminer
