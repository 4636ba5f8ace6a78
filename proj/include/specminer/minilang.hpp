#pragma once

// MiniLang: the small Java-like carrier language analysed by the frontend.
// Grammar reference lives in docs/minilang.md.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace specminer::minilang {

struct SourcePos {
  int line = 1;
  int column = 1;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind { Name, String, Int, Bool, Null, This, New, Call, Field };

  Kind kind = Kind::Name;
  // Name: identifier; String/Int/Bool: literal text; New: class name;
  // Call: method name; Field: field name.
  std::string text;
  ExprPtr base;  // receiver for Call/Field; null for unqualified calls
  std::vector<ExprPtr> args;
  SourcePos pos;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind { LocalDecl, Assign, Expr, If, While, Return, Try, Block };

  Kind kind = Kind::Expr;
  std::string type;   // LocalDecl: declared type; Try: catch type
  std::string name;   // LocalDecl: variable; Try: catch variable
  ExprPtr target;     // Assign: Name or Field expression
  ExprPtr value;      // LocalDecl init, Assign rhs, Expr, If/While cond, Return
  Block body;         // If-then, While, Try body, Block
  Block alt;          // If-else, Try catch body
  bool has_alt = false;
  SourcePos pos;
};

struct Param {
  std::string type;
  std::string name;
};

struct FieldDef {
  std::string type;
  std::string name;
  bool is_static = false;
  SourcePos pos;
};

struct MethodDef {
  std::string return_type;
  std::string name;
  std::vector<Param> params;
  bool is_static = false;
  std::optional<Block> body;  // nullopt for signatures
  SourcePos pos;
};

struct ClassDef {
  std::string name;
  bool is_interface = false;
  std::optional<std::string> extends;  // classes
  std::vector<std::string> implements; // classes: implements; interfaces: extends
  std::vector<FieldDef> fields;
  std::vector<MethodDef> methods;
  SourcePos pos;
};

struct CompilationUnit {
  std::string file;
  std::vector<ClassDef> classes;
};

/// Throws SyntaxError(file, line, column, expected).
CompilationUnit parse(std::string_view source, std::string file = "<input>");

}  // namespace specminer::minilang
