#include "specminer/minilang.hpp"

#include <cctype>
#include <set>

#include "specminer/error.hpp"

namespace specminer::minilang {

namespace {

enum class Tok { Ident, Keyword, String, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

const std::set<std::string> kKeywords = {
    "class", "interface", "extends", "implements", "static", "new",
    "if",    "else",      "while",   "return",     "try",    "catch",
    "this",  "true",      "false",   "null",       "throws", "public",
    "private", "protected", "final"};

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.pos = {line_, col_};
      if (at_end()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
          t.text += advance();
        }
        t.kind = kKeywords.contains(t.text) ? Tok::Keyword : Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
        t.kind = Tok::Int;
      } else if (c == '"') {
        advance();
        while (!at_end() && peek() != '"') {
          if (peek() == '\n') throw SyntaxError(file_, line_, col_, "closing '\"'");
          if (peek() == '\\') t.text += advance();
          t.text += advance();
        }
        if (at_end()) throw SyntaxError(file_, line_, col_, "closing '\"'");
        advance();
        t.kind = Tok::String;
      } else if (std::string_view("{}();,.=").find(c) != std::string_view::npos) {
        t.text = std::string(1, advance());
        t.kind = Tok::Punct;
      } else {
        throw SyntaxError(file_, line_, col_, "a token (found '" + std::string(1, c) + "')");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (peek() == '/' && peek(1) == '*') {
        advance();
        advance();
        while (!at_end() && !(peek() == '*' && peek(1) == '/')) advance();
        if (at_end()) throw SyntaxError(file_, line_, col_, "end of block comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  const std::string& file_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file)
      : toks_(std::move(toks)), file_(std::move(file)) {}

  CompilationUnit unit() {
    CompilationUnit cu;
    cu.file = file_;
    while (cur().kind != Tok::End) cu.classes.push_back(class_def());
    return cu;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& look(std::size_t ahead) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool is(Tok kind, std::string_view text) const {
    return cur().kind == kind && cur().text == text;
  }
  bool is_punct(std::string_view p) const { return is(Tok::Punct, p); }
  bool is_kw(std::string_view k) const { return is(Tok::Keyword, k); }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = cur().kind == Tok::End ? "end of input" : "'" + cur().text + "'";
    throw SyntaxError(file_, cur().pos.line, cur().pos.column, expected + ", found " + found);
  }

  Token take() { return toks_[pos_++]; }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("'" + std::string(p) + "'");
    ++pos_;
  }
  void expect_kw(std::string_view k) {
    if (!is_kw(k)) fail("'" + std::string(k) + "'");
    ++pos_;
  }
  std::string ident(const char* what = "identifier") {
    if (cur().kind != Tok::Ident) fail(what);
    return take().text;
  }
  std::vector<std::string> ident_list() {
    std::vector<std::string> out{ident("type name")};
    while (is_punct(",")) {
      ++pos_;
      out.push_back(ident("type name"));
    }
    return out;
  }

  bool skip_modifiers() {
    bool is_static = false;
    while (cur().kind == Tok::Keyword &&
           (cur().text == "public" || cur().text == "private" || cur().text == "protected" ||
            cur().text == "final" || cur().text == "static")) {
      is_static |= cur().text == "static";
      ++pos_;
    }
    return is_static;
  }

  ClassDef class_def() {
    skip_modifiers();
    ClassDef c;
    c.pos = cur().pos;
    if (is_kw("interface")) {
      ++pos_;
      c.is_interface = true;
      c.name = ident("interface name");
      if (is_kw("extends")) {
        ++pos_;
        c.implements = ident_list();
      }
    } else {
      expect_kw("class");
      c.name = ident("class name");
      if (is_kw("extends")) {
        ++pos_;
        c.extends = ident("superclass name");
      }
      if (is_kw("implements")) {
        ++pos_;
        c.implements = ident_list();
      }
    }
    expect_punct("{");
    while (!is_punct("}")) {
      if (cur().kind == Tok::End) fail("'}'");
      member(c);
    }
    expect_punct("}");
    return c;
  }

  void member(ClassDef& c) {
    SourcePos pos = cur().pos;
    bool is_static = skip_modifiers();
    std::string type = ident("member type");
    std::string name = ident("member name");
    if (is_punct("(")) {
      MethodDef m;
      m.pos = pos;
      m.is_static = is_static;
      m.return_type = std::move(type);
      m.name = std::move(name);
      ++pos_;
      if (!is_punct(")")) {
        for (;;) {
          Param p;
          p.type = ident("parameter type");
          p.name = ident("parameter name");
          m.params.push_back(std::move(p));
          if (!is_punct(",")) break;
          ++pos_;
        }
      }
      expect_punct(")");
      if (is_kw("throws")) {
        ++pos_;
        ident_list();
      }
      if (is_punct(";")) {
        ++pos_;
      } else {
        m.body = block();
      }
      c.methods.push_back(std::move(m));
      return;
    }
    FieldDef f;
    f.pos = pos;
    f.is_static = is_static;
    f.type = std::move(type);
    f.name = std::move(name);
    if (is_punct("=")) {
      // Field initialisers are parsed for syntax only.
      ++pos_;
      expr();
    }
    expect_punct(";");
    c.fields.push_back(std::move(f));
  }

  Block block() {
    expect_punct("{");
    Block out;
    while (!is_punct("}")) {
      if (cur().kind == Tok::End) fail("'}'");
      out.push_back(stmt());
    }
    expect_punct("}");
    return out;
  }

  // A single statement or braced block, used by if/else arms.
  Block arm() {
    if (is_punct("{")) return block();
    Block out;
    out.push_back(stmt());
    return out;
  }

  StmtPtr stmt() {
    auto s = std::make_unique<Stmt>();
    s->pos = cur().pos;
    if (is_punct("{")) {
      s->kind = Stmt::Kind::Block;
      s->body = block();
    } else if (is_kw("if")) {
      ++pos_;
      s->kind = Stmt::Kind::If;
      expect_punct("(");
      s->value = expr();
      expect_punct(")");
      s->body = arm();
      if (is_kw("else")) {
        ++pos_;
        s->has_alt = true;
        s->alt = arm();
      }
    } else if (is_kw("while")) {
      ++pos_;
      s->kind = Stmt::Kind::While;
      expect_punct("(");
      s->value = expr();
      expect_punct(")");
      s->body = arm();
    } else if (is_kw("return")) {
      ++pos_;
      s->kind = Stmt::Kind::Return;
      if (!is_punct(";")) s->value = expr();
      expect_punct(";");
    } else if (is_kw("try")) {
      ++pos_;
      s->kind = Stmt::Kind::Try;
      s->body = block();
      expect_kw("catch");
      expect_punct("(");
      s->type = ident("exception type");
      s->name = ident("exception variable");
      expect_punct(")");
      s->has_alt = true;
      s->alt = block();
    } else if (cur().kind == Tok::Ident && look(1).kind == Tok::Ident) {
      s->kind = Stmt::Kind::LocalDecl;
      s->type = take().text;
      s->name = take().text;
      if (is_punct("=")) {
        ++pos_;
        s->value = expr();
      }
      expect_punct(";");
    } else {
      auto e = expr();
      if (is_punct("=")) {
        if (e->kind != Expr::Kind::Name && e->kind != Expr::Kind::Field) {
          fail("assignable expression before '='");
        }
        ++pos_;
        s->kind = Stmt::Kind::Assign;
        s->target = std::move(e);
        s->value = expr();
      } else {
        s->kind = Stmt::Kind::Expr;
        s->value = std::move(e);
      }
      expect_punct(";");
    }
    return s;
  }

  std::vector<ExprPtr> args() {
    expect_punct("(");
    std::vector<ExprPtr> out;
    if (!is_punct(")")) {
      for (;;) {
        out.push_back(expr());
        if (!is_punct(",")) break;
        ++pos_;
      }
    }
    expect_punct(")");
    return out;
  }

  ExprPtr expr() {
    auto e = primary();
    while (is_punct(".")) {
      ++pos_;
      auto sel = std::make_unique<Expr>();
      sel->pos = cur().pos;
      sel->text = ident("member name");
      sel->base = std::move(e);
      if (is_punct("(")) {
        sel->kind = Expr::Kind::Call;
        sel->args = args();
      } else {
        sel->kind = Expr::Kind::Field;
      }
      e = std::move(sel);
    }
    return e;
  }

  ExprPtr primary() {
    auto e = std::make_unique<Expr>();
    e->pos = cur().pos;
    if (is_kw("new")) {
      ++pos_;
      e->kind = Expr::Kind::New;
      e->text = ident("class name after 'new'");
      e->args = args();
    } else if (is_kw("this")) {
      ++pos_;
      e->kind = Expr::Kind::This;
    } else if (is_kw("true") || is_kw("false")) {
      e->kind = Expr::Kind::Bool;
      e->text = take().text;
    } else if (is_kw("null")) {
      ++pos_;
      e->kind = Expr::Kind::Null;
    } else if (cur().kind == Tok::String) {
      e->kind = Expr::Kind::String;
      e->text = take().text;
    } else if (cur().kind == Tok::Int) {
      e->kind = Expr::Kind::Int;
      e->text = take().text;
    } else if (is_punct("(")) {
      ++pos_;
      e = expr();
      expect_punct(")");
    } else if (cur().kind == Tok::Ident) {
      e->text = take().text;
      if (is_punct("(")) {
        e->kind = Expr::Kind::Call;
        e->args = args();
      } else {
        e->kind = Expr::Kind::Name;
      }
    } else {
      fail("expression");
    }
    return e;
  }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
};

}  // namespace

CompilationUnit parse(std::string_view source, std::string file) {
  Lexer lexer(source, file);
  Parser parser(lexer.run(), file);
  return parser.unit();
}

}  // namespace specminer::minilang
