#include "specminer/facts.hpp"

#include <algorithm>
#include <set>

#include "specminer/error.hpp"

namespace specminer {

std::string to_string(InstrKind kind) {
  switch (kind) {
    case InstrKind::Param:
      return "param";
    case InstrKind::Copy:
      return "copy";
    case InstrKind::New:
      return "new";
    case InstrKind::Call:
      return "call";
    case InstrKind::FieldRead:
      return "field_read";
    case InstrKind::FieldWrite:
      return "field_write";
    case InstrKind::Return:
      return "return";
    case InstrKind::Branch:
      return "branch";
    case InstrKind::TryEntry:
      return "try_entry";
    case InstrKind::CatchParam:
      return "catch_param";
  }
  return "?";
}

InstrKind instr_kind_from_string(const std::string& s) {
  static const std::map<std::string, InstrKind> kinds = {
      {"param", InstrKind::Param},          {"copy", InstrKind::Copy},
      {"new", InstrKind::New},              {"call", InstrKind::Call},
      {"field_read", InstrKind::FieldRead}, {"field_write", InstrKind::FieldWrite},
      {"return", InstrKind::Return},        {"branch", InstrKind::Branch},
      {"try_entry", InstrKind::TryEntry},   {"catch_param", InstrKind::CatchParam}};
  auto it = kinds.find(s);
  if (it == kinds.end()) throw InputError("unknown instruction kind '" + s + "'");
  return it->second;
}

void ProgramFacts::validate() const {
  for (const auto& e : entrypoints) {
    if (!methods.contains(e)) throw NoEntrypoint("entrypoint '" + e + "' is not a method with a body");
  }
  for (const auto& [id, m] : methods) {
    const auto n = static_cast<int>(m.instrs.size());
    for (const auto& du : m.def_use) {
      if (du.def < 0 || du.def >= n || du.use < 0 || du.use >= n) {
        throw InputError("def/use pair outside method " + id);
      }
    }
  }
}

std::vector<TypeDecl> declared_types(const minilang::CompilationUnit& unit) {
  std::vector<TypeDecl> out;
  for (const auto& c : unit.classes) {
    TypeDecl t;
    t.name = c.name;
    t.is_interface = c.is_interface;
    if (c.extends) t.supertypes.push_back(*c.extends);
    t.supertypes.insert(t.supertypes.end(), c.implements.begin(), c.implements.end());
    for (const auto& f : c.fields) t.fields.push_back({f.name, f.type, f.is_static});
    for (const auto& m : c.methods) {
      MethodSig sig;
      sig.name = m.name;
      sig.return_type = m.return_type;
      sig.is_static = m.is_static;
      sig.has_body = m.body.has_value();
      for (const auto& p : m.params) {
        sig.param_types.push_back(p.type);
        sig.param_names.push_back(p.name);
      }
      t.methods.push_back(std::move(sig));
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

using minilang::Expr;
using minilang::Stmt;

struct Value {
  std::string var;   // empty for literals and type references
  std::string type;  // static type, or the referenced type
  bool is_type_ref = false;
};

class MethodLowerer {
 public:
  MethodLowerer(const ClassHierarchy& ch, const std::string& file, const std::string& owner,
                const minilang::MethodDef& def)
      : ch_(ch), def_(def) {
    m_.id = owner + "." + def.name;
    m_.file = file;
    m_.owner = owner;
    m_.name = def.name;
    m_.is_static = def.is_static;
  }

  MethodFacts run() {
    for (const auto& p : def_.params) {
      Instr in;
      in.kind = InstrKind::Param;
      in.def = p.name;
      in.type = p.type;
      in.line = def_.pos.line;
      emit(std::move(in));
      vars_[p.name] = p.type;
      m_.params.push_back(p.name);
    }
    for (const auto& s : *def_.body) stmt(*s);
    m_.exits.insert(m_.exits.end(), frontier_.begin(), frontier_.end());
    std::sort(m_.exits.begin(), m_.exits.end());
    m_.exits.erase(std::unique(m_.exits.begin(), m_.exits.end()), m_.exits.end());
    reaching_definitions();
    return std::move(m_);
  }

 private:
  int emit(Instr in) {
    in.index = static_cast<int>(m_.instrs.size());
    in.control_parent = control_.empty() ? -1 : control_.back();
    for (int f : frontier_) m_.instrs[f].succs.push_back(in.index);
    frontier_ = {in.index};
    m_.instrs.push_back(std::move(in));
    return m_.instrs.back().index;
  }

  std::string fresh_temp() { return "$t" + std::to_string(++temps_); }

  [[noreturn]] void unresolved(const std::string& what, const minilang::SourcePos& pos) const {
    throw NameResolutionError(m_.file + ":" + std::to_string(pos.line) + ":" +
                              std::to_string(pos.column) + ": " + what + " (in " + m_.id + ")");
  }

  void require_type(const std::string& type, const minilang::SourcePos& pos) const {
    if (!ch_.knows(type)) unresolved("unknown type '" + type + "'", pos);
  }

  std::string result_type(const std::string& type, const std::string& method) const {
    if (auto owner = ch_.resolve_method(type, method)) {
      return ch_.decl(*owner)->find_method(method)->return_type;
    }
    return "Object";
  }

  Value field_read(const Value& base, const std::string& field, const minilang::SourcePos& pos) {
    auto owner = ch_.resolve_field(base.type, field);
    if (!owner) unresolved("undeclared field '" + base.type + "." + field + "'", pos);
    Instr in;
    in.kind = InstrKind::FieldRead;
    in.type = *owner;
    in.member = field;
    in.is_static = base.is_type_ref;
    if (!base.is_type_ref) {
      in.receiver = base.var;
      if (!base.var.empty()) in.uses.push_back(base.var);
    }
    in.def = fresh_temp();
    in.line = pos.line;
    Value v{in.def, ch_.decl(*owner)->find_field(field)->type, false};
    emit(std::move(in));
    return v;
  }

  Value name(const Expr& e) {
    if (auto it = vars_.find(e.text); it != vars_.end()) return {e.text, it->second, false};
    if (ch_.resolve_field(m_.owner, e.text)) {
      const bool is_static = ch_.decl(*ch_.resolve_field(m_.owner, e.text))->find_field(e.text)->is_static;
      Value base = is_static ? Value{"", m_.owner, true} : Value{"this", m_.owner, false};
      return field_read(base, e.text, e.pos);
    }
    if (ch_.knows(e.text)) return {"", e.text, true};
    unresolved("use of undeclared variable '" + e.text + "'", e.pos);
  }

  std::vector<std::string> lower_args(const std::vector<minilang::ExprPtr>& args,
                                      std::vector<std::string>& uses) {
    std::vector<std::string> out;
    for (const auto& a : args) {
      Value v = expr(*a);
      out.push_back(v.var);
      if (!v.var.empty()) uses.push_back(v.var);
    }
    return out;
  }

  Value expr(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Name:
        return name(e);
      case Expr::Kind::String:
        return {"", "String", false};
      case Expr::Kind::Int:
        return {"", "int", false};
      case Expr::Kind::Bool:
        return {"", "boolean", false};
      case Expr::Kind::Null:
        return {"", "Object", false};
      case Expr::Kind::This:
        if (m_.is_static) unresolved("'this' in static method", e.pos);
        return {"this", m_.owner, false};
      case Expr::Kind::New: {
        require_type(e.text, e.pos);
        Instr in;
        in.kind = InstrKind::New;
        in.type = e.text;
        in.member = "<init>";
        in.args = lower_args(e.args, in.uses);
        in.def = fresh_temp();
        in.line = e.pos.line;
        Value v{in.def, e.text, false};
        emit(std::move(in));
        return v;
      }
      case Expr::Kind::Field: {
        Value base = expr(*e.base);
        return field_read(base, e.text, e.pos);
      }
      case Expr::Kind::Call: {
        Instr in;
        in.kind = InstrKind::Call;
        in.member = e.text;
        if (e.base) {
          Value base = expr(*e.base);
          in.type = base.type;
          in.is_static = base.is_type_ref;
          if (!base.is_type_ref) in.receiver = base.var;
        } else {
          auto owner = ch_.resolve_method(m_.owner, e.text);
          if (!owner) unresolved("call to undeclared method '" + e.text + "'", e.pos);
          const bool is_static = ch_.decl(*owner)->find_method(e.text)->is_static;
          in.type = m_.owner;
          in.is_static = is_static || m_.is_static;
          if (!in.is_static) in.receiver = "this";
        }
        if (!in.receiver.empty()) in.uses.push_back(in.receiver);
        in.args = lower_args(e.args, in.uses);
        in.line = e.pos.line;
        std::string rtype = result_type(in.type, in.member);
        if (rtype != "void") in.def = fresh_temp();
        Value v{in.def, rtype, false};
        emit(std::move(in));
        return v;
      }
    }
    return {};
  }

  void assign_to_var(const std::string& var, const Value& v, int line) {
    if (!v.var.empty() && v.var.starts_with("$t") && !m_.instrs.empty() &&
        m_.instrs.back().def == v.var) {
      m_.instrs.back().def = var;
      return;
    }
    Instr in;
    in.kind = InstrKind::Copy;
    in.def = var;
    if (!v.var.empty()) in.uses.push_back(v.var);
    in.line = line;
    emit(std::move(in));
  }

  void field_write(const Value& base, const std::string& field, const Value& v,
                   const minilang::SourcePos& pos) {
    auto owner = ch_.resolve_field(base.type, field);
    if (!owner) unresolved("undeclared field '" + base.type + "." + field + "'", pos);
    Instr in;
    in.kind = InstrKind::FieldWrite;
    in.type = *owner;
    in.member = field;
    in.is_static = base.is_type_ref;
    if (!base.is_type_ref) {
      in.receiver = base.var;
      if (!base.var.empty()) in.uses.push_back(base.var);
    }
    if (!v.var.empty()) in.uses.push_back(v.var);
    in.line = pos.line;
    emit(std::move(in));
  }

  void block(const minilang::Block& b) {
    for (const auto& s : b) stmt(*s);
  }

  void stmt(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Block:
        block(s.body);
        return;
      case Stmt::Kind::LocalDecl:
        require_type(s.type, s.pos);
        if (s.value) {
          Value v = expr(*s.value);
          vars_[s.name] = s.type;
          assign_to_var(s.name, v, s.pos.line);
        } else {
          vars_[s.name] = s.type;
        }
        return;
      case Stmt::Kind::Assign: {
        const Expr& target = *s.target;
        if (target.kind == Expr::Kind::Name) {
          if (vars_.contains(target.text)) {
            Value v = expr(*s.value);
            assign_to_var(target.text, v, s.pos.line);
            return;
          }
          auto owner = ch_.resolve_field(m_.owner, target.text);
          if (!owner) unresolved("assignment to undeclared variable '" + target.text + "'", target.pos);
          Value v = expr(*s.value);
          const bool is_static = ch_.decl(*owner)->find_field(target.text)->is_static;
          Value base = is_static ? Value{"", m_.owner, true} : Value{"this", m_.owner, false};
          field_write(base, target.text, v, target.pos);
          return;
        }
        Value base = expr(*target.base);
        Value v = expr(*s.value);
        field_write(base, target.text, v, target.pos);
        return;
      }
      case Stmt::Kind::Expr:
        expr(*s.value);
        return;
      case Stmt::Kind::Return: {
        Instr in;
        in.kind = InstrKind::Return;
        if (s.value) {
          Value v = expr(*s.value);
          if (!v.var.empty()) in.uses.push_back(v.var);
        }
        in.line = s.pos.line;
        int idx = emit(std::move(in));
        m_.exits.push_back(idx);
        frontier_.clear();
        return;
      }
      case Stmt::Kind::If:
      case Stmt::Kind::While: {
        Value cond = expr(*s.value);
        Instr br;
        br.kind = InstrKind::Branch;
        if (!cond.var.empty()) br.uses.push_back(cond.var);
        br.line = s.pos.line;
        int b = emit(std::move(br));
        control_.push_back(b);
        block(s.body);
        std::vector<int> after = frontier_;
        frontier_ = {b};
        if (s.kind == Stmt::Kind::If && s.has_alt) block(s.alt);
        after.insert(after.end(), frontier_.begin(), frontier_.end());
        frontier_ = std::move(after);
        control_.pop_back();
        return;
      }
      case Stmt::Kind::Try: {
        Instr entry;
        entry.kind = InstrKind::TryEntry;
        entry.line = s.pos.line;
        int t = emit(std::move(entry));
        const int body_begin = t + 1;
        block(s.body);
        const int body_end = static_cast<int>(m_.instrs.size());
        std::vector<int> after = frontier_;
        frontier_ = {t};
        for (int i = body_begin; i < body_end; ++i) frontier_.push_back(i);
        require_type(s.type, s.pos);
        control_.push_back(t);
        Instr param;
        param.kind = InstrKind::CatchParam;
        param.def = s.name;
        param.type = s.type;
        param.line = s.pos.line;
        emit(std::move(param));
        vars_[s.name] = s.type;
        block(s.alt);
        control_.pop_back();
        after.insert(after.end(), frontier_.begin(), frontier_.end());
        frontier_ = std::move(after);
        return;
      }
    }
  }

  void reaching_definitions() {
    using Defs = std::map<std::string, std::set<int>>;
    const auto n = m_.instrs.size();
    std::vector<std::vector<int>> preds(n);
    for (const auto& in : m_.instrs) {
      for (int s : in.succs) preds[s].push_back(in.index);
    }
    std::vector<Defs> out(n);
    std::set<DefUse> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      Defs in_defs;
      for (int p : preds[i]) {
        for (const auto& [var, defs] : out[p]) in_defs[var].insert(defs.begin(), defs.end());
      }
      const auto& ins = m_.instrs[i];
      for (const auto& u : ins.uses) {
        if (auto it = in_defs.find(u); it != in_defs.end()) {
          for (int d : it->second) pairs.insert({d, static_cast<int>(i), u});
        }
      }
      out[i] = std::move(in_defs);
      if (!ins.def.empty()) out[i][ins.def] = {static_cast<int>(i)};
    }
    m_.def_use.assign(pairs.begin(), pairs.end());
  }

  const ClassHierarchy& ch_;
  const minilang::MethodDef& def_;
  MethodFacts m_;
  std::map<std::string, std::string> vars_;
  std::vector<int> frontier_;
  std::vector<int> control_;
  int temps_ = 0;
};

}  // namespace

FrameworkModel build_framework_model(std::string name,
                                     const std::vector<minilang::CompilationUnit>& units) {
  FrameworkModel fw;
  fw.name = std::move(name);
  for (const auto& u : units) {
    for (auto& t : declared_types(u)) {
      auto type_name = t.name;
      if (!fw.types.emplace(type_name, std::move(t)).second) {
        throw UnresolvedType("framework type '" + type_name + "' declared more than once");
      }
    }
  }
  const auto ch = build_class_hierarchy(fw, {});
  for (const auto& u : units) {
    for (const auto& c : u.classes) {
      for (const auto& m : c.methods) {
        if (!m.body) continue;
        MethodLowerer lowerer(ch, u.file, c.name, m);
        const auto facts = lowerer.run();
        std::set<FieldAccess> accesses;
        std::set<std::string> callees;
        for (const auto& in : facts.instrs) {
          if (in.kind == InstrKind::FieldRead || in.kind == InstrKind::FieldWrite) {
            accesses.insert({in.type, in.member,
                             in.kind == InstrKind::FieldRead ? AccessKind::Read : AccessKind::Write});
          } else if (in.kind == InstrKind::Call &&
                     (in.receiver == "this" || (in.is_static && in.type == c.name))) {
            if (auto owner = ch.resolve_method(c.name, in.member)) {
              callees.insert(*owner + "." + in.member);
            }
          }
        }
        const auto id = c.name + "." + m.name;
        fw.method_bodies[id].assign(accesses.begin(), accesses.end());
        if (!callees.empty()) fw.method_calls[id].assign(callees.begin(), callees.end());
      }
    }
  }
  return fw;
}

ProgramFacts lower(const std::vector<minilang::CompilationUnit>& units,
                   const FrameworkModel& framework, std::string program_name,
                   std::vector<std::string> entrypoints) {
  ProgramFacts facts;
  facts.name = std::move(program_name);
  for (const auto& u : units) {
    auto types = declared_types(u);
    facts.types.insert(facts.types.end(), types.begin(), types.end());
  }
  const auto ch = build_class_hierarchy(framework, facts.types);
  for (const auto& u : units) {
    for (const auto& c : u.classes) {
      for (const auto& m : c.methods) {
        if (!m.body) continue;
        MethodLowerer lowerer(ch, u.file, c.name, m);
        auto mf = lowerer.run();
        for (const auto& in : mf.instrs) {
          if (in.kind == InstrKind::Call) {
            facts.call_sites.push_back({StatementId{mf.file, mf.id, in.index},
                                        in.type + "." + in.member, in.type});
          }
        }
        auto id = mf.id;
        if (!facts.methods.emplace(id, std::move(mf)).second) {
          throw NameResolutionError("method '" + id + "' defined more than once");
        }
      }
    }
  }
  if (entrypoints.empty()) {
    for (const auto& [id, m] : facts.methods) {
      if (m.is_static && m.name == "main") entrypoints.push_back(id);
    }
  }
  facts.entrypoints = std::move(entrypoints);
  facts.validate();
  return facts;
}

ClassHierarchy hierarchy_for(const ProgramFacts& facts, const FrameworkModel& framework) {
  return build_class_hierarchy(framework, facts.types);
}

Relation classify_statement(const Instr& instr, const ClassHierarchy& ch) {
  if (!instr.is_api_shaped()) return Relation::None;
  return classify_target(instr.type, ch);
}

std::optional<ApiStatement> to_api_statement(const Instr& instr, const MethodFacts& method,
                                             const ClassHierarchy& ch) {
  const auto relation = classify_statement(instr, ch);
  if (relation == Relation::None) return std::nullopt;
  ApiStatement s;
  s.location = {method.file, method.id, instr.index};
  switch (instr.kind) {
    case InstrKind::New:
      s.kind = ApiKind::ObjectInit;
      break;
    case InstrKind::Call:
      s.kind = ApiKind::MethodInvoke;
      break;
    case InstrKind::FieldRead:
      s.kind = ApiKind::FieldRead;
      break;
    default:
      s.kind = ApiKind::FieldWrite;
      break;
  }
  s.declared_type = instr.type;
  s.target_type = relation == Relation::Direct ? instr.type : *ch.framework_supertype(instr.type);
  s.member = instr.member;
  s.relation = relation;
  return s;
}

}  // namespace specminer
