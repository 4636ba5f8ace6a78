#include "specminer/serialize.hpp"

#include <fstream>
#include <sstream>

#include "specminer/error.hpp"

namespace specminer {

namespace {

Json edge_list(const std::set<Edge>& edges) {
  Json out = Json::array();
  for (const auto& [u, v] : edges) out.push_back({u, v});
  return out;
}

std::set<Edge> edges_from(const Json& j) {
  std::set<Edge> out;
  for (const auto& e : j) out.insert({e.at(0).get<NodeId>(), e.at(1).get<NodeId>()});
  return out;
}

Json nodes_json(const std::vector<UsageNode>& nodes) {
  Json out = Json::array();
  for (const auto& n : nodes) out.push_back(to_json(n));
  return out;
}

std::vector<UsageNode> nodes_from(const Json& j) {
  std::vector<UsageNode> out;
  for (const auto& n : j) out.push_back(node_from_json(n));
  return out;
}

Json statement_id_json(const StatementId& s) {
  return {{"file", s.file}, {"method", s.method}, {"index", s.index}};
}

StatementId statement_id_from(const Json& j) {
  return {j.at("file").get<std::string>(), j.at("method").get<std::string>(), j.at("index").get<int>()};
}

void expect_format(const Json& j, const std::string& format) {
  if (!j.is_object() || j.value("format", "") != format) {
    throw InputError("expected a '" + format + "' document");
  }
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("malformed ") + what + ": " + e.what());
  } catch (const InvalidGraph& e) {
    throw InputError(std::string("invalid ") + what + ": " + e.what());
  }
}

Json type_decl_json(const TypeDecl& t) {
  Json fields = Json::array();
  for (const auto& f : t.fields) fields.push_back({{"name", f.name}, {"type", f.type}, {"static", f.is_static}});
  Json methods = Json::array();
  for (const auto& m : t.methods) {
    methods.push_back({{"name", m.name},
                       {"return_type", m.return_type},
                       {"param_types", m.param_types},
                       {"param_names", m.param_names},
                       {"static", m.is_static},
                       {"has_body", m.has_body}});
  }
  return {{"name", t.name},
          {"interface", t.is_interface},
          {"supertypes", t.supertypes},
          {"fields", fields},
          {"methods", methods}};
}

TypeDecl type_decl_from(const Json& j) {
  TypeDecl t;
  t.name = j.at("name").get<std::string>();
  t.is_interface = j.at("interface").get<bool>();
  t.supertypes = j.at("supertypes").get<std::vector<std::string>>();
  for (const auto& f : j.at("fields")) {
    t.fields.push_back({f.at("name").get<std::string>(), f.at("type").get<std::string>(), f.at("static").get<bool>()});
  }
  for (const auto& m : j.at("methods")) {
    MethodSig s;
    s.name = m.at("name").get<std::string>();
    s.return_type = m.at("return_type").get<std::string>();
    s.param_types = m.at("param_types").get<std::vector<std::string>>();
    s.param_names = m.at("param_names").get<std::vector<std::string>>();
    s.is_static = m.at("static").get<bool>();
    s.has_body = m.at("has_body").get<bool>();
    t.methods.push_back(std::move(s));
  }
  return t;
}

Json instr_json(const Instr& in) {
  return {{"index", in.index},
          {"kind", to_string(in.kind)},
          {"def", in.def},
          {"uses", in.uses},
          {"type", in.type},
          {"member", in.member},
          {"receiver", in.receiver},
          {"args", in.args},
          {"static", in.is_static},
          {"line", in.line},
          {"control_parent", in.control_parent},
          {"succs", in.succs}};
}

Instr instr_from(const Json& j) {
  Instr in;
  in.index = j.at("index").get<int>();
  in.kind = instr_kind_from_string(j.at("kind").get<std::string>());
  in.def = j.at("def").get<std::string>();
  in.uses = j.at("uses").get<std::vector<std::string>>();
  in.type = j.at("type").get<std::string>();
  in.member = j.at("member").get<std::string>();
  in.receiver = j.at("receiver").get<std::string>();
  in.args = j.at("args").get<std::vector<std::string>>();
  in.is_static = j.at("static").get<bool>();
  in.line = j.at("line").get<int>();
  in.control_parent = j.at("control_parent").get<int>();
  in.succs = j.at("succs").get<std::vector<int>>();
  return in;
}

}  // namespace

Json to_json(const ApiLabel& label) {
  return {{"kind", to_string(label.kind)}, {"target", label.target}, {"member", label.member}};
}

ApiLabel label_from_json(const Json& j) {
  return {api_kind_from_string(j.at("kind").get<std::string>()), j.at("target").get<std::string>(),
          j.at("member").get<std::string>()};
}

Json to_json(const UsageNode& node) {
  Json j = {{"id", node.id}, {"role", to_string(node.role)}};
  if (!node.is_api()) return j;
  j["api"] = node.key();
  j["label"] = to_json(node.label);
  j["receivers"] = node.receivers;
  if (!node.context.empty()) j["context"] = node.context;
  if (node.statement) {
    const auto& s = *node.statement;
    j["statement"] = {{"location", statement_id_json(s.location)},
                      {"kind", to_string(s.kind)},
                      {"target_type", s.target_type},
                      {"declared_type", s.declared_type},
                      {"member", s.member},
                      {"relation", to_string(s.relation)}};
  }
  return j;
}

UsageNode node_from_json(const Json& j) {
  UsageNode n;
  n.id = j.at("id").get<NodeId>();
  n.role = node_role_from_string(j.at("role").get<std::string>());
  if (!n.is_api()) return n;
  n.label = label_from_json(j.at("label"));
  n.receivers = j.value("receivers", std::vector<NodeId>{});
  n.context = j.value("context", "");
  if (j.contains("statement")) {
    const auto& s = j.at("statement");
    ApiStatement st;
    st.location = statement_id_from(s.at("location"));
    st.kind = api_kind_from_string(s.at("kind").get<std::string>());
    st.target_type = s.at("target_type").get<std::string>();
    st.declared_type = s.at("declared_type").get<std::string>();
    st.member = s.at("member").get<std::string>();
    st.relation = relation_from_string(s.at("relation").get<std::string>());
    n.statement = std::move(st);
  }
  return n;
}

Json to_json(const PrimaryApiUsageGraph& g) {
  return {{"format", "specminer.primary/1"},
          {"program", g.program},
          {"entrypoint", g.entrypoint},
          {"nodes", nodes_json(g.nodes)},
          {"sequence_edges", edge_list(g.sequence_edges)},
          {"data_edges", edge_list(g.data_edges)}};
}

PrimaryApiUsageGraph primary_from_json(const Json& j) {
  return guarded("primary usage graph", [&] {
    expect_format(j, "specminer.primary/1");
    PrimaryApiUsageGraph g;
    g.program = j.at("program").get<std::string>();
    g.entrypoint = j.at("entrypoint").get<std::string>();
    g.nodes = nodes_from(j.at("nodes"));
    g.sequence_edges = edges_from(j.at("sequence_edges"));
    g.data_edges = edges_from(j.at("data_edges"));
    g.validate();
    return g;
  });
}

Json to_json(const Graam& g) {
  return {{"format", "specminer.graam/1"},
          {"id", g.id},
          {"program", g.program},
          {"entrypoint", g.entrypoint},
          {"nodes", nodes_json(g.nodes)},
          {"edges", edge_list(g.edges)}};
}

Graam graam_from_json(const Json& j) {
  return guarded("GRAAM", [&] {
    expect_format(j, "specminer.graam/1");
    Graam g;
    g.id = j.at("id").get<std::string>();
    g.program = j.at("program").get<std::string>();
    g.entrypoint = j.at("entrypoint").get<std::string>();
    g.nodes = nodes_from(j.at("nodes"));
    g.edges = edges_from(j.at("edges"));
    g.validate();
    return g;
  });
}

Json to_json(const FSpec& f) {
  Json edges = Json::array();
  for (const auto& e : f.graph.edges) {
    edges.push_back({{"from", e.first}, {"to", e.second}, {"frequency", f.freq(e)}});
  }
  return {{"format", "specminer.fspec/1"}, {"nodes", nodes_json(f.graph.nodes)}, {"edges", edges}};
}

FSpec fspec_from_json(const Json& j) {
  return guarded("FSpec", [&] {
    expect_format(j, "specminer.fspec/1");
    FSpec f;
    f.graph.id = "fspec";
    f.graph.nodes = nodes_from(j.at("nodes"));
    for (const auto& e : j.at("edges")) {
      const Edge edge{e.at("from").get<NodeId>(), e.at("to").get<NodeId>()};
      f.graph.edges.insert(edge);
      f.frequency[edge] = e.at("frequency").get<std::int64_t>();
    }
    f.validate();
    return f;
  });
}

Json to_json(const IfdModel& ifd) {
  Json edges = Json::array();
  for (const auto& e : ifd.edges) edges.push_back({{"writer", e.writer}, {"reader", e.reader}, {"field", e.field}});
  return {{"format", "specminer.ifd/1"},
          {"edges", edges},
          {"writes", ifd.writes},
          {"reads", ifd.reads},
          {"lineage", ifd.lineage}};
}

IfdModel ifd_from_json(const Json& j) {
  return guarded("IFD model", [&] {
    expect_format(j, "specminer.ifd/1");
    IfdModel ifd;
    for (const auto& e : j.at("edges")) {
      ifd.edges.insert({e.at("writer").get<std::string>(), e.at("reader").get<std::string>(),
                        e.at("field").get<std::string>()});
    }
    ifd.writes = j.at("writes").get<std::map<std::string, std::set<std::string>>>();
    ifd.reads = j.at("reads").get<std::map<std::string, std::set<std::string>>>();
    ifd.lineage = j.at("lineage").get<std::map<std::string, std::vector<std::string>>>();
    return ifd;
  });
}

Json to_json(const Violation& v) {
  return {{"program", v.program},
          {"entrypoint", v.entrypoint},
          {"reader", v.reader},
          {"writer", v.writer},
          {"reader_statement", v.reader_statement},
          {"writer_statement", v.writer_statement},
          {"reader_method", v.reader_method},
          {"writer_method", v.writer_method},
          {"field", v.field},
          {"rule", v.rule}};
}

Json to_json(const Recommendation& r) {
  return {{"rank", r.rank},
          {"action", to_string(r.action)},
          {"api", r.api},
          {"secondary", r.secondary},
          {"anchor", r.anchor ? Json(*r.anchor) : Json(nullptr)},
          {"score", r.score}};
}

Json to_json(const MisuseReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back(to_json(v));
  Json fixes = Json::array();
  for (const auto& f : r.fixes) fixes.push_back(to_json(f));
  return {{"violations", violations}, {"order_mismatch", r.order_mismatch}, {"fixes", fixes}};
}

Json to_json(const FrameworkModel& fw) {
  Json types = Json::array();
  for (const auto& [name, t] : fw.types) types.push_back(type_decl_json(t));
  Json bodies = Json::object();
  for (const auto& [m, accesses] : fw.method_bodies) {
    Json list = Json::array();
    for (const auto& a : accesses) {
      list.push_back({{"type", a.type}, {"field", a.field}, {"access", a.kind == AccessKind::Read ? "read" : "write"}});
    }
    bodies[m] = list;
  }
  return {{"format", "specminer.framework/1"},
          {"name", fw.name},
          {"types", types},
          {"method_bodies", bodies},
          {"method_calls", fw.method_calls}};
}

FrameworkModel framework_from_json(const Json& j) {
  return guarded("framework model", [&] {
    expect_format(j, "specminer.framework/1");
    FrameworkModel fw;
    fw.name = j.at("name").get<std::string>();
    for (const auto& t : j.at("types")) {
      auto decl = type_decl_from(t);
      fw.types[decl.name] = std::move(decl);
    }
    for (const auto& [m, list] : j.at("method_bodies").items()) {
      auto& out = fw.method_bodies[m];
      for (const auto& a : list) {
        const auto access = a.at("access").get<std::string>();
        if (access != "read" && access != "write") throw InputError("unknown field access '" + access + "'");
        out.push_back({a.at("type").get<std::string>(), a.at("field").get<std::string>(),
                       access == "read" ? AccessKind::Read : AccessKind::Write});
      }
    }
    fw.method_calls = j.at("method_calls").get<std::map<std::string, std::vector<std::string>>>();
    fw.validate();
    return fw;
  });
}

Json to_json(const ProgramFacts& facts) {
  Json types = Json::array();
  for (const auto& t : facts.types) types.push_back(type_decl_json(t));
  Json methods = Json::object();
  for (const auto& [id, m] : facts.methods) {
    Json instrs = Json::array();
    for (const auto& in : m.instrs) instrs.push_back(instr_json(in));
    Json du = Json::array();
    for (const auto& d : m.def_use) du.push_back({{"def", d.def}, {"use", d.use}, {"var", d.var}});
    methods[id] = {{"file", m.file},        {"owner", m.owner}, {"name", m.name},
                   {"params", m.params},    {"static", m.is_static}, {"instrs", instrs},
                   {"def_use", du},         {"exits", m.exits}};
  }
  Json sites = Json::array();
  for (const auto& c : facts.call_sites) {
    sites.push_back({{"caller", statement_id_json(c.caller)},
                     {"static_target", c.static_target},
                     {"receiver_type", c.receiver_type}});
  }
  return {{"format", "specminer.facts/1"},
          {"name", facts.name},
          {"types", types},
          {"methods", methods},
          {"entrypoints", facts.entrypoints},
          {"call_sites", sites}};
}

ProgramFacts facts_from_json(const Json& j) {
  return guarded("program facts", [&] {
    expect_format(j, "specminer.facts/1");
    ProgramFacts f;
    f.name = j.at("name").get<std::string>();
    for (const auto& t : j.at("types")) f.types.push_back(type_decl_from(t));
    for (const auto& [id, m] : j.at("methods").items()) {
      MethodFacts mf;
      mf.id = id;
      mf.file = m.at("file").get<std::string>();
      mf.owner = m.at("owner").get<std::string>();
      mf.name = m.at("name").get<std::string>();
      mf.params = m.at("params").get<std::vector<std::string>>();
      mf.is_static = m.at("static").get<bool>();
      for (const auto& in : m.at("instrs")) mf.instrs.push_back(instr_from(in));
      for (const auto& d : m.at("def_use")) {
        mf.def_use.push_back({d.at("def").get<int>(), d.at("use").get<int>(), d.at("var").get<std::string>()});
      }
      mf.exits = m.at("exits").get<std::vector<int>>();
      f.methods[id] = std::move(mf);
    }
    f.entrypoints = j.at("entrypoints").get<std::vector<std::string>>();
    for (const auto& c : j.at("call_sites")) {
      f.call_sites.push_back({statement_id_from(c.at("caller")), c.at("static_target").get<std::string>(),
                              c.at("receiver_type").get<std::string>()});
    }
    f.validate();
    return f;
  });
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot read " + file.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(file.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& file, const std::string& text) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write " + file.string());
  out << text;
}

std::string to_csv(const LearningCurve& curve) {
  std::ostringstream os;
  os << "k,cum_graam_nodes,fspec_nodes,fspec_edges\n";
  for (const auto& r : curve.rows) {
    os << r.graams_visited << ',' << r.cumulative_graam_nodes << ',' << r.fspec_nodes << ',' << r.fspec_edges
       << '\n';
  }
  return os.str();
}

std::string file_stem(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

}  // namespace specminer
