#include "specminer/ifd.hpp"

#include <algorithm>
#include <deque>

#include "specminer/graph_algo.hpp"

namespace specminer {

namespace {

std::vector<std::string> framework_lineage(const FrameworkModel& fw, const std::string& type) {
  std::vector<std::string> order{type};
  std::set<std::string> seen{type};
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto it = fw.types.find(order[i]);
    if (it == fw.types.end()) continue;
    for (const auto& s : it->second.supertypes) {
      if (fw.types.contains(s) && seen.insert(s).second) order.push_back(s);
    }
  }
  return order;
}

std::string split_type(const std::string& id) { return id.substr(0, id.rfind('.')); }
std::string split_member(const std::string& id) { return id.substr(id.rfind('.') + 1); }

}  // namespace

std::optional<std::string> IfdModel::method_for(const ApiLabel& label) const {
  if (label.kind != ApiKind::MethodInvoke) return std::nullopt;
  auto it = lineage.find(label.target);
  if (it == lineage.end()) return std::nullopt;
  for (const auto& t : it->second) {
    auto id = t + "." + label.member;
    if (writes.contains(id) || reads.contains(id)) return id;
  }
  return std::nullopt;
}

std::vector<std::string> IfdModel::fields_between(const std::string& writer,
                                                  const std::string& reader) const {
  std::vector<std::string> out;
  for (const auto& e : edges) {
    if (e.writer == writer && e.reader == reader) out.push_back(e.field);
  }
  return out;
}

bool IfdModel::writes_field(const std::string& method, const std::string& field) const {
  auto it = writes.find(method);
  return it != writes.end() && it->second.contains(field);
}

bool IfdModel::precedes(const std::string& writer, const std::string& reader) const {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const IfdEdge& e) { return e.writer == writer && e.reader == reader; });
}

IfdModel mine_ifd(const FrameworkModel& framework, int transitive_depth) {
  IfdModel ifd;
  for (const auto& [name, decl] : framework.types) ifd.lineage[name] = framework_lineage(framework, name);

  auto body_of = [&](const std::string& id) -> std::optional<std::string> {
    auto it = ifd.lineage.find(split_type(id));
    if (it == ifd.lineage.end()) return framework.method_bodies.contains(id) ? std::optional(id) : std::nullopt;
    for (const auto& t : it->second) {
      auto candidate = t + "." + split_member(id);
      if (framework.method_bodies.contains(candidate)) return candidate;
    }
    return std::nullopt;
  };

  for (const auto& [method, accesses] : framework.method_bodies) {
    auto& w = ifd.writes[method];
    auto& r = ifd.reads[method];
    // Breadth-first over same-class callees, one level per unit of depth.
    std::set<std::string> visited{method};
    std::vector<std::string> frontier{method};
    for (int depth = 0; depth <= std::max(transitive_depth, 0) && !frontier.empty(); ++depth) {
      std::vector<std::string> next;
      for (const auto& m : frontier) {
        if (auto it = framework.method_bodies.find(m); it != framework.method_bodies.end()) {
          for (const auto& a : it->second) {
            (a.kind == AccessKind::Write ? w : r).insert(a.type + "." + a.field);
          }
        }
        if (auto it = framework.method_calls.find(m); it != framework.method_calls.end()) {
          for (const auto& callee : it->second) {
            auto body = body_of(callee);
            if (body && visited.insert(*body).second) next.push_back(*body);
          }
        }
      }
      frontier = std::move(next);
    }
  }
  for (const auto& [writer, fields] : ifd.writes) {
    for (const auto& [reader, read_fields] : ifd.reads) {
      if (writer == reader) continue;
      for (const auto& f : fields) {
        if (read_fields.contains(f)) ifd.edges.insert({writer, reader, f});
      }
    }
  }
  return ifd;
}

bool same_receiver(const UsageNode& a, const UsageNode& b) {
  if (a.receivers.empty() && b.receivers.empty()) return a.label.target == b.label.target;
  for (NodeId x : a.receivers) {
    if (std::find(b.receivers.begin(), b.receivers.end(), x) != b.receivers.end()) return true;
  }
  return false;
}

namespace {

std::vector<Violation> violations_under(const std::vector<UsageNode>& nodes,
                                        const std::vector<std::vector<bool>>& before,
                                        const IfdModel& ifd, const std::string& program,
                                        const std::string& entrypoint) {
  std::vector<std::optional<std::string>> method(nodes.size());
  for (const auto& n : nodes) {
    if (n.is_api()) method[n.id] = ifd.method_for(n.label);
  }
  std::vector<Violation> out;
  for (const auto& r : nodes) {
    if (!method[r.id]) continue;
    for (const auto& w : nodes) {
      if (w.id == r.id || !method[w.id] || !before[r.id][w.id] || !same_receiver(r, w)) continue;
      for (const auto& field : ifd.fields_between(*method[w.id], *method[r.id])) {
        bool covered = false;
        for (const auto& x : nodes) {
          if (x.id == r.id || x.id == w.id || !method[x.id]) continue;
          if (!ifd.writes_field(*method[x.id], field) || !same_receiver(x, r)) continue;
          // A prior write already fed the reader, or a nearer writer follows it.
          if (before[x.id][r.id] || (before[r.id][x.id] && before[x.id][w.id])) {
            covered = true;
            break;
          }
        }
        if (covered) continue;
        Violation v;
        v.program = program;
        v.entrypoint = entrypoint;
        v.reader = r.id;
        v.writer = w.id;
        v.reader_statement = r.statement ? r.statement->id() : r.label.str();
        v.writer_statement = w.statement ? w.statement->id() : w.label.str();
        v.reader_method = *method[r.id];
        v.writer_method = *method[w.id];
        v.field = field;
        out.push_back(std::move(v));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Violation> check_violations(const PrimaryApiUsageGraph& g, const IfdModel& ifd) {
  std::set<Edge> all = g.sequence_edges;
  all.insert(g.data_edges.begin(), g.data_edges.end());
  return violations_under(g.nodes, transitive_closure(g.nodes.size(), all), ifd, g.program,
                          g.entrypoint);
}

std::vector<Violation> check_violations(const Graam& g, const IfdModel& ifd) {
  return violations_under(g.nodes, transitive_closure(g.nodes.size(), g.edges), ifd, g.program,
                          g.entrypoint);
}

SoundnessSplit filter_sound(const std::vector<PrimaryApiUsageGraph>& corpus, const IfdModel& ifd) {
  SoundnessSplit out;
  for (const auto& g : corpus) {
    auto v = check_violations(g, ifd);
    if (v.empty()) {
      out.sound.push_back(g);
    } else {
      out.unsound.emplace_back(g, std::move(v));
    }
  }
  return out;
}

}  // namespace specminer
