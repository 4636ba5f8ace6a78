#include "specminer/sdg.hpp"

#include <algorithm>
#include <set>

#include "specminer/error.hpp"

namespace specminer {

std::string to_string(DepKind kind) { return kind == DepKind::Data ? "data" : "control"; }

std::string to_string(DataVia via) {
  switch (via) {
    case DataVia::Local:
      return "local";
    case DataVia::ParamIn:
      return "param_in";
    case DataVia::ReturnOut:
      return "return_out";
    case DataVia::None:
      return "none";
  }
  return "?";
}

int Sdg::node(int context, int instr) const {
  auto it = index_.find({context, instr});
  if (it == index_.end()) {
    throw AnalysisError("no SDG node for context " + std::to_string(context) + " instr " +
                        std::to_string(instr));
  }
  return it->second;
}

std::vector<std::vector<const SdgEdge*>> Sdg::out_edges() const {
  std::vector<std::vector<const SdgEdge*>> out(nodes.size());
  for (const auto& e : edges) out[e.from].push_back(&e);
  return out;
}

std::vector<std::vector<const SdgEdge*>> Sdg::in_edges() const {
  std::vector<std::vector<const SdgEdge*>> in(nodes.size());
  for (const auto& e : edges) in[e.to].push_back(&e);
  return in;
}

Sdg build_sdg(const CallGraph& cg, const ProgramFacts& facts) {
  Sdg sdg;
  for (std::size_t c = 0; c < cg.contexts.size(); ++c) {
    const auto& m = facts.methods.at(cg.contexts[c].method);
    for (const auto& in : m.instrs) {
      sdg.index_[{static_cast<int>(c), in.index}] = static_cast<int>(sdg.nodes.size());
      sdg.nodes.push_back({static_cast<int>(c), in.index});
    }
  }
  std::set<SdgEdge> edges;
  for (std::size_t c = 0; c < cg.contexts.size(); ++c) {
    const int ctx = static_cast<int>(c);
    const auto& m = facts.methods.at(cg.contexts[c].method);
    for (const auto& du : m.def_use) {
      edges.insert({sdg.node(ctx, du.def), sdg.node(ctx, du.use), DepKind::Data, DataVia::Local, du.var});
    }
    for (const auto& in : m.instrs) {
      if (in.control_parent >= 0) {
        edges.insert({sdg.node(ctx, in.control_parent), sdg.node(ctx, in.index), DepKind::Control,
                      DataVia::None, ""});
      }
    }
  }
  for (const auto& call : cg.edges) {
    const auto& caller = facts.methods.at(cg.contexts[call.caller].method);
    const auto& callee = facts.methods.at(cg.contexts[call.callee].method);
    const auto& site = caller.instrs.at(call.site.index);
    const int call_node = sdg.node(call.caller, site.index);
    const auto nparams = std::min(site.args.size(), callee.params.size());
    for (std::size_t i = 0; i < nparams; ++i) {
      const auto& arg = site.args[i];
      if (arg.empty()) continue;
      for (const auto& du : caller.def_use) {
        if (du.use == site.index && du.var == arg) {
          // Params are lowered first, so parameter i is instruction i.
          edges.insert({sdg.node(call.caller, du.def), sdg.node(call.callee, static_cast<int>(i)),
                        DepKind::Data, DataVia::ParamIn, callee.params[i]});
        }
      }
    }
    if (site.def.empty()) continue;
    for (const auto& in : callee.instrs) {
      if (in.kind == InstrKind::Return && !in.uses.empty()) {
        edges.insert({sdg.node(call.callee, in.index), call_node, DepKind::Data,
                      DataVia::ReturnOut, site.def});
      }
    }
  }
  sdg.edges.assign(edges.begin(), edges.end());
  return sdg;
}

}  // namespace specminer
