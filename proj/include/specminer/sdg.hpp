#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "specminer/callgraph.hpp"
#include "specminer/facts.hpp"

namespace specminer {

enum class DepKind { Data, Control };
// How a data edge arises: a local def/use pair, an argument bound to a
// parameter, or a returned value bound to the call result.
enum class DataVia { Local, ParamIn, ReturnOut, None };

std::string to_string(DepKind kind);
std::string to_string(DataVia via);

struct SdgNode {
  int context = 0;
  int instr = 0;
};

struct SdgEdge {
  int from = 0;
  int to = 0;
  DepKind kind = DepKind::Data;
  DataVia via = DataVia::None;
  std::string var;

  auto operator<=>(const SdgEdge&) const = default;
};

/// System dependence graph: one node per statement per 1-CFA context.
struct Sdg {
  std::vector<SdgNode> nodes;
  std::vector<SdgEdge> edges;  // sorted

  int node(int context, int instr) const;
  std::vector<std::vector<const SdgEdge*>> out_edges() const;
  std::vector<std::vector<const SdgEdge*>> in_edges() const;

 private:
  friend Sdg build_sdg(const CallGraph&, const ProgramFacts&);
  std::map<std::pair<int, int>, int> index_;
};

Sdg build_sdg(const CallGraph& cg, const ProgramFacts& facts);

}  // namespace specminer
