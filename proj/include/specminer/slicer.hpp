#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specminer/callgraph.hpp"
#include "specminer/class_hierarchy.hpp"
#include "specminer/facts.hpp"
#include "specminer/model.hpp"
#include "specminer/sdg.hpp"

namespace specminer {

/// Everything derived from one lowered program that the slicer needs.
struct ProgramAnalysis {
  ProgramFacts facts;
  ClassHierarchy ch;
  CallGraph cg;
  Sdg sdg;
};

ProgramAnalysis analyze(ProgramFacts facts, const FrameworkModel& framework);

/// Node subset of an SDG. `api[n]` is set for framework-related nodes.
struct SdgSlice {
  std::vector<bool> kept;
  std::vector<std::optional<ApiStatement>> api;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
};

/// Framework-related statements plus everything backward or forward
/// reachable from them over data and control edges.
SdgSlice slice(const Sdg& sdg, const ProgramFacts& facts, const CallGraph& cg,
               const ClassHierarchy& ch);
SdgSlice slice(const ProgramAnalysis& a);

/// Contracts the slice restricted to one entry point's contexts down to its
/// framework-related nodes. Throws EmptyUsage when none remain.
PrimaryApiUsageGraph build_primary_graph(const ProgramAnalysis& a, const SdgSlice& sliced,
                                         const std::string& entrypoint);

/// One primary graph per entry point, in entry point order. Entry points
/// without framework-related statements are skipped and named in `skipped`.
std::vector<PrimaryApiUsageGraph> extract_usages(const ProgramAnalysis& a,
                                                 std::vector<std::string>* skipped = nullptr);

}  // namespace specminer
